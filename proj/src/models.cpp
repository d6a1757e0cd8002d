#include "qsynth/models.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace qsynth {

namespace {

constexpr double kPi = std::numbers::pi;

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r *= base;
  return r;
}

std::vector<std::size_t> unflatten(std::size_t flat, std::size_t M,
                                   std::size_t D) {
  std::vector<std::size_t> p(D);
  for (std::size_t j = 0; j < D; ++j) {
    p[j] = flat % M;
    flat /= M;
  }
  return p;
}

std::size_t flatten(const std::vector<std::size_t>& p, std::size_t M) {
  std::size_t f = 0;
  for (std::size_t j = p.size(); j-- > 0;) f = f * M + p[j];
  return f;
}

std::size_t mod_sub(std::size_t a, std::size_t b, std::size_t M) {
  return (a + M - b % M) % M;
}

/// Componentwise p - q mod M on flat indices.
std::size_t grid_sub(std::size_t p, std::size_t q, std::size_t M,
                     std::size_t D) {
  auto pv = unflatten(p, M, D);
  auto qv = unflatten(q, M, D);
  for (std::size_t j = 0; j < D; ++j) pv[j] = mod_sub(pv[j], qv[j], M);
  return flatten(pv, M);
}

int sign_of(double x) { return x >= 0.0 ? 1 : -1; }

}  // namespace

std::size_t DualBasisSpec::spatial_count() const { return ipow(M, D); }

double wigner_seitz_omega(std::size_t num_spin_orbitals, double rs) {
  const double eta = static_cast<double>(num_spin_orbitals) / 2.0;
  return (4.0 * kPi / 3.0) * eta * rs * rs * rs;
}

DualBasisCoefficients dual_basis_coefficients(const DualBasisSpec& spec) {
  if (spec.M < 1) throw std::invalid_argument("M must be >= 1");
  if (!(spec.omega > 0.0)) throw std::invalid_argument("omega must be positive");
  for (const auto& [pos, charge] : spec.nuclei) {
    (void)pos;
    if (!(charge > 0.0)) throw std::invalid_argument("nuclear charge must be positive");
  }
  const std::size_t M = spec.M;
  const std::size_t D = spec.D;
  const std::size_t n_spatial = spec.spatial_count();
  const double n_spin = static_cast<double>(2 * n_spatial);
  const double cell = std::pow(spec.omega, 1.0 / static_cast<double>(D));
  const double spacing = cell / static_cast<double>(M);

  // Momentum modes: M integers per axis centered on zero.
  std::vector<long> nu_axis(M);
  for (std::size_t i = 0; i < M; ++i) {
    nu_axis[i] = static_cast<long>(i) - static_cast<long>(M / 2);
  }

  DualBasisCoefficients out;
  out.M = M;
  out.D = D;
  out.kinetic.assign(n_spatial, 0.0);
  out.external.assign(n_spatial, 0.0);
  out.interaction.assign(n_spatial, 0.0);

  for (std::size_t p = 0; p < n_spatial; ++p) {
    auto pv = unflatten(p, M, D);
    std::vector<double> rp(D);
    for (std::size_t j = 0; j < D; ++j) {
      rp[j] = static_cast<double>(pv[j]) * spacing;
    }
    double t_sum = 0.0, u_sum = 0.0, v_sum = 0.0;
    const std::size_t n_modes = n_spatial;
    for (std::size_t m = 0; m < n_modes; ++m) {
      auto mv = unflatten(m, M, D);
      double k2 = 0.0;
      double k_dot_rp = 0.0;
      std::vector<double> k(D);
      bool zero_mode = true;
      for (std::size_t j = 0; j < D; ++j) {
        const long nu = nu_axis[mv[j]];
        if (nu != 0) zero_mode = false;
        k[j] = 2.0 * kPi * static_cast<double>(nu) / cell;
        k2 += k[j] * k[j];
        k_dot_rp += k[j] * rp[j];
      }
      t_sum += k2 * std::cos(k_dot_rp) / (2.0 * n_spin);
      if (!zero_mode) {
        v_sum += 2.0 * kPi * std::cos(k_dot_rp) / (spec.omega * k2);
        for (const auto& [pos, charge] : spec.nuclei) {
          double k_dot_r = 0.0;
          for (std::size_t j = 0; j < D && j < 3; ++j) k_dot_r += k[j] * pos[j];
          u_sum -= 4.0 * kPi * charge * std::cos(k_dot_r - k_dot_rp) /
                   (spec.omega * k2);
        }
      }
    }
    out.kinetic[p] = t_sum;
    out.external[p] = u_sum;
    out.interaction[p] = v_sum;
  }
  return out;
}

std::size_t spin_orbital_index(const std::vector<std::size_t>& p, int sigma,
                               std::size_t M, std::size_t D) {
  if (p.size() != D) throw std::invalid_argument("p must have D components");
  if (sigma != 0 && sigma != 1) throw std::invalid_argument("sigma must be 0 or 1");
  std::size_t f = 0;
  std::size_t stride = 1;
  for (std::size_t j = 0; j < D; ++j) {
    if (p[j] >= M) throw std::out_of_range("orbital component out of range");
    f += p[j] * stride;
    stride *= M;
  }
  return f + static_cast<std::size_t>(sigma) * stride;
}

namespace {

std::vector<std::pair<std::size_t, char>> hop_string(std::size_t lo,
                                                     std::size_t hi, char end) {
  std::vector<std::pair<std::size_t, char>> ps;
  ps.emplace_back(lo, end);
  for (std::size_t j = lo + 1; j < hi; ++j) ps.emplace_back(j, 'Z');
  ps.emplace_back(hi, end);
  return ps;
}

}  // namespace

LcuHamiltonian jw_terms(const DualBasisCoefficients& coeffs) {
  const std::size_t M = coeffs.M;
  const std::size_t D = coeffs.D;
  const std::size_t n_spatial = coeffs.kinetic.size();
  const std::size_t N = 2 * n_spatial;

  LcuHamiltonian lcu;
  lcu.num_qubits = N;

  // Effective single-site coefficient: T(0) + U(p) + sum over the other
  // spin-orbitals of V, i.e. 2 * sum_q V(p-q) - V(0).
  std::vector<double> site_coeff(n_spatial);
  double v_all = 0.0;
  for (std::size_t p = 0; p < n_spatial; ++p) {
    double vsum = 0.0;
    for (std::size_t q = 0; q < n_spatial; ++q) {
      vsum += coeffs.interaction[grid_sub(p, q, M, D)];
    }
    v_all += vsum;
    site_coeff[p] = coeffs.kinetic[0] + coeffs.external[p] + 2.0 * vsum -
                    coeffs.interaction[0];
  }

  // Hopping: one X-type and one Y-type term per unordered spatial pair and
  // spin, each of weight |T(p-q)| / 2.
  for (std::size_t p = 0; p < n_spatial; ++p) {
    for (std::size_t q = p + 1; q < n_spatial; ++q) {
      const double t = coeffs.kinetic[grid_sub(p, q, M, D)];
      if (t == 0.0) continue;
      for (int sigma : {0, 1}) {
        const std::size_t fp = p + static_cast<std::size_t>(sigma) * n_spatial;
        const std::size_t fq = q + static_cast<std::size_t>(sigma) * n_spatial;
        lcu.terms.push_back(
            {std::abs(t) / 2.0, sign_of(t), hop_string(fp, fq, 'X')});
        lcu.terms.push_back(
            {std::abs(t) / 2.0, sign_of(t), hop_string(fp, fq, 'Y')});
      }
    }
  }

  // Interaction ZZ: every ordered pair of distinct spin-orbitals at
  // |V(p-q)| / 4.
  for (std::size_t fp = 0; fp < N; ++fp) {
    for (std::size_t fq = 0; fq < N; ++fq) {
      if (fp == fq) continue;
      const std::size_t p = fp % n_spatial;
      const std::size_t q = fq % n_spatial;
      const double v = coeffs.interaction[grid_sub(p, q, M, D)];
      if (v == 0.0) continue;
      std::vector<std::pair<std::size_t, char>> ps;
      ps.emplace_back(std::min(fp, fq), 'Z');
      ps.emplace_back(std::max(fp, fq), 'Z');
      lcu.terms.push_back({std::abs(v) / 4.0, sign_of(v), ps});
    }
  }

  // Single Z per spin-orbital, with the JW minus sign carried in `sign`.
  for (std::size_t f = 0; f < N; ++f) {
    const double cz = site_coeff[f % n_spatial];
    if (cz == 0.0) continue;
    lcu.terms.push_back(
        {std::abs(cz) / 2.0, -sign_of(cz), {{f, 'Z'}}});
  }

  // Identity part, kept out of lambda:
  // n_s T(0) + sum_p U(p) + sum_pq V(p-q) - n_s V(0) / 2.
  lcu.energy_offset = static_cast<double>(n_spatial) * coeffs.kinetic[0] +
                      v_all -
                      static_cast<double>(n_spatial) * coeffs.interaction[0] / 2.0;
  for (std::size_t p = 0; p < n_spatial; ++p) {
    lcu.energy_offset += coeffs.external[p];
  }

  for (const auto& term : lcu.terms) lcu.lambda += term.weight;
  set_norm_bound(lcu);
  return lcu;
}

std::vector<std::pair<std::size_t, std::size_t>> hubbard_directed_edges(
    std::size_t M) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t y = 0; y < M; ++y) {
    for (std::size_t x = 0; x < M; ++x) {
      const std::size_t p = x + y * M;
      edges.emplace_back(p, (x + 1) % M + y * M);
      edges.emplace_back(p, (x + M - 1) % M + y * M);
      edges.emplace_back(p, x + ((y + 1) % M) * M);
      edges.emplace_back(p, x + ((y + M - 1) % M) * M);
    }
  }
  return edges;
}

LcuHamiltonian hubbard_terms(const HubbardSpec& spec) {
  if (spec.M < 2) throw std::invalid_argument("Hubbard lattice needs M >= 2");
  if (spec.t < 0.0 || spec.u < 0.0) {
    throw std::invalid_argument("t and u must be non-negative");
  }
  const std::size_t n_sites = spec.M * spec.M;
  const std::size_t N = 2 * n_sites;
  LcuHamiltonian lcu;
  lcu.num_qubits = N;

  // Hopping: one term per directed edge and spin; X-type when source < sink.
  for (const auto& [p, q] : hubbard_directed_edges(spec.M)) {
    for (int sigma : {0, 1}) {
      const std::size_t fp = p + static_cast<std::size_t>(sigma) * n_sites;
      const std::size_t fq = q + static_cast<std::size_t>(sigma) * n_sites;
      const char kind = fp < fq ? 'X' : 'Y';
      lcu.terms.push_back({spec.t / 2.0, -1,
                           hop_string(std::min(fp, fq), std::max(fp, fq), kind)});
    }
  }

  // Same-site ZZ, both spin orders, u/8 each.
  for (std::size_t p = 0; p < n_sites; ++p) {
    for (int rep = 0; rep < 2; ++rep) {
      lcu.terms.push_back(
          {spec.u / 8.0, 1, {{p, 'Z'}, {p + n_sites, 'Z'}}});
    }
  }

  // -u/4 Z per spin-orbital.
  for (std::size_t f = 0; f < N; ++f) {
    lcu.terms.push_back({spec.u / 4.0, -1, {{f, 'Z'}}});
  }

  // Identity uN/8 as an explicit term: it tops lambda up to 2Nt + Nu/2 and
  // makes the walk encode the full Hamiltonian, constant included.
  lcu.terms.push_back(
      {spec.u * static_cast<double>(N) / 8.0, 1, {}});

  for (const auto& term : lcu.terms) lcu.lambda += term.weight;
  set_norm_bound(lcu);
  return lcu;
}

Eigen::MatrixXcd pauli_string_matrix(
    std::size_t num_qubits,
    const std::vector<std::pair<std::size_t, char>>& ps) {
  const std::size_t dim = std::size_t{1} << num_qubits;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  const std::complex<double> kI{0.0, 1.0};
  // Column-wise: each Pauli string maps basis state |col> to phase * |row>.
  for (std::size_t col = 0; col < dim; ++col) {
    std::size_t row = col;
    std::complex<double> phase = 1.0;
    for (const auto& [q, kind] : ps) {
      const bool bit = (col >> q) & 1;
      switch (kind) {
        case 'X':
          row ^= std::size_t{1} << q;
          break;
        case 'Y':
          row ^= std::size_t{1} << q;
          phase *= bit ? -kI : kI;
          break;
        case 'Z':
          if (bit) phase = -phase;
          break;
        default:
          throw std::invalid_argument("bad Pauli kind");
      }
    }
    m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) += phase;
  }
  return m;
}

Eigen::MatrixXcd lcu_dense_matrix(const LcuHamiltonian& lcu,
                                  bool include_offset) {
  const std::size_t dim = std::size_t{1} << lcu.num_qubits;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& term : lcu.terms) {
    h += term.weight * static_cast<double>(term.sign) *
         pauli_string_matrix(lcu.num_qubits, term.paulis);
  }
  if (include_offset) {
    h += lcu.energy_offset * Eigen::MatrixXcd::Identity(dim, dim);
  }
  return h;
}

void set_norm_bound(LcuHamiltonian& lcu, std::size_t dense_cap,
                    double fraction) {
  if (lcu.num_qubits <= dense_cap) {
    Eigen::MatrixXcd h = lcu_dense_matrix(lcu, false);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    double norm = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      norm = std::max(norm, std::abs(es.eigenvalues()[i]));
    }
    lcu.norm_bound = norm;
  } else {
    lcu.norm_bound = fraction * lcu.lambda;
  }
}

DualBasisSpec ModelConfig::dual_basis_spec() const {
  DualBasisSpec spec;
  spec.M = M;
  spec.D = D;
  spec.nuclei = nuclei;
  if (omega > 0.0) {
    spec.omega = omega;
  } else if (rs > 0.0) {
    spec.omega = wigner_seitz_omega(spec.num_spin_orbitals(), rs);
  } else {
    throw std::invalid_argument("chem model needs rs or omega");
  }
  return spec;
}

HubbardSpec ModelConfig::hubbard_spec() const {
  HubbardSpec spec;
  spec.M = M;
  spec.t = t;
  spec.u = u;
  return spec;
}

namespace {

ModelConfig parse_json_config(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ModelConfig cfg;
  cfg.model = j.value("model", "");
  cfg.M = j.value("M", 2);
  cfg.D = j.value("D", cfg.model == "hubbard" ? 2 : 3);
  cfg.t = j.value("t", 1.0);
  cfg.u = j.value("u", 4.0);
  cfg.rs = j.value("rs", 0.0);
  cfg.omega = j.value("omega", 0.0);
  cfg.dE = j.value("dE", 0.0016);
  cfg.eps_synth = j.value("eps_synth", 1e-10);
  cfg.p_phys = j.value("p", 1e-3);
  cfg.seed = j.value("seed", 0);
  if (j.contains("nuclei")) {
    for (const auto& entry : j["nuclei"]) {
      std::array<double, 3> pos{entry.at(0).get<double>(),
                                entry.at(1).get<double>(),
                                entry.at(2).get<double>()};
      cfg.nuclei.emplace_back(pos, entry.at(3).get<double>());
    }
  }
  return cfg;
}

[[noreturn]] void config_error(int line, const std::string& msg) {
  throw std::invalid_argument("config line " + std::to_string(line) + ": " + msg);
}

}  // namespace

ModelConfig parse_model_config(const std::string& text) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    return parse_json_config(text);
  }
  ModelConfig cfg;
  bool d_given = false;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    auto end = line.find_last_not_of(" \t\r");
    line = line.substr(begin, end - begin + 1);
    if (line.front() == '[' && line.back() == ']') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) config_error(line_no, "expected key = value");
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    auto trim = [](std::string& s) {
      auto b = s.find_first_not_of(" \t");
      auto e = s.find_last_not_of(" \t");
      s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
    };
    trim(key);
    trim(value);
    if (value.empty()) config_error(line_no, "empty value for " + key);
    try {
      if (key == "model") {
        cfg.model = value;
      } else if (key == "M") {
        cfg.M = std::stoul(value);
      } else if (key == "D") {
        cfg.D = std::stoul(value);
        d_given = true;
      } else if (key == "t") {
        cfg.t = std::stod(value);
      } else if (key == "u") {
        cfg.u = std::stod(value);
      } else if (key == "rs") {
        cfg.rs = std::stod(value);
      } else if (key == "omega") {
        cfg.omega = std::stod(value);
      } else if (key == "dE") {
        cfg.dE = std::stod(value);
      } else if (key == "eps_synth") {
        cfg.eps_synth = std::stod(value);
      } else if (key == "p") {
        cfg.p_phys = std::stod(value);
      } else if (key == "seed") {
        cfg.seed = std::stoull(value);
      } else if (key == "nuclei") {
        std::istringstream groups(value);
        std::string group;
        while (std::getline(groups, group, ';')) {
          std::istringstream gs(group);
          double x, y, z, charge;
          char comma;
          if (gs >> x >> comma >> y >> comma >> z >> comma >> charge) {
            cfg.nuclei.emplace_back(std::array<double, 3>{x, y, z}, charge);
          } else {
            config_error(line_no, "bad nucleus entry '" + group + "'");
          }
        }
      } else {
        config_error(line_no, "unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument& e) {
      throw;
    } catch (const std::exception&) {
      config_error(line_no, "bad value for " + key);
    }
  }
  if (cfg.model != "chem" && cfg.model != "hubbard") {
    throw std::invalid_argument("config: model must be chem or hubbard");
  }
  if (!d_given && cfg.model == "hubbard") cfg.D = 2;
  return cfg;
}

}  // namespace qsynth
