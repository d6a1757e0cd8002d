#include <doctest.h>

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "qsynth/models.hpp"
#include "qsynth/resources.hpp"

using namespace qsynth;

namespace {

/// Jordan-Wigner ladder operators as dense matrices (little-endian bits).
Eigen::MatrixXcd jw_annihilate(std::size_t n, std::size_t j) {
  const std::size_t dim = std::size_t{1} << n;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t b = 0; b < dim; ++b) {
    if (!((b >> j) & 1)) continue;
    int parity = 0;
    for (std::size_t k = 0; k < j; ++k) parity ^= (b >> k) & 1;
    a(b ^ (std::size_t{1} << j), b) = parity ? -1.0 : 1.0;
  }
  return a;
}

/// Direct second-quantized electronic-structure Hamiltonian: hopping over all
/// ordered orbital pairs, on-site potential, and the interaction over ordered
/// pairs of distinct spin-orbitals.
Eigen::MatrixXcd direct_chem_matrix(const DualBasisCoefficients& coeffs) {
  const std::size_t M = coeffs.M;
  const std::size_t D = coeffs.D;
  std::size_t n_spatial = 1;
  for (std::size_t j = 0; j < D; ++j) n_spatial *= M;
  const std::size_t N = 2 * n_spatial;
  const std::size_t dim = std::size_t{1} << N;

  auto gsub = [&](std::size_t p, std::size_t q) {
    std::size_t f = 0, stride = 1, pp = p, qq = q;
    for (std::size_t j = 0; j < D; ++j) {
      f += ((pp % M + M - qq % M) % M) * stride;
      pp /= M;
      qq /= M;
      stride *= M;
    }
    return f;
  };

  std::vector<Eigen::MatrixXcd> a(N), ad(N);
  for (std::size_t j = 0; j < N; ++j) {
    a[j] = jw_annihilate(N, j);
    ad[j] = a[j].adjoint();
  }
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t p = 0; p < n_spatial; ++p) {
    for (std::size_t q = 0; q < n_spatial; ++q) {
      const double t = coeffs.kinetic[gsub(p, q)];
      if (t != 0.0) {
        for (int s : {0, 1}) {
          h += t * ad[p + s * n_spatial] * a[q + s * n_spatial];
        }
      }
    }
  }
  for (std::size_t p = 0; p < n_spatial; ++p) {
    const double u = coeffs.external[p];
    if (u != 0.0) {
      for (int s : {0, 1}) {
        h += u * ad[p + s * n_spatial] * a[p + s * n_spatial];
      }
    }
  }
  for (std::size_t fp = 0; fp < N; ++fp) {
    for (std::size_t fq = 0; fq < N; ++fq) {
      if (fp == fq) continue;
      const double v = coeffs.interaction[gsub(fp % n_spatial, fq % n_spatial)];
      if (v != 0.0) {
        h += v * (ad[fp] * a[fp]) * (ad[fq] * a[fq]);
      }
    }
  }
  return h;
}

/// Direct Hubbard Hamiltonian from the directed-edge multigraph.
Eigen::MatrixXcd direct_hubbard_matrix(const HubbardSpec& spec) {
  const std::size_t n_sites = spec.M * spec.M;
  const std::size_t N = 2 * n_sites;
  const std::size_t dim = std::size_t{1} << N;
  std::vector<Eigen::MatrixXcd> a(N), ad(N);
  for (std::size_t j = 0; j < N; ++j) {
    a[j] = jw_annihilate(N, j);
    ad[j] = a[j].adjoint();
  }
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [p, q] : hubbard_directed_edges(spec.M)) {
    for (int s : {0, 1}) {
      h -= spec.t * ad[p + s * n_sites] * a[q + s * n_sites];
    }
  }
  for (std::size_t p = 0; p < n_sites; ++p) {
    Eigen::MatrixXcd nu = ad[p] * a[p];
    Eigen::MatrixXcd nd = ad[p + n_sites] * a[p + n_sites];
    h += spec.u * nu * nd;
  }
  return h;
}

}  // namespace

TEST_CASE("spin orbital index mapping") {
  const std::vector<std::size_t> p12{1, 2}, p00{0, 0}, p111{1, 1, 1}, p40{4, 0};
  CHECK(spin_orbital_index(p12, 0, 4, 2) == 9);
  CHECK(spin_orbital_index(p00, 1, 4, 2) == 16);
  CHECK(spin_orbital_index(p111, 1, 2, 3) == 15);
  CHECK_THROWS_AS(spin_orbital_index(p40, 0, 4, 2), std::out_of_range);
}

TEST_CASE("dual basis coefficients with no nuclei have zero external part") {
  DualBasisSpec spec;
  spec.M = 3;
  spec.D = 3;
  spec.omega = 100.0;
  auto coeffs = dual_basis_coefficients(spec);
  for (double u : coeffs.external) CHECK(u == 0.0);
}

TEST_CASE("interaction is even: V(p) = V(-p)") {
  DualBasisSpec spec;
  spec.M = 3;
  spec.D = 3;
  spec.omega = 77.0;
  auto coeffs = dual_basis_coefficients(spec);
  const std::size_t M = 3;
  for (std::size_t p = 0; p < 27; ++p) {
    std::size_t mp = 0, stride = 1, pp = p;
    for (int j = 0; j < 3; ++j) {
      mp += ((M - pp % M) % M) * stride;
      pp /= M;
      stride *= M;
    }
    CHECK(coeffs.interaction[p] == doctest::Approx(coeffs.interaction[mp]));
  }
}

TEST_CASE("kinetic coefficient matches an independent long-double summation") {
  DualBasisSpec spec;
  spec.M = 3;
  spec.D = 3;
  spec.omega = wigner_seitz_omega(54, 10.0);
  auto coeffs = dual_basis_coefficients(spec);

  const long double cell = std::pow(static_cast<long double>(spec.omega), 1.0L / 3.0L);
  long double t0 = 0.0L;
  const long double pi = 3.14159265358979323846264338327950288L;
  for (int nx = -1; nx <= 1; ++nx) {
    for (int ny = -1; ny <= 1; ++ny) {
      for (int nz = -1; nz <= 1; ++nz) {
        const long double k2 =
            (2.0L * pi / cell) * (2.0L * pi / cell) *
            static_cast<long double>(nx * nx + ny * ny + nz * nz);
        t0 += k2 * 1.0L / (2.0L * 54.0L);
      }
    }
  }
  CHECK(std::abs(coeffs.kinetic[0] - static_cast<double>(t0)) < 1e-14);
}

TEST_CASE("nuclei enter the external potential") {
  DualBasisSpec spec;
  spec.M = 2;
  spec.D = 3;
  spec.omega = 50.0;
  spec.nuclei = {{{0.5, 0.5, 0.5}, 2.0}};
  auto coeffs = dual_basis_coefficients(spec);
  bool any_nonzero = false;
  for (double u : coeffs.external) any_nonzero |= u != 0.0;
  CHECK(any_nonzero);
  auto bad_charge = [] {
    DualBasisSpec bad;
    std::array<double, 3> origin{0.0, 0.0, 0.0};
    bad.nuclei.emplace_back(origin, -1.0);
    dual_basis_coefficients(bad);
  };
  CHECK_THROWS_AS(bad_charge(), std::invalid_argument);
}

TEST_CASE("jw_terms reconstructs the direct 1D toy Hamiltonian exactly") {
  DualBasisSpec spec;
  spec.M = 2;
  spec.D = 1;
  spec.omega = 8.0;
  auto coeffs = dual_basis_coefficients(spec);
  LcuHamiltonian lcu = jw_terms(coeffs);
  CHECK(lcu.num_qubits == 4);

  Eigen::MatrixXcd assembled = lcu_dense_matrix(lcu, true);
  Eigen::MatrixXcd direct = direct_chem_matrix(coeffs);
  CHECK((assembled - direct).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((assembled - assembled.adjoint()).cwiseAbs().maxCoeff() < 1e-12);

  double sum = 0.0;
  for (const auto& t : lcu.terms) sum += t.weight;
  CHECK(lcu.lambda == doctest::Approx(sum).epsilon(1e-14));
  CHECK(lcu.norm_bound < lcu.lambda);
}

TEST_CASE("jw_terms matches the direct matrix on a 2D toy with nuclei") {
  DualBasisSpec spec;
  spec.M = 2;
  spec.D = 2;
  spec.omega = 30.0;
  spec.nuclei = {{{1.0, 0.3, 0.0}, 1.5}};
  auto coeffs = dual_basis_coefficients(spec);
  LcuHamiltonian lcu = jw_terms(coeffs);
  CHECK(lcu.num_qubits == 8);
  Eigen::MatrixXcd assembled = lcu_dense_matrix(lcu, true);
  Eigen::MatrixXcd direct = direct_chem_matrix(coeffs);
  CHECK((assembled - direct).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("hubbard closed-form lambda") {
  HubbardSpec spec;
  spec.M = 6;
  spec.t = 1.0;
  spec.u = 4.0;
  LcuHamiltonian lcu = hubbard_terms(spec);
  CHECK(lcu.lambda == doctest::Approx(288.0).epsilon(1e-14));
  double sum = 0.0;
  for (const auto& t : lcu.terms) sum += t.weight;
  CHECK(sum == doctest::Approx(288.0).epsilon(1e-14));

  HubbardSpec big;
  big.M = 8;
  big.t = 1.0;
  big.u = 4.0;
  LcuHamiltonian lcu8 = hubbard_terms(big);
  CHECK(lcu8.lambda == doctest::Approx(512.0).epsilon(1e-14));
  const double bound = std::sqrt(2.0) * M_PI * lcu8.lambda / 0.01;
  CHECK(bound == doctest::Approx(2.3e5).epsilon(0.02));
}

TEST_CASE("hubbard M=2 dense matrix equals the direct JW construction") {
  HubbardSpec spec;
  spec.M = 2;
  spec.t = 1.0;
  spec.u = 4.0;
  LcuHamiltonian lcu = hubbard_terms(spec);
  CHECK(lcu.num_qubits == 8);
  Eigen::MatrixXcd assembled = lcu_dense_matrix(lcu, false);
  Eigen::MatrixXcd direct = direct_hubbard_matrix(spec);
  CHECK((assembled - direct).cwiseAbs().maxCoeff() < 1e-12);
  HubbardSpec tiny;
  tiny.M = 1;
  CHECK_THROWS_AS(hubbard_terms(tiny), std::invalid_argument);
}

TEST_CASE("jellium lambda scaling exponent sits in the expected window") {
  std::vector<std::pair<double, double>> points;
  for (std::size_t M : {2, 3, 4}) {
    DualBasisSpec spec;
    spec.M = M;
    spec.D = 3;
    const std::size_t N = 2 * M * M * M;
    spec.omega = wigner_seitz_omega(N, 10.0);
    LcuHamiltonian lcu = jw_terms(dual_basis_coefficients(spec));
    points.emplace_back(static_cast<double>(N), lcu.lambda);
  }
  CHECK(points[1].second == doctest::Approx(5.0).epsilon(0.1));
  CHECK(points[2].second == doctest::Approx(23.0).epsilon(0.05));
  auto [slope, intercept] = log_log_fit(points);
  (void)intercept;
  CHECK(slope > 1.5);
  CHECK(slope < 1.85);
}

TEST_CASE("model config parsing") {
  const std::string text =
      "# jellium run\n"
      "[model]\n"
      "model = chem\n"
      "M = 3\n"
      "D = 3\n"
      "rs = 10.0\n"
      "dE = 0.0016\n"
      "nuclei = 0.0, 0.0, 0.0, 2.0 ; 1.5, 0, 0, 1.0\n";
  ModelConfig cfg = parse_model_config(text);
  CHECK(cfg.model == "chem");
  CHECK(cfg.M == 3);
  CHECK(cfg.rs == doctest::Approx(10.0));
  CHECK(cfg.nuclei.size() == 2);
  CHECK(cfg.nuclei[1].second == doctest::Approx(1.0));
  DualBasisSpec spec = cfg.dual_basis_spec();
  CHECK(spec.omega == doctest::Approx(wigner_seitz_omega(54, 10.0)));

  try {
    parse_model_config("model = chem\nbogus_key = 3\n");
    CHECK(false);
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }

  ModelConfig json = parse_model_config(
      R"({"model": "hubbard", "M": 4, "t": 1.0, "u": 4.0, "dE": 0.01})");
  CHECK(json.model == "hubbard");
  CHECK(json.M == 4);
  CHECK(json.hubbard_spec().u == doctest::Approx(4.0));
}
