// Batch driver: synthesize circuits, run the verification suites, compute
// error budgets, and emit logical/physical resource tables and plot data.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qsynth/circuit.hpp"
#include "qsynth/models.hpp"
#include "qsynth/oracles.hpp"
#include "qsynth/phase_est.hpp"
#include "qsynth/primitives.hpp"
#include "qsynth/resources.hpp"
#include "qsynth/simulator.hpp"
#include "qsynth/state_prep.hpp"
#include "qsynth/walk.hpp"

namespace fs = std::filesystem;
using namespace qsynth;

namespace {

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_digest(const ModelConfig& cfg) {
  std::ostringstream s;
  s << cfg.model << "|" << cfg.M << "|" << cfg.D << "|" << cfg.t << "|" << cfg.u
    << "|" << cfg.rs << "|" << cfg.omega << "|" << cfg.dE << "|" << cfg.eps_synth
    << "|" << cfg.p_phys << "|" << cfg.seed;
  for (const auto& [pos, charge] : cfg.nuclei) {
    s << "|" << pos[0] << "," << pos[1] << "," << pos[2] << "," << charge;
  }
  std::ostringstream hex;
  hex << std::hex << fnv1a(s.str());
  return hex.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  std::cout << "wrote " << path.string() << "\n";
}

LcuHamiltonian model_lcu(const ModelConfig& cfg) {
  if (cfg.model == "hubbard") return hubbard_terms(cfg.hubbard_spec());
  return jw_terms(dual_basis_coefficients(cfg.dual_basis_spec()));
}

std::string register_map_json(const WalkSpec& spec, const std::string& digest) {
  nlohmann::json j;
  j["config"] = digest;
  j["lambda"] = spec.lambda;
  nlohmann::json regs = nlohmann::json::object();
  for (const auto& [name, size] : spec.registers) regs[name] = size;
  j["registers"] = regs;
  j["selection_registers"] = spec.selection_registers;
  j["garbage_registers"] = spec.garbage_registers;
  return j.dump(2) + "\n";
}

int cmd_synth(const ModelConfig& cfg, const fs::path& out_dir,
              const std::string& primitive, std::size_t L) {
  const std::string digest = config_digest(cfg);
  if (primitive == "qrom") {
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < L) ++bits;
    bits = std::max<std::size_t>(bits, 1);
    QromData data;
    data.word_length = 8;
    std::uint64_t x = cfg.seed + 12345;
    for (std::size_t l = 0; l < L; ++l) {
      x = x * 6364136223846793005ull + 1442695040888963407ull;
      data.words.push_back((x >> 33) & 0xff);
    }
    Circuit c({{"ctl", 1}, {"sel", bits}, {"anc", bits + 1}, {"out", 8}});
    AncillaPool pool("anc", bits + 1);
    build_qrom(c, pool, SelectionSpec::range("sel", bits, L), data, "out",
               ControlSpec{{"ctl", 0}, true});
    write_file(out_dir / "qrom.circ", c.serialize());
    std::cout << "t_count=" << c.t_count() << "\n";
    return 0;
  }
  if (primitive == "uniform") {
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < L) ++bits;
    Circuit c({{"q", std::max<std::size_t>(bits, 1)}, {"anc", bits + 3}});
    AncillaPool pool("anc", bits + 3);
    build_uniform(c, pool, register_refs("q", std::max<std::size_t>(bits, 1)),
                  L, std::nullopt);
    write_file(out_dir / "uniform.circ", c.serialize());
    std::cout << "t_count=" << c.t_count() << "\n";
    return 0;
  }

  // Full model oracles.
  if (cfg.model == "hubbard") {
    HubOracle oracle = build_hub_oracle(cfg.hubbard_spec());
    Circuit sel = oracle.walk.layout_circuit();
    for (const auto& g : oracle.walk.select_gates) sel.append(g);
    Circuit prep = oracle.walk.layout_circuit();
    for (const auto& g : oracle.walk.prepare_gates) prep.append(g);
    write_file(out_dir / "select_hub.circ", sel.serialize());
    write_file(out_dir / "prepare_hub.circ", prep.serialize());
    write_file(out_dir / "registers.json",
               register_map_json(oracle.walk, digest));
    CostModel cm;
    std::cout << "select t_count=" << sel.t_count()
              << " prepare t_total=" << total_t_count(prep, cm, cfg.eps_synth)
              << "\n";
    return 0;
  }
  auto coeffs = dual_basis_coefficients(cfg.dual_basis_spec());
  ChemOracle oracle = build_chem_oracle(coeffs, cfg.dE);
  Circuit sel = oracle.walk.layout_circuit();
  for (const auto& g : oracle.walk.select_gates) sel.append(g);
  Circuit prep = oracle.walk.layout_circuit();
  for (const auto& g : oracle.walk.prepare_gates) prep.append(g);
  write_file(out_dir / "select_chem.circ", sel.serialize());
  write_file(out_dir / "prepare_chem.circ", prep.serialize());
  write_file(out_dir / "registers.json", register_map_json(oracle.walk, digest));
  write_file(out_dir / "alias_table.csv",
             alias_table_csv(oracle.table, oracle.dist));
  CostModel cm;
  std::cout << "select t_count=" << sel.t_count()
            << " prepare t_total=" << total_t_count(prep, cm, cfg.eps_synth)
            << " mu=" << oracle.mu << "\n";
  return 0;
}

int cmd_budget(const ModelConfig& cfg, const fs::path& out_dir) {
  LcuHamiltonian lcu = model_lcu(cfg);
  ErrorBudget budget =
      make_error_budget(lcu.lambda, cfg.dE, lcu.terms.size(), lcu.norm_bound);
  nlohmann::json j = nlohmann::json::parse(budget_json(budget));
  j["config"] = config_digest(cfg);
  write_file(out_dir / "budget.json", j.dump(2) + "\n");
  return 0;
}

int cmd_estimate(const ModelConfig& cfg, const fs::path& out_dir) {
  LogicalReport lr;
  if (cfg.model == "hubbard") {
    lr = logical_hub(cfg.hubbard_spec().num_spin_orbitals(), cfg.t, cfg.u,
                     cfg.dE);
  } else {
    LcuHamiltonian lcu = model_lcu(cfg);
    lr = logical_chem(lcu.num_qubits, lcu.lambda, cfg.dE);
  }
  std::string logical = logical_report_csv_header() + logical_report_csv_row(lr);
  std::string physical = physical_report_csv_header();
  for (double p : {1e-3, 1e-4}) {
    SurfaceCodeParams params;
    params.p = p;
    PhysicalReport pr = physical_overhead(lr, params);
    physical += physical_report_csv_row(lr, params, pr);
  }
  write_file(out_dir / "logical.csv", logical);
  write_file(out_dir / "physical.csv", physical);
  return 0;
}

int cmd_lambda_scan(const ModelConfig& cfg, const fs::path& out_dir,
                    const std::vector<std::size_t>& m_list) {
  std::vector<std::pair<double, double>> points;
  std::ostringstream csv;
  csv << "N,lambda\n";
  for (std::size_t m : m_list) {
    ModelConfig c = cfg;
    c.M = m;
    LcuHamiltonian lcu = model_lcu(c);
    csv << lcu.num_qubits << "," << lcu.lambda << "\n";
    points.emplace_back(static_cast<double>(lcu.num_qubits), lcu.lambda);
  }
  auto [slope, intercept] = log_log_fit(points);
  csv << "# fit slope=" << slope << " intercept=" << intercept << "\n";
  write_file(out_dir / "lambda_scan.csv", csv.str());
  std::cout << "fit exponent=" << slope << "\n";
  return 0;
}

int cmd_verify(const ModelConfig& cfg) {
  int failures = 0;
  auto report = [&](const std::string& name, bool ok) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
    if (!ok) ++failures;
  };

  // T-count identities.
  {
    bool ok = true;
    for (std::size_t L = 2; L <= 32; ++L) {
      std::size_t bits = 0;
      while ((std::size_t{1} << bits) < L) ++bits;
      bits = std::max<std::size_t>(bits, 1);
      Circuit c({{"ctl", 1}, {"sel", bits}, {"anc", bits + 2}, {"sys", L}});
      AncillaPool pool("anc", bits + 2);
      build_majorana_selector(c, pool, SelectionSpec::range("sel", bits, L),
                              "sys", ControlSpec{{"ctl", 0}, true});
      ok &= c.t_count() == 4 * static_cast<std::int64_t>(L) - 4;
    }
    report("majorana selector T-count 4L-4", ok);
  }
  // Alias tables.
  {
    bool ok = true;
    std::uint64_t x = cfg.seed + 9;
    for (int rep = 0; rep < 100; ++rep) {
      std::vector<double> w(2 + (x >> 5) % 60);
      for (auto& v : w) {
        x = x * 6364136223846793005ull + 1442695040888963407ull;
        v = static_cast<double>((x >> 33) % 1000) / 999.0;
      }
      double total = 0.0;
      for (double v : w) total += v;
      if (total == 0.0) w[0] = 1.0;
      auto dist = discretize(w, 1 + (x >> 40) % 6);
      ok &= alias_table_consistent(build_alias_table(dist), dist);
    }
    report("alias tables satisfy the balance identity", ok);
  }
  // Toy walk encoding.
  {
    LcuHamiltonian lcu;
    lcu.num_qubits = 2;
    lcu.terms.push_back({0.5, 1, {{0, 'X'}}});
    lcu.terms.push_back({0.7, -1, {{1, 'Z'}}});
    lcu.terms.push_back({0.3, 1, {{0, 'Z'}, {1, 'X'}}});
    lcu.lambda = 1.5;
    set_norm_bound(lcu);
    auto checks = walk_block_checks(lcu);
    bool ok = true;
    for (const auto& chk : checks) {
      ok &= chk.encode_error < 1e-10 && chk.phase_error < 1e-8;
    }
    report("toy walk spectrum", ok);
  }
  // Budget invariants.
  {
    bool ok = true;
    for (double lambda : {1.0, 5.0, 288.0}) {
      for (double frac : {0.1, 0.01}) {
        ErrorBudget b =
            make_error_budget(lambda, frac * lambda, 10, 0.9 * lambda);
        ok &= static_cast<double>(b.queries_circuit) < b.queries_bound;
        ok &= b.eps_prep <=
              std::sqrt(2.0) * frac * lambda / (4.0 * lambda) + 1e-15;
      }
    }
    report("error budget invariants", ok);
  }
  // Model sanity for the requested config.
  {
    bool ok = true;
    try {
      LcuHamiltonian lcu = model_lcu(cfg);
      double sum = 0.0;
      for (const auto& t : lcu.terms) sum += t.weight;
      ok = std::abs(sum - lcu.lambda) < 1e-9 * std::max(1.0, lcu.lambda);
    } catch (const std::exception& e) {
      std::cout << "  model error: " << e.what() << "\n";
      ok = false;
    }
    report("model term list", ok);
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clifford+T synthesis and resource estimation for qubitized "
               "phase estimation"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  ModelConfig cfg;
  cfg.model = "hubbard";
  std::string primitive;
  std::size_t prim_l = 8;
  std::vector<std::size_t> m_list{2, 3, 4};

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "config file (key=value or JSON)");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--model", cfg.model, "chem or hubbard");
    sub->add_option("--M", cfg.M, "grid/lattice side");
    sub->add_option("--D", cfg.D, "dimension (chem)");
    sub->add_option("--t", cfg.t, "hopping");
    sub->add_option("--u", cfg.u, "interaction");
    sub->add_option("--rs", cfg.rs, "Wigner-Seitz radius (Bohr)");
    sub->add_option("--omega", cfg.omega, "cell volume (Bohr^3)");
    sub->add_option("--dE", cfg.dE, "target energy accuracy");
    sub->add_option("--p", cfg.p_phys, "physical error rate");
    sub->add_option("--eps-synth", cfg.eps_synth, "rotation synthesis error");
    sub->add_option("--seed", cfg.seed, "seed for generated data");
  };

  CLI::App* synth = app.add_subcommand("synth", "emit circuits");
  add_common(synth);
  synth->add_option("--primitive", primitive,
                    "qrom | uniform (else model oracles)");
  synth->add_option("--L", prim_l, "primitive size");

  CLI::App* verify = app.add_subcommand("verify", "run property suites");
  add_common(verify);

  CLI::App* budget = app.add_subcommand("budget", "emit the error budget");
  add_common(budget);

  CLI::App* estimate = app.add_subcommand("estimate", "emit resource tables");
  add_common(estimate);

  CLI::App* scan = app.add_subcommand("lambda-scan", "lambda vs N with a fit");
  add_common(scan);
  scan->add_option("--M-list", m_list, "grid sides to scan");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw std::runtime_error("cannot read " + config_path);
      std::stringstream buf;
      buf << in.rdbuf();
      cfg = parse_model_config(buf.str());
    }
    if (cfg.model == "chem" && cfg.rs == 0.0 && cfg.omega == 0.0) {
      cfg.rs = 10.0;
    }
    fs::create_directories(out_dir);
    if (app.got_subcommand(synth)) {
      return cmd_synth(cfg, out_dir, primitive, prim_l);
    }
    if (app.got_subcommand(verify)) return cmd_verify(cfg);
    if (app.got_subcommand(budget)) return cmd_budget(cfg, out_dir);
    if (app.got_subcommand(estimate)) return cmd_estimate(cfg, out_dir);
    if (app.got_subcommand(scan)) return cmd_lambda_scan(cfg, out_dir, m_list);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
