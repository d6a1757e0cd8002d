#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "qsynth/circuit.hpp"

using namespace qsynth;

TEST_CASE("new circuit starts empty") {
  Circuit c({{"sel", 4}, {"sys", 8}});
  CHECK(c.num_qubits() == 12);
  CHECK(c.t_count() == 0);
  CHECK(c.gates().empty());
}

TEST_CASE("degenerate register specs are rejected") {
  CHECK_THROWS_AS(Circuit(std::vector<std::pair<std::string, std::size_t>>{}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Circuit({{"a", 1}, {"a", 2}}), std::invalid_argument);
  CHECK_THROWS_AS(Circuit({{"a", 0}}), std::invalid_argument);
}

TEST_CASE("ledger tracks AND gadgets, rotations, and T gates") {
  Circuit c({{"q", 3}, {"anc", 1}});
  c.append(make_gate(GateKind::AndCompute, {{"anc", 0}},
                     {{{"q", 0}, true}, {{"q", 1}, true}}));
  CHECK(c.t_count() == 4);
  c.append(make_gate(GateKind::AndUncompute, {{"anc", 0}},
                     {{{"q", 0}, true}, {{"q", 1}, true}}));
  CHECK(c.t_count() == 4);  // uncompute is free
  c.append(make_rotation(GateKind::RotZ, 0.3, {"q", 2}));
  CHECK(c.t_count() == 4);
  CHECK(c.rotation_count() == 1);
  c.append(make_gate(GateKind::T, {{"q", 0}}));
  c.append(make_gate(GateKind::Tdg, {{"q", 1}}));
  CHECK(c.t_count() == 6);
  CHECK(c.recount_t() == c.t_count());
  CHECK(c.peak_ancilla() == 1);
}

TEST_CASE("gate validation") {
  Circuit c({{"q", 3}});
  // overlapping control and target
  Gate bad = make_gate(GateKind::CNOT, {{"q", 0}}, {{{"q", 0}, true}});
  CHECK_THROWS_AS(c.append(bad), std::invalid_argument);
  // out-of-range offset
  Gate oob = make_gate(GateKind::X, {{"q", 5}});
  CHECK_THROWS_AS(c.append(oob), std::out_of_range);
  // multi-controlled plain gates must go through AND gadgets
  Gate multi =
      make_gate(GateKind::X, {{"q", 0}}, {{{"q", 1}, true}, {{"q", 2}, true}});
  CHECK_THROWS_AS(c.append(multi), std::invalid_argument);
}

TEST_CASE("total_t_count folds rotations in at query time") {
  Circuit c({{"q", 2}, {"anc", 1}});
  for (int i = 0; i < 10; ++i) {
    c.append(make_gate(GateKind::AndCompute, {{"anc", 0}},
                       {{{"q", 0}, true}, {{"q", 1}, true}}));
    c.append(make_gate(GateKind::AndUncompute, {{"anc", 0}},
                       {{{"q", 0}, true}, {{"q", 1}, true}}));
  }
  CostModel model;
  CHECK(total_t_count(c, model, 1e-6) == 40);

  Circuit r({{"q", 1}});
  r.append(make_rotation(GateKind::RotZ, 0.1, {"q", 0}));
  r.append(make_rotation(GateKind::RotY, 0.2, {"q", 0}));
  CostModel bare;
  bare.t_per_rotation = [](double eps) {
    return static_cast<std::int64_t>(std::ceil(1.15 * std::log2(1.0 / eps)));
  };
  CHECK(total_t_count(r, bare, 1e-6) == 46);

  Circuit empty({{"q", 1}});
  CHECK(total_t_count(empty, model, 1e-6) == 0);
}

TEST_CASE("default rotation model is monotone in synthesis accuracy") {
  CostModel model;
  std::int64_t prev = model.t_per_rotation(1e-2);
  for (double eps : {1e-3, 1e-4, 1e-6, 1e-9, 1e-12}) {
    std::int64_t cur = model.t_per_rotation(eps);
    CHECK(cur >= prev);
    prev = cur;
  }
}

TEST_CASE("serialize round-trips and is deterministic") {
  Circuit c({{"sel", 2}, {"sys", 3}, {"anc", 1}});
  c.append(make_gate(GateKind::H, {{"sel", 0}}));
  c.append(make_gate(GateKind::AndCompute, {{"anc", 0}},
                     {{{"sel", 0}, true}, {{"sel", 1}, false}}));
  c.append(make_gate(GateKind::CNOT, {{"sys", 2}}, {{{"anc", 0}, true}}));
  c.append(make_rotation(GateKind::RotZ, 0.12345678901234567, {"sys", 0}));
  c.append(make_gate(GateKind::AndUncompute, {{"anc", 0}},
                     {{{"sel", 0}, true}, {{"sel", 1}, true}}));
  c.append(make_measure({"sys", 1}, 0));
  Gate cond = make_gate(GateKind::X, {{"sys", 0}});
  cond.condition_bit = 0;
  c.append(cond);

  std::string text = c.serialize();
  Circuit parsed = Circuit::parse(text);
  CHECK(parsed.serialize() == text);
  CHECK(parsed.t_count() == c.t_count());
  CHECK(parsed.num_qubits() == c.num_qubits());
  CHECK(parsed.gates().size() == c.gates().size());

  // single-gate circuit: header comment + register + gate
  Circuit one({{"q", 1}});
  one.append(make_gate(GateKind::X, {{"q", 0}}));
  std::string small = one.serialize();
  CHECK(std::count(small.begin(), small.end(), '\n') == 3);
}

TEST_CASE("inverted swaps adjoint pairs") {
  Circuit c({{"q", 2}, {"anc", 1}});
  c.append(make_gate(GateKind::T, {{"q", 0}}));
  c.append(make_gate(GateKind::S, {{"q", 1}}));
  c.append(make_gate(GateKind::AndCompute, {{"anc", 0}},
                     {{{"q", 0}, true}, {{"q", 1}, true}}));
  c.append(make_rotation(GateKind::RotY, 0.7, {"q", 0}));
  Circuit inv = c.inverted();
  CHECK(inv.gates().size() == 4);
  CHECK(inv.gates()[0].kind == GateKind::RotY);
  CHECK(inv.gates()[0].angle == doctest::Approx(-0.7));
  CHECK(inv.gates()[1].kind == GateKind::AndUncompute);
  CHECK(inv.gates()[2].kind == GateKind::Sdg);
  CHECK(inv.gates()[3].kind == GateKind::Tdg);
}
