#include <doctest.h>

#include <cmath>
#include <random>

#include "naive_sim.hpp"
#include "qsynth/circuit.hpp"
#include "qsynth/simulator.hpp"

using namespace qsynth;

TEST_CASE("Hadamard on |0>") {
  Circuit c({{"q", 1}});
  c.append(make_gate(GateKind::H, {{"q", 0}}));
  StateVector out = simulate(c, StateVector::zero_state(1));
  CHECK(std::abs(out.amps[0] - 1.0 / std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(out.amps[1] - 1.0 / std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("AND gadget computes and uncomputes on random product states") {
  Circuit c({{"q", 2}, {"anc", 1}});
  c.append(make_gate(GateKind::AndCompute, {{"anc", 0}},
                     {{{"q", 0}, true}, {{"q", 1}, true}}));
  c.append(make_gate(GateKind::AndUncompute, {{"anc", 0}},
                     {{{"q", 0}, true}, {{"q", 1}, true}}));
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int rep = 0; rep < 5; ++rep) {
    StateVector in = StateVector::zero_state(3);
    // random product state on the two inputs, ancilla |0>
    cdouble a{dist(rng), dist(rng)}, b{dist(rng), dist(rng)};
    cdouble c0{dist(rng), dist(rng)}, d{dist(rng), dist(rng)};
    double na = std::sqrt(std::norm(a) + std::norm(b));
    double nb = std::sqrt(std::norm(c0) + std::norm(d));
    a /= na;
    b /= na;
    c0 /= nb;
    d /= nb;
    in.amps[0] = a * c0;
    in.amps[1] = b * c0;
    in.amps[2] = a * d;
    in.amps[3] = b * d;
    StateVector out = simulate(c, in);
    for (std::size_t i = 0; i < 8; ++i) {
      CHECK(std::abs(out.amps[i] - in.amps[i]) < 1e-12);
    }
  }
}

TEST_CASE("AND pair is the identity on all 8 basis states") {
  Circuit c({{"q", 3}});
  c.append(make_gate(GateKind::AndCompute, {{"q", 2}},
                     {{{"q", 0}, true}, {{"q", 1}, true}}));
  c.append(make_gate(GateKind::AndUncompute, {{"q", 2}},
                     {{{"q", 0}, true}, {{"q", 1}, true}}));
  for (std::uint64_t b = 0; b < 8; ++b) {
    StateVector out = simulate(c, StateVector::basis_state(3, b));
    CHECK(std::abs(out.amps[b] - 1.0) < 1e-12);
  }
}

TEST_CASE("simulator matches the naive Kronecker implementation") {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> qubit(0, 5);
  std::uniform_real_distribution<double> angle(-3.0, 3.0);
  for (int rep = 0; rep < 10; ++rep) {
    Circuit c({{"q", 6}});
    for (int g = 0; g < 40; ++g) {
      int kind = rng() % 8;
      int t = qubit(rng);
      int ctl = qubit(rng);
      switch (kind) {
        case 0:
          c.append(make_gate(GateKind::H, {{"q", (std::size_t)t}}));
          break;
        case 1:
          c.append(make_gate(GateKind::T, {{"q", (std::size_t)t}}));
          break;
        case 2:
          if (ctl != t) {
            c.append(make_gate(GateKind::CNOT, {{"q", (std::size_t)t}},
                               {{{"q", (std::size_t)ctl}, rng() % 2 == 0}}));
          }
          break;
        case 3:
          c.append(
              make_rotation(GateKind::RotZ, angle(rng), {"q", (std::size_t)t}));
          break;
        case 4:
          c.append(
              make_rotation(GateKind::RotY, angle(rng), {"q", (std::size_t)t}));
          break;
        case 5:
          if (ctl != t) {
            c.append(make_gate(GateKind::Swap,
                               {{"q", (std::size_t)t}, {"q", (std::size_t)ctl}}));
          }
          break;
        case 6:
          c.append(make_gate(GateKind::S, {{"q", (std::size_t)t}}));
          break;
        default: {
          int c2 = qubit(rng);
          if (c2 != t && ctl != t && c2 != ctl) {
            c.append(make_gate(GateKind::Toffoli, {{"q", (std::size_t)t}},
                               {{{"q", (std::size_t)ctl}, true},
                                {{"q", (std::size_t)c2}, rng() % 2 == 0}}));
          }
          break;
        }
      }
    }
    StateVector init = StateVector::zero_state(6);
    // random initial basis state
    init = StateVector::basis_state(6, rng() % 64);
    StateVector fast = simulate(c, init);
    StateVector slow = qsynth_test::naive_simulate(c, init);
    for (std::size_t i = 0; i < fast.amps.size(); ++i) {
      CHECK(std::abs(fast.amps[i] - slow.amps[i]) < 1e-12);
    }
  }
}

TEST_CASE("measurement branch enumeration") {
  Circuit c({{"q", 2}});
  c.append(make_gate(GateKind::H, {{"q", 0}}));
  c.append(make_measure({"q", 0}, 0));
  Gate fix = make_gate(GateKind::X, {{"q", 1}});
  fix.condition_bit = 0;
  c.append(fix);
  auto branches = simulate_branches(c, StateVector::zero_state(2));
  REQUIRE(branches.size() == 2);
  double total = 0.0;
  for (const auto& br : branches) {
    total += br.probability;
    const int bit = br.bits.at(0);
    // classically controlled X fired exactly on the 1-branch
    const std::uint64_t expect = bit ? 3 : 0;
    CHECK(std::abs(br.state.amps[expect] - 1.0) < 1e-12);
  }
  CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("extract_unitary identity and reflection shapes") {
  Circuit id({{"q", 2}});
  id.append(make_gate(GateKind::X, {{"q", 0}}));
  id.append(make_gate(GateKind::X, {{"q", 0}}));
  auto u = extract_unitary(id, {0, 1}, {});
  CHECK(u.isApprox(Eigen::MatrixXcd::Identity(4, 4), 1e-12));
}

TEST_CASE("dirty ancilla leakage is reported") {
  Circuit c({{"q", 1}, {"anc", 1}});
  c.append(make_gate(GateKind::CNOT, {{"anc", 0}}, {{{"q", 0}, true}}));
  CHECK_THROWS_AS(extract_unitary(c, {0}, {{1, 0}}), std::logic_error);
}

TEST_CASE("state dump round-trips") {
  Circuit c({{"q", 2}});
  c.append(make_gate(GateKind::H, {{"q", 0}}));
  c.append(make_gate(GateKind::CNOT, {{"q", 1}}, {{{"q", 0}, true}}));
  StateVector out = simulate(c, StateVector::zero_state(2));
  out.dump("/tmp/qsynth_state_test.bin");
  StateVector back = StateVector::load("/tmp/qsynth_state_test.bin", 2);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::abs(out.amps[i] - back.amps[i]) < 1e-15);
  }
}
