#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "qsynth/simulator.hpp"
#include "qsynth/state_prep.hpp"

using namespace qsynth;

TEST_CASE("compute_mu examples") {
  CHECK(compute_mu(2.0, 0.1, 1.0) == 7);
  CHECK(compute_mu(1.0, 1.0, 0.0) == 2);
  CHECK_THROWS_AS(compute_mu(2.0, 0.1, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(compute_mu(2.0, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("discretize examples") {
  {
    auto d = discretize({1.0, 1.0}, 1);
    CHECK(d.targets == std::vector<std::uint64_t>{2, 2});
  }
  {
    auto d = discretize({4.0, 2.0, 1.0, 1.0}, 3);
    CHECK(d.targets == std::vector<std::uint64_t>{16, 8, 4, 4});
    std::uint64_t sum = 0;
    for (auto t : d.targets) sum += t;
    CHECK(sum == 32);
  }
  {
    auto d = discretize({1.0, 1.0, 1.0}, 4);
    std::uint64_t sum = 0;
    for (auto t : d.targets) sum += t;
    CHECK(sum == 48);
    for (auto t : d.targets) {
      CHECK(std::llabs(static_cast<long long>(t) - 16) <= 1);
    }
  }
  CHECK_THROWS_AS(discretize({0.0, 0.0}, 3), std::invalid_argument);
  CHECK_THROWS_AS(discretize({1.0, -1.0}, 3), std::invalid_argument);
}

TEST_CASE("discretize deviation bound") {
  std::mt19937 rng(19);
  std::uniform_real_distribution<double> w(0.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t L = 2 + rng() % 30;
    const std::size_t mu = 1 + rng() % 6;
    std::vector<double> weights(L);
    double total = 0.0;
    for (auto& x : weights) {
      x = w(rng);
      total += x;
    }
    auto d = discretize(weights, mu);
    const double denom = static_cast<double>(d.denominator());
    for (std::size_t l = 0; l < L; ++l) {
      const double got = static_cast<double>(d.targets[l]) / denom;
      const double want = weights[l] / total;
      CHECK(std::abs(got - want) <= 1.0 / denom + 1e-12);
    }
  }
}

TEST_CASE("alias table spec example") {
  DiscretizedDistribution dist;
  dist.mu = 3;
  dist.targets = {16, 8, 4, 4};
  AliasTable table = build_alias_table(dist);
  CHECK(alias_table_consistent(table, dist));
  // verify the balance identity by hand for l = 0
  std::uint64_t mass = table.keep[0];
  for (std::size_t k = 0; k < 4; ++k) {
    if (table.alt[k] == 0 && k != 0) mass += 8 - table.keep[k];
  }
  CHECK(mass == 16);
}

TEST_CASE("uniform targets give keep = 2^mu, alt = self") {
  DiscretizedDistribution dist;
  dist.mu = 4;
  dist.targets = {16, 16, 16};
  AliasTable table = build_alias_table(dist);
  for (std::size_t l = 0; l < 3; ++l) {
    CHECK(table.keep[l] == 16);
    CHECK(table.alt[l] == l);
  }
  CHECK(alias_table_consistent(table, dist));
}

TEST_CASE("1000 random alias tables satisfy the balance identity exactly") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> w(0.0, 1.0);
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t L = 2 + rng() % 255;
    const std::size_t mu = 1 + rng() % 8;
    std::vector<double> weights(L);
    for (auto& x : weights) x = w(rng) < 0.1 ? 0.0 : w(rng);
    double total = 0.0;
    for (auto x : weights) total += x;
    if (total == 0.0) weights[0] = 1.0;
    auto dist = discretize(weights, mu);
    auto table = build_alias_table(dist);
    CHECK(alias_table_consistent(table, dist));
  }
}

TEST_CASE("alias CSV export") {
  DiscretizedDistribution dist;
  dist.mu = 2;
  dist.targets = {6, 2};
  AliasTable table = build_alias_table(dist);
  std::string csv = alias_table_csv(table, dist);
  CHECK(csv.rfind("l,target,keep,alt\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

namespace {

/// Marginal probability of each index value after SUBPREPARE.
std::vector<double> subprepare_marginals(const AliasTable& table,
                                         const QromData& extra) {
  Circuit c = make_subprepare_circuit(table, extra);
  SimOptions fast;
  fast.check_norm = false;
  StateVector out = simulate(c, StateVector::zero_state(c.num_qubits()), fast);
  std::size_t w_idx = 0;
  while ((std::size_t{1} << w_idx) < table.size()) ++w_idx;
  std::vector<double> marg(std::size_t{1} << w_idx, 0.0);
  const std::uint64_t mask = (std::uint64_t{1} << w_idx) - 1;
  for (std::uint64_t i = 0; i < out.amps.size(); ++i) {
    marg[i & mask] += std::norm(out.amps[i]);
  }
  return marg;
}

}  // namespace

TEST_CASE("subprepare marginals match the discretized targets") {
  DiscretizedDistribution dist;
  dist.mu = 3;
  dist.targets = {16, 8, 4, 4};
  AliasTable table = build_alias_table(dist);
  auto marg = subprepare_marginals(table, {});
  CHECK(std::abs(marg[0] - 0.5) < 1e-10);
  CHECK(std::abs(marg[1] - 0.25) < 1e-10);
  CHECK(std::abs(marg[2] - 0.125) < 1e-10);
  CHECK(std::abs(marg[3] - 0.125) < 1e-10);
}

TEST_CASE("subprepare handles keep = 2^mu via the self-swap clamp") {
  DiscretizedDistribution dist;
  dist.mu = 2;
  dist.targets = {4, 4, 4, 4};
  AliasTable table = build_alias_table(dist);
  auto marg = subprepare_marginals(table, {});
  for (int l = 0; l < 4; ++l) CHECK(std::abs(marg[l] - 0.25) < 1e-10);
}

TEST_CASE("subprepare marginals on random distributions up to L = 16") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> w(0.0, 1.0);
  for (std::size_t L : {3, 6, 11, 16}) {
    const std::size_t mu = 4;
    std::vector<double> weights(L);
    for (auto& x : weights) x = w(rng);
    auto dist = discretize(weights, mu);
    auto table = build_alias_table(dist);
    auto marg = subprepare_marginals(table, {});
    const double denom = static_cast<double>(dist.denominator());
    for (std::size_t l = 0; l < L; ++l) {
      CHECK(std::abs(marg[l] - static_cast<double>(dist.targets[l]) / denom) <
            1e-10);
    }
    // composed pipeline bound: |w_l / lambda - marginal_l| <= 1 / (2^mu L)
    double total = 0.0;
    for (auto x : weights) total += x;
    for (std::size_t l = 0; l < L; ++l) {
      CHECK(std::abs(weights[l] / total - marg[l]) <= 1.0 / denom + 1e-12);
    }
  }
}

TEST_CASE("subprepare T-count stays within the 4(L + mu) + c budget") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> w(0.0, 1.0);
  const std::size_t L = 4;
  const std::size_t mu = 3;
  std::vector<double> weights(L);
  for (auto& x : weights) x = w(rng) + 0.01;
  auto dist = discretize(weights, mu);
  auto table = build_alias_table(dist);
  Circuit c = make_subprepare_circuit(table, {});
  // QROM is 4L - 4; comparator 4mu; controlled swap 4 log L; uniform is free
  // for power-of-two L. Allow the small constant on top.
  const std::int64_t budget = 4 * static_cast<std::int64_t>(L + mu) + 16;
  CHECK(c.t_count() <= budget);
  CHECK(c.t_count() >= 4 * static_cast<std::int64_t>(L) - 4);
}

TEST_CASE("subprepare loads extra data bits alongside keep and alt") {
  DiscretizedDistribution dist;
  dist.mu = 2;
  dist.targets = {6, 4, 4, 2};
  AliasTable table = build_alias_table(dist);
  QromData extra;
  extra.word_length = 2;
  extra.words = {2, 0, 3, 1};
  Circuit c = make_subprepare_circuit(table, extra);
  SimOptions fast;
  fast.check_norm = false;
  StateVector out = simulate(c, StateVector::zero_state(c.num_qubits()), fast);

  // The data slot swaps together with the index, so every surviving
  // amplitude carries data == words[drawn index].
  const std::size_t w_idx = 2;
  const std::size_t mu = 2;
  const std::size_t data_base = w_idx + w_idx + mu + mu + 1;
  for (std::uint64_t i = 0; i < out.amps.size(); ++i) {
    if (std::norm(out.amps[i]) < 1e-22) continue;
    const std::uint64_t index = i & 3;
    const std::uint64_t data = (i >> data_base) & 3;
    CHECK(data == extra.words[index]);
  }
}
