#include "qsynth/state_prep.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qsynth {

std::size_t compute_mu(double lambda, double dE, double norm_bound_h) {
  if (!(dE > 0.0 && dE <= lambda)) {
    throw std::invalid_argument("need 0 < dE <= lambda");
  }
  if (!(norm_bound_h >= 0.0 && norm_bound_h < lambda)) {
    throw std::invalid_argument("need 0 <= |H| < lambda");
  }
  const double r = norm_bound_h / lambda;
  const double x = std::log2(2.0 * std::sqrt(2.0) * lambda / dE) +
                   std::log2(1.0 + dE * dE / (8.0 * lambda * lambda)) -
                   std::log2(1.0 - r * r);
  const double mu = std::ceil(x);
  return mu < 1.0 ? 1 : static_cast<std::size_t>(mu);
}

DiscretizedDistribution discretize(const std::vector<double>& weights,
                                   std::size_t mu) {
  if (weights.empty()) throw std::invalid_argument("no weights");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("negative weight");
    total += w;
  }
  if (!(total > 0.0)) throw std::invalid_argument("all-zero weights");

  const std::size_t count = weights.size();
  const std::uint64_t denom = (std::uint64_t{1} << mu) * count;
  DiscretizedDistribution dist;
  dist.mu = mu;
  dist.targets.resize(count);

  // Largest-remainder rounding: floor everything, then hand out the deficit
  // to the largest fractional parts (lowest index wins ties).
  std::vector<double> exact(count);
  std::uint64_t assigned = 0;
  for (std::size_t i = 0; i < count; ++i) {
    exact[i] = static_cast<double>(denom) * weights[i] / total;
    dist.targets[i] = static_cast<std::uint64_t>(std::floor(exact[i]));
    assigned += dist.targets[i];
  }
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    double fa = exact[a] - std::floor(exact[a]);
    double fb = exact[b] - std::floor(exact[b]);
    return fa > fb;
  });
  if (assigned > denom) throw std::logic_error("rounding overflow");
  std::uint64_t deficit = denom - assigned;
  for (std::size_t i = 0; deficit > 0; i = (i + 1) % count) {
    dist.targets[order[i]] += 1;
    --deficit;
  }
  return dist;
}

AliasTable build_alias_table(const DiscretizedDistribution& dist) {
  const std::size_t count = dist.targets.size();
  if (count == 0) throw std::invalid_argument("empty distribution");
  const std::uint64_t avg = std::uint64_t{1} << dist.mu;
  std::uint64_t sum = 0;
  for (auto t : dist.targets) sum += t;
  if (sum != avg * count) {
    throw std::invalid_argument("targets must sum to 2^mu * L");
  }

  AliasTable table;
  table.mu = dist.mu;
  table.alt.assign(count, 0);
  table.keep.assign(count, 0);

  std::vector<std::uint64_t> residual(dist.targets);
  std::set<std::size_t> below, above;
  for (std::size_t l = 0; l < count; ++l) {
    if (residual[l] < avg) below.insert(l);
    if (residual[l] > avg) above.insert(l);
  }
  while (!below.empty()) {
    const std::size_t l0 = *below.begin();
    below.erase(below.begin());
    if (above.empty()) throw std::logic_error("alias construction imbalance");
    const std::size_t l1 = *above.begin();
    table.keep[l0] = residual[l0];
    table.alt[l0] = l1;
    residual[l1] -= avg - residual[l0];
    if (residual[l1] <= avg) {
      above.erase(above.begin());
      if (residual[l1] < avg) below.insert(l1);
    }
  }
  for (std::size_t l = 0; l < count; ++l) {
    if (residual[l] == avg) {
      table.keep[l] = avg;
      table.alt[l] = l;
    }
  }
  return table;
}

bool alias_table_consistent(const AliasTable& table,
                            const DiscretizedDistribution& dist) {
  const std::size_t count = table.size();
  if (count != dist.targets.size() || table.mu != dist.mu) return false;
  const std::uint64_t full = std::uint64_t{1} << table.mu;
  std::vector<std::uint64_t> mass(count, 0);
  for (std::size_t l = 0; l < count; ++l) {
    if (table.keep[l] > full) return false;
    if (table.alt[l] >= count) return false;
    mass[l] += table.keep[l];
    mass[table.alt[l]] += full - table.keep[l];
  }
  for (std::size_t l = 0; l < count; ++l) {
    if (mass[l] != dist.targets[l]) return false;
  }
  return true;
}

std::string alias_table_csv(const AliasTable& table,
                            const DiscretizedDistribution& dist) {
  std::ostringstream out;
  out << "l,target,keep,alt\n";
  for (std::size_t l = 0; l < table.size(); ++l) {
    out << l << "," << dist.targets[l] << "," << table.keep[l] << ","
        << table.alt[l] << "\n";
  }
  return out.str();
}

void build_subprepare(Circuit& c, AncillaPool& pool, const AliasTable& table,
                      const SelectionSpec& index_values, const QromData& extra,
                      const SubprepareLayout& layout) {
  const std::size_t count = table.size();
  if (count < 2) throw std::invalid_argument("subprepare needs L >= 2");
  if (table.mu < 1) throw std::invalid_argument("subprepare needs mu >= 1");
  if (index_values.values.size() != count) {
    throw std::invalid_argument("index values must match table size");
  }
  for (std::size_t l = 0; l < count; ++l) {
    if (index_values.values[l] != l) {
      throw std::invalid_argument("subprepare index values must be 0..L-1");
    }
  }
  const std::size_t w_idx = index_values.qubits.size();
  const std::size_t mu = table.mu;
  if (c.register_size(layout.alt_reg) < w_idx ||
      c.register_size(layout.keep_reg) < mu ||
      c.register_size(layout.sigma_reg) < mu) {
    throw std::invalid_argument("subprepare register width mismatch");
  }
  if (extra.word_length > 0 &&
      (c.register_size(layout.data_reg) < extra.word_length ||
       c.register_size(layout.data_alt_reg) < extra.word_length)) {
    throw std::invalid_argument("subprepare data registers too narrow");
  }

  // 1. Uniform superposition over the L index values.
  build_uniform(c, pool, index_values.qubits, count, std::nullopt);

  // 2. QROM load of alt || keep || extra_l || extra_{alt_l}. keep = 2^mu
  // pairs with alt = l by construction, so clamping it to 2^mu - 1 only ever
  // enables a self-swap.
  const std::uint64_t full = std::uint64_t{1} << mu;
  const std::size_t wl = extra.word_length;
  QromData words;
  words.word_length = w_idx + mu + 2 * wl;
  words.words.resize(count);
  for (std::size_t l = 0; l < count; ++l) {
    std::uint64_t keep = table.keep[l];
    std::uint64_t alt = table.alt[l];
    if (keep == full) {
      if (alt != l) throw std::invalid_argument("keep=2^mu requires alt=self");
      keep = full - 1;
    }
    std::uint64_t word = alt | (keep << w_idx);
    if (wl > 0) {
      if (extra.words.size() != count) {
        throw std::invalid_argument("extra data size mismatch");
      }
      word |= extra.words[l] << (w_idx + mu);
      word |= extra.words[table.alt[l]] << (w_idx + mu + wl);
    }
    words.words[l] = word;
  }
  build_unary_iteration(
      c, pool, index_values, std::nullopt,
      [&](Circuit& cc, std::uint64_t value, const QubitRef& q) {
        std::uint64_t word = words.words[static_cast<std::size_t>(value)];
        for (std::size_t b = 0; b < w_idx; ++b) {
          if (word & (std::uint64_t{1} << b)) {
            cc.append(make_gate(GateKind::CNOT, {{layout.alt_reg, b}}, {{q, true}}));
          }
        }
        for (std::size_t b = 0; b < mu; ++b) {
          if (word & (std::uint64_t{1} << (w_idx + b))) {
            cc.append(
                make_gate(GateKind::CNOT, {{layout.keep_reg, b}}, {{q, true}}));
          }
        }
        for (std::size_t b = 0; b < wl; ++b) {
          if (word & (std::uint64_t{1} << (w_idx + mu + b))) {
            cc.append(
                make_gate(GateKind::CNOT, {{layout.data_reg, b}}, {{q, true}}));
          }
          if (word & (std::uint64_t{1} << (w_idx + mu + wl + b))) {
            cc.append(make_gate(GateKind::CNOT, {{layout.data_alt_reg, b}},
                                {{q, true}}));
          }
        }
      });

  // 3. Uniform sigma.
  for (std::size_t b = 0; b < mu; ++b) {
    c.append(make_gate(GateKind::H, {{layout.sigma_reg, b}}));
  }

  // 4. less = [keep <= sigma] = NOT (sigma < keep).
  emit_less_than(c, pool, register_refs(layout.sigma_reg, mu),
                 register_refs(layout.keep_reg, mu), {layout.less_reg, 0});
  c.append(make_gate(GateKind::X, {{layout.less_reg, 0}}));

  // 5. Swap (index, data) with (alt, data_alt) when the draw says so, so the
  // data slot tracks the index actually drawn.
  std::vector<QubitRef> kept = index_values.qubits;
  std::vector<QubitRef> alts = register_refs(layout.alt_reg, w_idx);
  for (std::size_t b = 0; b < wl; ++b) {
    kept.push_back({layout.data_reg, b});
    alts.push_back({layout.data_alt_reg, b});
  }
  emit_controlled_swap(c, pool, ControlSpec{{layout.less_reg, 0}, true}, kept,
                       alts);
}

Circuit make_subprepare_circuit(const AliasTable& table, const QromData& extra,
                                SubprepareLayout layout) {
  const std::size_t count = table.size();
  std::size_t w_idx = 0;
  while ((std::size_t{1} << w_idx) < count) ++w_idx;
  const std::size_t mu = table.mu;
  std::size_t pool_size = std::max<std::size_t>(w_idx, mu) + 4;

  std::vector<std::pair<std::string, std::size_t>> regs;
  regs.emplace_back(layout.index_reg, w_idx);
  regs.emplace_back(layout.alt_reg, w_idx);
  regs.emplace_back(layout.keep_reg, mu);
  regs.emplace_back(layout.sigma_reg, mu);
  regs.emplace_back(layout.less_reg, 1);
  if (extra.word_length > 0) {
    regs.emplace_back(layout.data_reg, extra.word_length);
    regs.emplace_back(layout.data_alt_reg, extra.word_length);
  }
  regs.emplace_back(layout.anc_reg, pool_size);

  Circuit c(regs);
  AncillaPool pool(layout.anc_reg, pool_size);
  SelectionSpec sel = SelectionSpec::range(layout.index_reg, w_idx, count);
  build_subprepare(c, pool, table, sel, extra, layout);
  return c;
}

}  // namespace qsynth
