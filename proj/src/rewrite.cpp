// Copyright 2026 The latmap Authors
// SPDX-License-Identifier: Apache-2.0
#include "latmap/rewrite.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <set>

#include "latmap/errors.hpp"
#include "latmap/exact.hpp"

namespace latmap {

namespace {

// Parity vector of a q=2 parity or clock term, or nullopt for anything else.
std::optional<SparseVec> parity_support(const InteractionTerm& t, const SpinModel& m) {
  if (t.kind == TermKind::GeneralTable) return std::nullopt;
  for (int s : t.support) {
    if (m.levels[s] != 2) return std::nullopt;
  }
  SparseVec v;
  for (std::size_t i = 0; i < t.support.size(); ++i) {
    const int w = t.weights.empty() ? 1 : t.weights[i];
    if (w % 2 != 0) v.push_back(t.support[i]);
  }
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

EffectiveModel::Parity EffectiveModel::reduce_parity(const SparseVec& original) const {
  auto [red, c] = constraints.reduce(original);
  Parity p;
  p.constant = c;
  for (int v : red) {
    if (eff_index[v] < 0) {
      p.hidden = true;
    } else {
      p.spins.push_back(eff_index[v]);
    }
  }
  std::sort(p.spins.begin(), p.spins.end());
  return p;
}

EffectiveModel extract_effective_model(const SpinModel& model, const ExtractOptions& options) {
  model.validate();
  const int n = model.num_spins();
  EffectiveModel eff;
  eff.constraints = ConstraintSet(n);
  std::vector<int> row_origin;
  for (std::size_t k = 0; k < model.terms.size(); ++k) {
    const auto& t = model.terms[k];
    if (!t.coupling.is_infinite()) continue;
    auto v = parity_support(t, model);
    require(v.has_value(), ErrorKind::Unsupported,
            "term " + std::to_string(k) + ": +inf couplings are parity constraints on q = 2 spins");
    eff.constraints.add_row(*v);
    row_origin.push_back(static_cast<int>(k));
  }
  for (int s : options.fixed) {
    require(s >= 0 && s < n && model.levels[s] == 2, ErrorKind::Precondition, "fixed spin must be binary");
    eff.constraints.add_row({s});
    row_origin.push_back(static_cast<int>(model.terms.size()) + s);
  }
  for (int s : options.designated) {
    require(s >= 0 && s < n, ErrorKind::Precondition, "designated spin out of range");
    if (model.levels[s] == 2) eff.constraints.protect(s);
  }
  try {
    eff.constraints.eliminate();
  } catch (const FrustratedError& e) {
    std::vector<int> cert;
    for (int r : e.certificate()) cert.push_back(row_origin[r]);
    throw FrustratedError(e.what(), cert);
  }

  double offset = model.energy_offset;
  std::map<SparseVec, double> parity_terms;
  std::vector<InteractionTerm> other_terms;  // supports in original ids
  for (std::size_t k = 0; k < model.terms.size(); ++k) {
    const auto& t = model.terms[k];
    if (t.coupling.is_infinite() || t.coupling.is_zero()) continue;
    if (auto v = parity_support(t, model)) {
      auto [red, c] = eff.constraints.reduce(*v);
      const double j = c ? -t.coupling.value() : t.coupling.value();
      if (red.empty()) {
        offset -= j;
      } else {
        parity_terms[red] += j;
      }
      continue;
    }
    bool touched = false;
    for (int s : t.support) {
      if (model.levels[s] == 2 && eff.constraints.is_pivot(s)) touched = true;
    }
    if (!touched) {
      other_terms.push_back(t);
      continue;
    }
    // rebuild the table over the free variables the support depends on
    std::vector<std::pair<SparseVec, bool>> forms(t.support.size());
    std::set<int> uni;
    for (std::size_t i = 0; i < t.support.size(); ++i) {
      const int s = t.support[i];
      if (model.levels[s] == 2) {
        forms[i] = eff.constraints.reduce({s});
        uni.insert(forms[i].first.begin(), forms[i].first.end());
      } else {
        uni.insert(s);
      }
    }
    const std::vector<int> support(uni.begin(), uni.end());
    std::vector<int> lv;
    std::size_t size = 1;
    for (int s : support) {
      lv.push_back(model.levels[s]);
      size *= static_cast<std::size_t>(model.levels[s]);
    }
    const auto old_table = expand_table(t, model);
    std::vector<double> table(size);
    std::vector<int> value(n, 0);
    for (std::size_t idx = 0; idx < size; ++idx) {
      std::size_t rest = idx;
      for (std::size_t i = 0; i < support.size(); ++i) {
        value[support[i]] = static_cast<int>(rest % lv[i]);
        rest /= lv[i];
      }
      std::size_t old_idx = 0, stride = 1;
      for (std::size_t i = 0; i < t.support.size(); ++i) {
        const int s = t.support[i];
        int local;
        if (model.levels[s] == 2) {
          local = forms[i].second ? 1 : 0;
          for (int f : forms[i].first) local ^= value[f] & 1;
        } else {
          local = value[s];
        }
        old_idx += static_cast<std::size_t>(local) * stride;
        stride *= static_cast<std::size_t>(model.levels[s]);
      }
      table[idx] = old_table[old_idx];
    }
    if (support.empty()) {
      offset += table[0];
    } else {
      other_terms.push_back(InteractionTerm::general(support, std::move(table)));
    }
  }

  // kept spins: designated first, then every other spin a term uses plus all
  // non-binary spins, ascending
  eff.eff_index.assign(n, -1);
  for (int s : options.designated) {
    if (model.levels[s] == 2 && eff.constraints.is_pivot(s)) {
      ++eff.dependent_designated;
      continue;
    }
    if (eff.eff_index[s] >= 0) continue;
    eff.eff_index[s] = static_cast<int>(eff.origin.size());
    eff.origin.push_back(s);
  }
  std::vector<char> used(n, 0);
  for (const auto& [v, j] : parity_terms) {
    if (j != 0.0) {
      for (int s : v) used[s] = 1;
    }
  }
  for (const auto& t : other_terms) {
    for (int s : t.support) used[s] = 1;
  }
  int unused_free = 0;
  for (int s = 0; s < n; ++s) {
    if (eff.eff_index[s] >= 0) continue;
    if (model.levels[s] != 2 || used[s]) {
      eff.eff_index[s] = static_cast<int>(eff.origin.size());
      eff.origin.push_back(s);
    } else if (!eff.constraints.is_pivot(s)) {
      ++unused_free;
    }
  }
  eff.log2_factor = model.log2_prefactor + unused_free;
  eff.offset = offset;

  SpinModel& m = eff.model;
  for (int s : eff.origin) m.levels.push_back(model.levels[s]);
  for (const auto& [v, j] : parity_terms) {
    if (j == 0.0) continue;
    SparseVec sup;
    for (int s : v) sup.push_back(eff.eff_index[s]);
    std::sort(sup.begin(), sup.end());
    m.terms.push_back(InteractionTerm::parity(std::move(sup), j));
  }
  for (auto t : other_terms) {
    for (int& s : t.support) s = eff.eff_index[s];
    m.terms.push_back(std::move(t));
  }
  sort_terms(m);
  // merge tables that landed on the same support
  std::vector<InteractionTerm> merged;
  for (auto& t : m.terms) {
    if (!merged.empty() && t.kind == TermKind::GeneralTable && merged.back().kind == TermKind::GeneralTable &&
        merged.back().support == t.support) {
      for (std::size_t i = 0; i < t.table.size(); ++i) merged.back().table[i] += t.table[i];
      continue;
    }
    merged.push_back(std::move(t));
  }
  std::erase_if(merged, [](const InteractionTerm& t) {
    return t.kind == TermKind::GeneralTable &&
           std::all_of(t.table.begin(), t.table.end(), [](double x) { return x == 0.0; });
  });
  m.terms = std::move(merged);
  return eff;
}

// --- single-step rewrites ---

MergeResult merge_face(const SpinModel& model, int face_term, int dependent_spin) {
  require(face_term >= 0 && face_term < static_cast<int>(model.terms.size()), ErrorKind::Precondition,
          "term " + std::to_string(face_term) + " does not exist");
  const auto& face = model.terms[face_term];
  auto fv = parity_support(face, model);
  require(face.kind == TermKind::ParityIsing && fv.has_value(), ErrorKind::Precondition,
          "merge needs a ParityIsing term on q = 2 spins");
  require(!fv->empty(), ErrorKind::Precondition, "merge of an empty term");
  if (dependent_spin < 0) dependent_spin = fv->front();
  require(std::binary_search(fv->begin(), fv->end(), dependent_spin), ErrorKind::Precondition,
          "spin " + std::to_string(dependent_spin) + " is not in the merged term");

  MergeResult r;
  r.model = model;
  for (std::size_t k = 0; k < r.model.terms.size(); ++k) {
    if (static_cast<int>(k) == face_term) continue;
    auto& t = r.model.terms[k];
    if (std::find(t.support.begin(), t.support.end(), dependent_spin) == t.support.end()) continue;
    auto tv = parity_support(t, r.model);
    require(tv.has_value(), ErrorKind::Unsupported,
            "term " + std::to_string(k) + " shares the dependent spin but is not a parity term");
    SparseVec sup = xor_sparse(*tv, *fv);
    t.kind = TermKind::ParityIsing;
    t.weights.clear();
    if (sup.empty()) {
      if (!t.coupling.is_infinite()) r.model.energy_offset -= t.coupling.value();
      t.coupling = Coupling(0.0);
    }
    t.support = std::move(sup);
  }
  r.model.terms[face_term].coupling = Coupling::infinity();
  r.entry = {"merge", face_term, static_cast<double>(dependent_spin)};
  return r;
}

SpinModel delete_face(const SpinModel& model, int face_term) {
  require(face_term >= 0 && face_term < static_cast<int>(model.terms.size()), ErrorKind::Precondition,
          "term " + std::to_string(face_term) + " does not exist");
  SpinModel m = model;
  m.terms[face_term].coupling = Coupling(0.0);
  return m;
}

SpinModel finite_j_merge(const SpinModel& model, int face_term, double j_large) {
  require(j_large >= 0 && std::isfinite(j_large), ErrorKind::Precondition, "J_large must be finite and >= 0");
  require(face_term >= 0 && face_term < static_cast<int>(model.terms.size()), ErrorKind::Precondition,
          "term " + std::to_string(face_term) + " does not exist");
  require(model.terms[face_term].kind == TermKind::ParityIsing, ErrorKind::Precondition,
          "finite-J merge needs a ParityIsing term");
  SpinModel m = model;
  m.terms[face_term].coupling = Coupling(j_large);
  return m;
}

double merge_deviation(const SpinModel& model, const std::vector<int>& terms, double j_large, double beta) {
  SpinModel inf = model, fin = model;
  for (int t : terms) {
    inf.terms.at(t).coupling = Coupling::infinity();
    fin = finite_j_merge(fin, t, j_large);
  }
  const double zi = partition_function(inf, beta).log_z;
  const double zf = partition_function(fin, beta).log_z;
  return std::fabs(zf - beta * j_large * static_cast<double>(terms.size()) - zi);
}

SpinModel substitute_zero(const SpinModel& model, const std::vector<int>& spins) {
  std::set<int> pinned(spins.begin(), spins.end());
  for (int s : pinned) {
    require(s >= 0 && s < model.num_spins(), ErrorKind::Precondition, "spin out of range");
    require(model.levels[s] == 2, ErrorKind::Unsupported, "pinning is defined for q = 2 spins");
  }
  SpinModel m = model;
  for (auto& t : m.terms) {
    bool hit = false;
    for (int s : t.support) hit |= pinned.count(s) > 0;
    if (!hit) continue;
    if (t.kind == TermKind::GeneralTable) {
      std::vector<int> keep_pos;
      std::vector<std::size_t> stride(t.support.size());
      std::size_t st = 1;
      for (std::size_t i = 0; i < t.support.size(); ++i) {
        stride[i] = st;
        st *= static_cast<std::size_t>(m.levels[t.support[i]]);
        if (!pinned.count(t.support[i])) keep_pos.push_back(static_cast<int>(i));
      }
      std::size_t size = 1;
      for (int p : keep_pos) size *= static_cast<std::size_t>(m.levels[t.support[p]]);
      std::vector<double> table(size);
      std::vector<int> sup;
      for (int p : keep_pos) sup.push_back(t.support[p]);
      for (std::size_t idx = 0; idx < size; ++idx) {
        std::size_t rest = idx, old = 0;
        for (int p : keep_pos) {
          const int q = m.levels[t.support[p]];
          old += (rest % q) * stride[p];
          rest /= q;
        }
        table[idx] = t.table[old];
      }
      t.table = std::move(table);
      t.support = std::move(sup);
      continue;
    }
    std::vector<int> sup, w;
    for (std::size_t i = 0; i < t.support.size(); ++i) {
      if (pinned.count(t.support[i])) continue;
      sup.push_back(t.support[i]);
      if (!t.weights.empty()) w.push_back(t.weights[i]);
    }
    t.support = std::move(sup);
    t.weights = std::move(w);
    if (t.kind == TermKind::ClockCosine && t.support.empty()) {
      // cos(0) = 1: keep the energy as a parity term on nothing
      t.kind = TermKind::ParityIsing;
    }
  }
  m.log2_prefactor -= static_cast<int>(pinned.size());
  return m;
}

void check_forest(const LatticeGeometry& g, const std::vector<int>& edges, const std::vector<int>& exempt) {
  std::set<int> skip(exempt.begin(), exempt.end());
  std::vector<int> parent(g.num_vertices());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  std::vector<std::vector<std::pair<int, int>>> adj(g.num_vertices());
  std::set<int> seen;
  for (int e : edges) {
    require(e >= 0 && e < g.num_edges(), ErrorKind::Precondition, "edge " + std::to_string(e) + " out of range");
    if (skip.count(e) || !seen.insert(e).second) continue;
    const int a = g.tail(e), b = g.head(e);
    if (find(a) == find(b)) {
      // recover the path a -> b through edges already accepted
      std::vector<int> via(g.num_vertices(), -2);
      std::queue<int> bfs;
      bfs.push(a);
      via[a] = -1;
      while (!bfs.empty()) {
        const int v = bfs.front();
        bfs.pop();
        if (v == b) break;
        for (auto [w, ed] : adj[v]) {
          if (via[w] == -2) {
            via[w] = ed;
            bfs.push(w);
          }
        }
      }
      std::vector<int> cycle{e};
      for (int v = b; via[v] >= 0;) {
        const int ed = via[v];
        cycle.push_back(ed);
        v = g.tail(ed) == v ? g.head(ed) : g.tail(ed);
      }
      throw CycleError("gauge-fixed edges close a loop of " + std::to_string(cycle.size()) + " edges", cycle);
    }
    parent[find(a)] = find(b);
    adj[a].push_back({b, e});
    adj[b].push_back({a, e});
  }
}

GaugeFixResult gauge_fix_edges(const GaugeModel& gm, const std::vector<int>& edges, const GaugeFixOptions& options) {
  require(!gm.edge_spin.empty(), ErrorKind::Precondition, "gauge fixing needs an edge-spin model");
  check_forest(gm.geometry, edges, options.exempt);
  std::vector<int> spins;
  for (int e : edges) spins.push_back(gm.edge_spin[e]);
  GaugeFixResult r;
  r.model = substitute_zero(gm.model, spins);
  EngineOptions eo;
  eo.max_free = options.cap;
  std::optional<double> ratio;
  for (double beta : options.check_betas) {
    const double d = (partition_function(gm.model, beta, eo).log_z - partition_function(r.model, beta, eo).log_z) /
                     std::log(2.0);
    require(std::fabs(d - std::round(d)) < 1e-9, ErrorKind::Verification,
            "gauge fixing ratio is not a power of two: log2 ratio " + std::to_string(d));
    if (ratio) {
      require(std::round(d) == *ratio, ErrorKind::Verification, "gauge fixing ratio depends on beta");
    }
    ratio = std::round(d);
  }
  r.log2_ratio = ratio ? static_cast<int>(*ratio) : 0;
  std::set<int> uniq(spins.begin(), spins.end());
  for (int s : uniq) r.trace.entries.push_back({"fix", s, std::nullopt});
  r.trace.log2_factor = r.log2_ratio;
  return r;
}

SpinModel replay(const SpinModel& model, const RewriteTrace& trace) {
  SpinModel m = model;
  std::vector<int> pending;  // consecutive fix entries are applied together
  auto flush = [&] {
    if (!pending.empty()) m = substitute_zero(m, pending);
    pending.clear();
  };
  auto term = [&](const TraceEntry& e) -> InteractionTerm& {
    require(e.target >= 0 && e.target < static_cast<int>(m.terms.size()), ErrorKind::Validation,
            "trace target " + std::to_string(e.target) + " out of range");
    return m.terms[e.target];
  };
  for (const auto& e : trace.entries) {
    if (e.rule == "fix") {
      require(e.target >= 0 && e.target < m.num_spins(), ErrorKind::Validation, "trace spin out of range");
      require(std::find(pending.begin(), pending.end(), e.target) == pending.end(), ErrorKind::Validation,
              "spin fixed twice");
      pending.push_back(e.target);
      continue;
    }
    flush();
    if (e.rule == "merge") {
      if (e.param) {
        m = merge_face(m, e.target, static_cast<int>(*e.param)).model;
      } else {
        term(e).coupling = Coupling::infinity();
      }
    } else if (e.rule == "delete") {
      term(e).coupling = Coupling(0.0);
    } else if (e.rule == "set") {
      term(e).coupling = e.param ? Coupling(*e.param) : Coupling::infinity();
    } else if (e.rule == "finite_j") {
      const double j = e.param.value_or(0.0);
      require(j >= 0 && std::isfinite(j), ErrorKind::Validation, "J_large must be finite and >= 0");
      require(term(e).kind == TermKind::ParityIsing, ErrorKind::Validation, "finite-J merge needs a ParityIsing term");
      term(e).coupling = Coupling(j);
    } else {
      fail(ErrorKind::Validation, "unknown trace rule '" + e.rule + "'");
    }
  }
  flush();
  return m;
}

}  // namespace latmap
