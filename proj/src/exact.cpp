// Copyright 2026 The latmap Authors
// SPDX-License-Identifier: Apache-2.0
#include "latmap/exact.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <thread>

#include "latmap/errors.hpp"

namespace latmap {

namespace {

constexpr std::int64_t kChunk = 1 << 12;

struct Neumaier {
  double sum = 0.0, comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + comp; }
};

struct ChunkResult {
  double emin = std::numeric_limits<double>::infinity();
  std::vector<double> sums;  // [weight, weight*E, weight*parity_k...]
};

// Enumerates a model without infinite couplings. Spins in no nonzero term
// contribute ln q analytically.
struct Enumerator {
  const SpinModel& model;
  std::vector<int> vars;      // enumerated spins
  std::vector<int> position;  // spin -> position in vars or -1
  std::vector<int> radix;
  std::int64_t total = 1;
  double log_unused = 0.0;
  bool fast = true;
  // fast path
  std::vector<std::uint64_t> masks;
  std::vector<double> couplings;
  std::vector<std::uint64_t> parity_masks;
  // generic path
  struct TableTerm {
    std::vector<int> pos;
    std::vector<std::int64_t> stride;
    std::vector<double> table;
    bool parity = false;
    double j = 0.0;
  };
  std::vector<TableTerm> generic;
  std::vector<std::vector<int>> parity_pos;

  Enumerator(const SpinModel& m, const std::vector<SparseVec>& parities, int max_free) : model(m) {
    const int n = m.num_spins();
    position.assign(n, -1);
    std::vector<char> used(n, 0);
    for (const auto& t : m.terms) {
      require(!t.coupling.is_infinite(), ErrorKind::Precondition, "enumeration needs finite couplings");
      if (t.coupling.is_zero()) continue;
      for (int s : t.support) used[s] = 1;
    }
    for (const auto& p : parities) {
      for (int s : p) used[s] = 1;
    }
    double log2_total = 0.0;
    for (int s = 0; s < n; ++s) {
      if (used[s]) {
        position[s] = static_cast<int>(vars.size());
        vars.push_back(s);
        radix.push_back(m.levels[s]);
        log2_total += std::log2(static_cast<double>(m.levels[s]));
        if (m.levels[s] != 2) fast = false;
      } else {
        log_unused += std::log(static_cast<double>(m.levels[s]));
      }
    }
    if (log2_total > max_free + 1e-9) {
      throw Error(ErrorKind::CapExceeded, "instance too large for exact enumeration: 2^" +
                                              std::to_string(log2_total) + " configurations over " +
                                              std::to_string(vars.size()) + " free spins, cap 2^" +
                                              std::to_string(max_free));
    }
    for (int r : radix) total *= r;
    for (const auto& t : m.terms) {
      if (t.coupling.is_zero() || t.kind != TermKind::ParityIsing) {
        if (!t.coupling.is_zero()) fast = false;
      }
    }
    if (fast) {
      for (const auto& t : m.terms) {
        if (t.coupling.is_zero()) continue;
        std::uint64_t mask = 0;
        for (int s : t.support) mask |= 1ULL << position[s];
        masks.push_back(mask);
        couplings.push_back(t.coupling.value());
      }
      for (const auto& p : parities) {
        std::uint64_t mask = 0;
        for (int s : p) mask |= 1ULL << position[s];
        parity_masks.push_back(mask);
      }
      return;
    }
    std::vector<std::int64_t> var_stride(vars.size(), 1);
    for (std::size_t i = 1; i < vars.size(); ++i) var_stride[i] = var_stride[i - 1] * radix[i - 1];
    for (const auto& t : m.terms) {
      if (t.coupling.is_zero()) continue;
      TableTerm tt;
      for (int s : t.support) tt.pos.push_back(position[s]);
      if (t.kind == TermKind::ParityIsing) {
        tt.parity = true;
        tt.j = t.coupling.value();
      } else {
        tt.table = expand_table(t, m);
        std::int64_t st = 1;
        for (int s : t.support) {
          tt.stride.push_back(st);
          st *= m.levels[s];
        }
      }
      generic.push_back(std::move(tt));
    }
    for (const auto& p : parities) {
      std::vector<int> pos;
      for (int s : p) pos.push_back(position[s]);
      parity_pos.push_back(std::move(pos));
    }
  }

  double fast_energy(std::uint64_t x) const {
    double e = 0.0;
    for (std::size_t t = 0; t < masks.size(); ++t) {
      e += __builtin_parityll(x & masks[t]) ? couplings[t] : -couplings[t];
    }
    return e;
  }

  double generic_energy(const std::vector<int>& digit) const {
    double e = 0.0;
    for (const auto& t : generic) {
      if (t.parity) {
        int p = 0;
        for (int q : t.pos) p ^= digit[q] & 1;
        e += p ? t.j : -t.j;
      } else {
        std::int64_t idx = 0;
        for (std::size_t i = 0; i < t.pos.size(); ++i) idx += digit[t.pos[i]] * t.stride[i];
        e += t.table[static_cast<std::size_t>(idx)];
      }
    }
    return e;
  }

  void decode(std::int64_t index, std::vector<int>& digit) const {
    for (std::size_t i = 0; i < radix.size(); ++i) {
      digit[i] = static_cast<int>(index % radix[i]);
      index /= radix[i];
    }
  }
  void increment(std::vector<int>& digit) const {
    for (std::size_t i = 0; i < radix.size(); ++i) {
      if (++digit[i] < radix[i]) return;
      digit[i] = 0;
    }
  }

  ChunkResult run_chunk(std::int64_t begin, std::int64_t end, double beta, std::size_t nobs) const {
    const std::size_t len = static_cast<std::size_t>(end - begin);
    std::vector<double> energy(len);
    std::vector<int> digit(radix.size());
    if (fast) {
      for (std::size_t i = 0; i < len; ++i) energy[i] = fast_energy(static_cast<std::uint64_t>(begin) + i);
    } else {
      decode(begin, digit);
      for (std::size_t i = 0; i < len; ++i) {
        energy[i] = generic_energy(digit);
        increment(digit);
      }
    }
    ChunkResult r;
    r.emin = *std::min_element(energy.begin(), energy.end());
    std::vector<Neumaier> acc(2 + nobs);
    if (!fast) decode(begin, digit);
    for (std::size_t i = 0; i < len; ++i) {
      const double w = std::exp(-beta * (energy[i] - r.emin));
      acc[0].add(w);
      acc[1].add(w * energy[i]);
      for (std::size_t k = 0; k < nobs; ++k) {
        int p = 0;
        if (fast) {
          p = __builtin_parityll((static_cast<std::uint64_t>(begin) + i) & parity_masks[k]);
        } else {
          for (int q : parity_pos[k]) p ^= digit[q] & 1;
        }
        acc[2 + k].add(p ? -w : w);
      }
      if (!fast) increment(digit);
    }
    r.sums.resize(acc.size());
    for (std::size_t k = 0; k < acc.size(); ++k) r.sums[k] = acc[k].value();
    return r;
  }
};

struct EnumOutcome {
  double log_z = 0.0;  // includes unused spins, excludes nothing else
  double mean_energy = 0.0;
  std::vector<double> parity_means;
  int enumerated = 0;
};

EnumOutcome enumerate(const SpinModel& m, double beta, const std::vector<SparseVec>& parities,
                      const EngineOptions& options) {
  Enumerator en(m, parities, options.max_free);
  const std::int64_t nchunks = (en.total + kChunk - 1) / kChunk;
  std::vector<ChunkResult> chunks(static_cast<std::size_t>(nchunks));
  const std::size_t nobs = parities.size();
  const int workers = static_cast<int>(std::min<std::int64_t>(engine_threads(options), nchunks));
  auto work = [&](std::atomic<std::int64_t>& next) {
    for (;;) {
      const std::int64_t c = next.fetch_add(1);
      if (c >= nchunks) return;
      chunks[static_cast<std::size_t>(c)] =
          en.run_chunk(c * kChunk, std::min(en.total, (c + 1) * kChunk), beta, nobs);
    }
  };
  std::atomic<std::int64_t> next{0};
  if (workers <= 1) {
    work(next);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(work, std::ref(next));
    for (auto& th : pool) th.join();
  }
  double emin = std::numeric_limits<double>::infinity();
  for (const auto& c : chunks) emin = std::min(emin, c.emin);
  std::vector<Neumaier> total(2 + nobs);
  for (const auto& c : chunks) {
    const double scale = std::exp(-beta * (c.emin - emin));
    for (std::size_t k = 0; k < total.size(); ++k) total[k].add(scale * c.sums[k]);
  }
  EnumOutcome out;
  const double z = total[0].value();
  out.log_z = -beta * emin + std::log(z) + en.log_unused;
  out.mean_energy = total[1].value() / z;
  for (std::size_t k = 0; k < nobs; ++k) out.parity_means.push_back(total[2 + k].value() / z);
  out.enumerated = static_cast<int>(en.vars.size());
  return out;
}

bool agree(double a, double b, double tol) { return std::fabs(a - b) <= tol * std::max(1.0, std::fabs(a)); }

void require_beta(double beta) {
  require(beta > 0 && std::isfinite(beta), ErrorKind::Precondition, "beta must be positive");
}

}  // namespace

int engine_threads(const EngineOptions& options) {
  if (options.threads > 0) return options.threads;
  if (const char* env = std::getenv("LATMAP_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

PreparedModel::PreparedModel(const SpinModel& model, const EngineOptions& options, const ExtractOptions& extract)
    : options_(options), eff_(extract_effective_model(model, extract)) {}

EnsembleResult PreparedModel::evaluate(double beta, const std::vector<SparseVec>& parities,
                                       const std::vector<ExtraTerm>& extra) const {
  require_beta(beta);
  SpinModel m = eff_.model;
  int log2_factor = eff_.log2_factor;
  // free spins outside the effective model that the request touches
  std::map<int, int> hidden;
  auto map_vec = [&](const SparseVec& original) -> std::pair<SparseVec, bool> {
    for (int s : original) {
      require(s >= 0 && s < static_cast<int>(eff_.eff_index.size()), ErrorKind::Precondition,
              "spin " + std::to_string(s) + " out of range");
    }
    auto [red, c] = eff_.constraints.reduce(original);
    SparseVec out;
    for (int v : red) {
      int e = eff_.eff_index[v];
      if (e < 0) {
        auto it = hidden.find(v);
        if (it == hidden.end()) {
          e = m.num_spins();
          m.levels.push_back(2);
          --log2_factor;
          hidden.emplace(v, e);
        } else {
          e = it->second;
        }
      }
      require(m.levels[e] == 2, ErrorKind::Precondition, "parity over a spin with q != 2");
      out.push_back(e);
    }
    std::sort(out.begin(), out.end());
    return {out, c};
  };
  std::vector<SparseVec> mapped;
  std::vector<char> flip;
  for (const auto& p : parities) {
    auto [v, c] = map_vec(p);
    mapped.push_back(std::move(v));
    flip.push_back(c);
  }
  double extra_offset = 0.0;
  for (const auto& t : extra) {
    if (t.coupling == 0.0) continue;
    auto [v, c] = map_vec(t.spins);
    const double j = c ? -t.coupling : t.coupling;
    if (v.empty()) {
      extra_offset -= j;
    } else {
      m.terms.push_back(InteractionTerm::parity(std::move(v), j));
    }
  }
  const EnumOutcome en = enumerate(m, beta, mapped, options_);
  EnsembleResult r;
  r.z.beta = beta;
  r.z.log2_prefactor = log2_factor;
  r.z.offset = eff_.offset + extra_offset;
  r.z.num_free_spins = en.enumerated;
  r.z.log_z = log2_factor * std::numbers::ln2 - beta * r.z.offset + en.log_z;
  r.mean_energy = en.mean_energy + r.z.offset;
  for (std::size_t k = 0; k < parities.size(); ++k) {
    r.parity_means.push_back(flip[k] ? -en.parity_means[k] : en.parity_means[k]);
  }
  return r;
}

PartitionResult partition_function(const SpinModel& model, double beta, const EngineOptions& options) {
  require_beta(beta);
  model.validate();
  return PreparedModel(model, options).evaluate(beta).z;
}

EnsembleResult ensemble(const SpinModel& model, double beta, const std::vector<SparseVec>& parities,
                        const EngineOptions& options) {
  require_beta(beta);
  model.validate();
  return PreparedModel(model, options).evaluate(beta, parities);
}

CrossChecked mean_energy(const SpinModel& model, double beta, const ObservableOptions& options) {
  require_beta(beta);
  model.validate();
  PreparedModel pm(model, options.engine);
  CrossChecked r;
  r.ensemble = pm.evaluate(beta).mean_energy;
  r.finite_difference = -richardson_derivative([&](double b) { return pm.log_z(b); }, beta, beta * options.beta_step);
  r.value = r.ensemble;
  if (!agree(r.ensemble, r.finite_difference, options.tol)) {
    fail(ErrorKind::Verification, "mean energy paths disagree: ensemble " + std::to_string(r.ensemble) +
                                      " vs finite difference " + std::to_string(r.finite_difference));
  }
  return r;
}

double free_energy(const SpinModel& model, double beta, const EngineOptions& options) {
  return -partition_function(model, beta, options).log_z / beta;
}

double entropy(const SpinModel& model, double beta, const ObservableOptions& options) {
  require_beta(beta);
  model.validate();
  PreparedModel pm(model, options.engine);
  const double t = 1.0 / beta;
  auto a_of_t = [&](double temp) { return -temp * pm.log_z(1.0 / temp); };
  const double s = -richardson_derivative(a_of_t, t, t * options.beta_step);
  const double a = a_of_t(t);
  const double u = pm.evaluate(beta).mean_energy;
  if (!agree(u, a + t * s, options.tol)) {
    fail(ErrorKind::Verification, "U = A + TS fails: U=" + std::to_string(u) + " A+TS=" + std::to_string(a + t * s));
  }
  return s;
}

CrossChecked magnetization(const SpinModel& model, double beta, const std::vector<int>& sites,
                           const ObservableOptions& options) {
  require_beta(beta);
  model.validate();
  for (int s : sites) {
    require(s >= 0 && s < model.num_spins() && model.levels[s] == 2, ErrorKind::Precondition,
            "magnetization site " + std::to_string(s) + " is not a binary spin");
    for (const auto& t : model.terms) {
      require(!(t.support.size() == 1 && t.support[0] == s && !t.coupling.is_zero()), ErrorKind::Precondition,
              "site " + std::to_string(s) + " already carries a field");
    }
  }
  PreparedModel pm(model, options.engine);
  std::vector<SparseVec> singles;
  for (int s : sites) singles.push_back({s});
  CrossChecked r;
  for (double v : pm.evaluate(beta, singles).parity_means) r.ensemble += v;
  auto log_z_h = [&](double h) {
    std::vector<ExtraTerm> extra;
    for (int s : sites) extra.push_back({{s}, h / beta});
    return pm.log_z(beta, extra);
  };
  r.finite_difference = richardson_derivative(log_z_h, 0.0, options.h_step);
  r.value = r.ensemble;
  if (!agree(r.ensemble, r.finite_difference, options.tol)) {
    fail(ErrorKind::Verification, "magnetization paths disagree");
  }
  return r;
}

void check_closed_loop(const LatticeGeometry& g, const std::vector<int>& edges) {
  require(!edges.empty(), ErrorKind::Precondition, "empty loop");
  std::map<int, int> degree;
  std::vector<int> sorted = edges;
  std::sort(sorted.begin(), sorted.end());
  require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), ErrorKind::Precondition,
          "loop repeats an edge");
  for (int e : edges) {
    require(e >= 0 && e < g.num_edges(), ErrorKind::Precondition, "loop edge out of range");
    ++degree[g.tail(e)];
    ++degree[g.head(e)];
  }
  for (auto [v, d] : degree) {
    require(d % 2 == 0, ErrorKind::Precondition, "open loop: vertex " + std::to_string(v) + " has odd degree");
  }
}

CrossChecked wilson_loop(const GaugeModel& gm, double beta, const std::vector<int>& loop_edges,
                         const ObservableOptions& options) {
  require(gm.q == 2, ErrorKind::Unsupported, "Wilson loops are evaluated for q = 2");
  check_closed_loop(gm.geometry, loop_edges);
  require_beta(beta);
  gm.model.validate();
  SparseVec spins;
  for (int e : loop_edges) spins.push_back(gm.edge_spin[e]);
  std::sort(spins.begin(), spins.end());
  PreparedModel pm(gm.model, options.engine);
  CrossChecked r;
  r.ensemble = pm.evaluate(beta, {spins}).parity_means[0];
  // source on the loop parity, which equals the product of enclosed face parities
  auto log_z_h = [&](double h) { return pm.log_z(beta, {{spins, h / beta}}); };
  r.finite_difference = richardson_derivative(log_z_h, 0.0, options.h_step);
  r.value = r.ensemble;
  if (!agree(r.ensemble, r.finite_difference, options.tol)) fail(ErrorKind::Verification, "Wilson loop paths disagree");
  return r;
}

double face_correlation(const GaugeModel& gm, double beta, int f1, int f2, const EngineOptions& options) {
  const auto& g = gm.geometry;
  require(f1 >= 0 && f1 < g.num_faces() && f2 >= 0 && f2 < g.num_faces(), ErrorKind::Precondition,
          "face out of range");
  require(f1 != f2, ErrorKind::Precondition, "face correlation needs two distinct faces");
  require(gm.q == 2, ErrorKind::Unsupported, "face correlation is evaluated for q = 2");
  auto face_vec = [&](int f) {
    SparseVec v;
    for (const auto& fe : g.face_boundary(f)) v.push_back(gm.edge_spin[fe.edge]);
    std::sort(v.begin(), v.end());
    return v;
  };
  const SparseVec a = face_vec(f1), b = face_vec(f2);
  auto r = ensemble(gm.model, beta, {a, b, xor_sparse(a, b)}, options);
  return r.parity_means[2] - r.parity_means[0] * r.parity_means[1];
}

double face_distance(const LatticeGeometry& g, int f1, int f2) {
  const auto a = g.face_center(f1), b = g.face_center(f2);
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(d);
}

}  // namespace latmap
