// Copyright 2026 The latmap Authors
// SPDX-License-Identifier: Apache-2.0
#include "latmap/walsh.hpp"

#include <cmath>
#include <map>
#include <random>

#include "latmap/errors.hpp"
#include "latmap/exact.hpp"

namespace latmap {

namespace {

int log2_size(std::size_t size) {
  require(size > 0 && (size & (size - 1)) == 0, ErrorKind::Precondition, "vector length must be a power of two");
  return __builtin_ctzll(size);
}

}  // namespace

void fwht(std::vector<double>& v) {
  log2_size(v.size());
  for (std::size_t h = 1; h < v.size(); h <<= 1) {
    for (std::size_t i = 0; i < v.size(); i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double a = v[j], b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
    }
  }
}

std::vector<double> couplings_to_energies(const std::vector<double>& couplings) {
  std::vector<double> v = couplings;
  fwht(v);
  return v;
}

std::vector<double> energies_to_couplings(const std::vector<double>& energies) {
  std::vector<double> v = energies;
  fwht(v);
  const double scale = 1.0 / static_cast<double>(v.size());
  for (double& x : v) x *= scale;
  return v;
}

std::vector<double> couplings_to_energies_naive(const std::vector<double>& couplings) {
  log2_size(couplings.size());
  std::vector<double> out(couplings.size(), 0.0);
  for (std::size_t s = 0; s < couplings.size(); ++s) {
    for (std::size_t S = 0; S < couplings.size(); ++S) out[s] += character(s, S) * couplings[S];
  }
  return out;
}

std::pair<int, int> pairing_counts(int n, std::uint64_t s, std::uint64_t t) {
  int agree = 0, disagree = 0;
  for (std::uint64_t col = 0; col < (1ULL << n); ++col) {
    (character(s, col) == character(t, col) ? agree : disagree)++;
  }
  return {agree, disagree};
}

bool verify_orthogonality(int n, int samples, std::uint64_t seed) {
  require(n >= 0 && n <= 12, ErrorKind::Precondition, "orthogonality check is materialized for n <= 12");
  const std::size_t size = 1ULL << n;
  const std::size_t words = (size + 63) / 64;
  // bit set where the entry is -1
  std::vector<std::uint64_t> rows(size * words, 0);
  for (std::size_t s = 0; s < size; ++s) {
    for (std::size_t S = 0; S < size; ++S) {
      if (character(s, S) < 0) rows[s * words + S / 64] |= 1ULL << (S % 64);
    }
  }
  for (std::size_t a = 0; a < size; ++a) {
    for (std::size_t b = a; b < size; ++b) {
      long diff = 0;
      for (std::size_t w = 0; w < words; ++w) diff += __builtin_popcountll(rows[a * words + w] ^ rows[b * words + w]);
      const long dot = static_cast<long>(size) - 2 * diff;
      if (dot != (a == b ? static_cast<long>(size) : 0)) return false;
    }
  }
  if (n == 0) return true;
  // pairing: for rows s != t pick a bit x where they differ; flipping x in the
  // column maps agreeing columns onto disagreeing ones
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> pick(0, size - 1);
  for (int k = 0; k < samples; ++k) {
    const std::uint64_t s = pick(rng), t = pick(rng);
    if (s == t) continue;
    const std::uint64_t x = 1ULL << __builtin_ctzll(s ^ t);
    int agree = 0, disagree = 0;
    for (std::uint64_t col = 0; col < size; ++col) {
      const bool same = character(s, col) == character(t, col);
      const bool partner_same = character(s, col ^ x) == character(t, col ^ x);
      if (same == partner_same) return false;
      (same ? agree : disagree)++;
    }
    if (agree != disagree) return false;
  }
  return true;
}

SpinModel superclique_model(int n, const std::vector<double>& couplings) {
  require(n >= 0 && n < 31, ErrorKind::Precondition, "superclique size out of range");
  require(couplings.size() == (1ULL << n), ErrorKind::Validation, "coupling vector must have 2^n entries");
  SpinModel m = make_binary_model(n);
  m.energy_offset = couplings[0];
  for (std::uint64_t S = 1; S < couplings.size(); ++S) {
    std::vector<int> sup;
    for (int j = 0; j < n; ++j) {
      if (S >> j & 1) sup.push_back(j);
    }
    // E(s) = sum_S J_S (-1)^{|s & S|}, so the parity term carries -J_S
    m.terms.push_back(InteractionTerm::parity(std::move(sup), couplings[S] == 0.0 ? 0.0 : -couplings[S]));
  }
  return m;
}

double QLevelEncoding::penalty_bound(double beta) const {
  double ratio_base = 0.0;  // log of prod_i (1 + N_i e^{-beta P} / q_i)
  for (std::size_t i = 0; i < original_levels.size(); ++i) {
    const int q = original_levels[i];
    const int invalid = (1 << bits[i].size()) - q;
    if (invalid > 0) ratio_base += std::log1p(invalid * std::exp(-beta * penalty) / q);
  }
  return std::exp(beta * (energy_high - energy_low)) * std::expm1(ratio_base);
}

Configuration QLevelEncoding::encode(const Configuration& config) const {
  Configuration out(static_cast<std::size_t>(model.num_spins()), 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    for (std::size_t j = 0; j < bits[i].size(); ++j) out[bits[i][j]] = (config[i] >> j) & 1;
  }
  return out;
}

QLevelEncoding encode_qlevel(const SpinModel& model, const EncodeOptions& options) {
  model.validate();
  require(options.beta_min > 0, ErrorKind::Precondition, "beta_min must be positive");
  require(!model.has_infinite(), ErrorKind::Precondition, "encoding needs finite couplings");
  QLevelEncoding enc;
  enc.penalty = options.penalty > 0 ? options.penalty : 60.0 / options.beta_min;
  enc.original_levels = model.levels;
  int next = 0;
  for (int q : model.levels) {
    std::vector<int> b;
    for (int j = 0; j < bits_for_levels(q); ++j) b.push_back(next++);
    enc.bits.push_back(std::move(b));
  }
  SpinModel& out = enc.model;
  out = make_binary_model(next);
  out.energy_offset = model.energy_offset;
  out.log2_prefactor = model.log2_prefactor;
  std::map<std::vector<int>, double> parity;

  auto add_table = [&](const std::vector<int>& orig_support, const std::vector<double>& table) {
    // binary support and its table, invalid codewords at 0
    std::vector<int> bin;
    for (int s : orig_support) bin.insert(bin.end(), enc.bits[s].begin(), enc.bits[s].end());
    require(bin.size() <= 24, ErrorKind::CapExceeded, "encoded term too wide");
    std::vector<double> energies(1ULL << bin.size(), 0.0);
    for (std::size_t code = 0; code < energies.size(); ++code) {
      std::size_t shift = 0, idx = 0, stride = 1;
      bool valid = true;
      for (int s : orig_support) {
        const int m = static_cast<int>(enc.bits[s].size());
        const int v = static_cast<int>((code >> shift) & ((1u << m) - 1));
        shift += m;
        if (v >= model.levels[s]) valid = false;
        idx += static_cast<std::size_t>(v) * stride;
        stride *= model.levels[s];
      }
      if (valid) energies[code] = table[idx];
    }
    const auto j = energies_to_couplings(energies);
    out.energy_offset += j[0];
    for (std::size_t S = 1; S < j.size(); ++S) {
      if (j[S] == 0.0) continue;
      std::vector<int> sup;
      for (std::size_t b = 0; b < bin.size(); ++b) {
        if (S >> b & 1) sup.push_back(bin[b]);
      }
      std::sort(sup.begin(), sup.end());
      // -J(-1)^{...}: the parity term equals the character term with coupling -J_S
      parity[sup] -= j[S];
    }
  };

  for (const auto& t : model.terms) {
    if (t.coupling.is_zero()) continue;
    const auto table = expand_table(t, model);
    double lo = 0.0, hi = -1e300;
    for (double v : table) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    enc.energy_low += lo;
    enc.energy_high += hi;
    add_table(t.support, table);
  }
  for (int i = 0; i < model.num_spins(); ++i) {
    const int q = model.levels[i];
    const int m = static_cast<int>(enc.bits[i].size());
    if ((1 << m) == q) continue;
    // penalty table over this spin alone, valid codes at 0
    std::vector<double> table(static_cast<std::size_t>(q), 0.0);
    std::vector<double> energies(1ULL << m, enc.penalty);
    for (int v = 0; v < q; ++v) energies[v] = 0.0;
    const auto j = energies_to_couplings(energies);
    out.energy_offset += j[0];
    for (std::size_t S = 1; S < j.size(); ++S) {
      if (j[S] == 0.0) continue;
      std::vector<int> sup;
      for (int b = 0; b < m; ++b) {
        if (S >> b & 1) sup.push_back(enc.bits[i][b]);
      }
      parity[sup] -= j[S];
    }
  }
  for (const auto& [sup, jv] : parity) {
    if (jv != 0.0) out.terms.push_back(InteractionTerm::parity(sup, jv));
  }
  sort_terms(out);
  std::vector<double> betas = options.betas;
  if (betas.empty()) betas.push_back(options.beta_min);
  for (double beta : betas) {
    const double bound = enc.penalty_bound(beta);
    require(bound <= options.tol, ErrorKind::Precondition,
            "penalty sector weight " + std::to_string(bound) + " exceeds tolerance at beta " + std::to_string(beta));
  }
  return enc;
}

GaugeModel discretize_u1(const LatticeGeometry& geometry, int q, const std::vector<double>& face_couplings) {
  return build_zq_lgt(geometry, q, face_couplings);
}

double haar_log_z(const GaugeModel& gm, double beta) {
  return partition_function(gm.model, beta).log_z - gm.geometry.num_edges() * std::log(static_cast<double>(gm.q));
}

U1Probe u1_convergence_probe(const LatticeGeometry& geometry, const std::vector<double>& face_couplings, double beta,
                             int q0, int doublings) {
  require(q0 >= 2 && doublings >= 1, ErrorKind::Precondition, "probe needs q0 >= 2 and at least one doubling");
  U1Probe p;
  for (int k = 0, q = q0; k <= doublings; ++k, q *= 2) {
    p.q.push_back(q);
    p.log_z.push_back(haar_log_z(discretize_u1(geometry, q, face_couplings), beta));
  }
  for (std::size_t k = 0; k + 1 < p.log_z.size(); ++k) p.change.push_back(std::fabs(p.log_z[k] - p.log_z[k + 1]));
  return p;
}

}  // namespace latmap
