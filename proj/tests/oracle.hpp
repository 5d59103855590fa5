// Copyright 2026 The latmap Authors
// SPDX-License-Identifier: Apache-2.0
//
// Plain enumeration over every configuration. Shares no code with the
// engine beyond the model struct.
#pragma once

#include <cmath>
#include <algorithm>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "latmap/spin_model.hpp"

namespace oracle {

using latmap::InteractionTerm;
using latmap::SpinModel;
using latmap::TermKind;

inline double energy_of(const InteractionTerm& t, const SpinModel& m, const std::vector<int>& s, double j) {
  switch (t.kind) {
    case TermKind::ParityIsing: {
      int sum = 0;
      for (int i : t.support) sum += s[i];
      return sum % 2 ? j : -j;
    }
    case TermKind::ClockCosine: {
      const int q = m.levels[t.support[0]];
      long sum = 0;
      for (std::size_t k = 0; k < t.support.size(); ++k) {
        sum += static_cast<long>(t.weights.empty() ? 1 : t.weights[k]) * s[t.support[k]];
      }
      const long r = ((sum % q) + q) % q;
      return -j * std::cos(2.0 * std::numbers::pi * static_cast<double>(r) / q);
    }
    case TermKind::GeneralTable: {
      std::size_t idx = 0, stride = 1;
      for (int i : t.support) {
        idx += stride * static_cast<std::size_t>(s[i]);
        stride *= static_cast<std::size_t>(m.levels[i]);
      }
      return j * t.table[idx];
    }
  }
  return 0.0;
}

// Infinite ParityIsing terms act as "even parity" filters.
inline bool allowed(const SpinModel& m, const std::vector<int>& s) {
  for (const auto& t : m.terms) {
    if (!t.coupling.is_infinite()) continue;
    int sum = 0;
    for (int i : t.support) sum += s[i];
    if (sum % 2) return false;
  }
  return true;
}

inline double energy(const SpinModel& m, const std::vector<int>& s) {
  double e = m.energy_offset;
  for (const auto& t : m.terms) {
    if (t.coupling.is_infinite()) continue;
    e += energy_of(t, m, s, t.coupling.value());
  }
  return e;
}

template <class F>
void for_each_config(const SpinModel& m, F&& f) {
  const int n = m.num_spins();
  std::vector<int> s(n, 0);
  while (true) {
    f(s);
    int i = 0;
    while (i < n && ++s[i] == m.levels[i]) s[i++] = 0;
    if (i == n) break;
  }
}

struct Averages {
  double log_z = 0.0;
  double energy = 0.0;
  std::vector<double> parity;  // per requested support
};

inline Averages averages(const SpinModel& m, double beta, const std::vector<std::vector<int>>& supports = {}) {
  // two passes: max exponent, then shifted sums
  double emin = INFINITY;
  for_each_config(m, [&](const std::vector<int>& s) {
    if (allowed(m, s)) emin = std::min(emin, energy(m, s));
  });
  double z = 0.0, ez = 0.0;
  std::vector<double> pz(supports.size(), 0.0);
  for_each_config(m, [&](const std::vector<int>& s) {
    if (!allowed(m, s)) return;
    const double e = energy(m, s);
    const double w = std::exp(-beta * (e - emin));
    z += w;
    ez += w * e;
    for (std::size_t k = 0; k < supports.size(); ++k) {
      int sum = 0;
      for (int i : supports[k]) sum += s[i];
      pz[k] += sum % 2 ? -w : w;
    }
  });
  Averages a;
  a.log_z = std::log(z) - beta * emin + m.log2_prefactor * std::log(2.0);
  a.energy = ez / z;
  for (double p : pz) a.parity.push_back(p / z);
  return a;
}

inline double log_z(const SpinModel& m, double beta) { return averages(m, beta).log_z; }

// Random binary model: parity terms of size 1..max_k, optional infinite ones.
inline SpinModel random_binary(std::mt19937_64& rng, int n, int terms, int max_k, double p_inf = 0.0) {
  SpinModel m = latmap::make_binary_model(n);
  std::uniform_int_distribution<int> size(1, std::min(max_k, n));
  std::uniform_real_distribution<double> j(-1.5, 1.5), u(0.0, 1.0);
  for (int t = 0; t < terms; ++t) {
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<int> sup(all.begin(), all.begin() + size(rng));
    std::sort(sup.begin(), sup.end());
    if (u(rng) < p_inf) {
      m.terms.push_back(InteractionTerm::parity(sup, latmap::Coupling::infinity()));
    } else {
      m.terms.push_back(InteractionTerm::parity(sup, j(rng)));
    }
  }
  return m;
}

}  // namespace oracle
