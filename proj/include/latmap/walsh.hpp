// Copyright 2026 The latmap Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "latmap/gauge.hpp"
#include "latmap/lattice.hpp"
#include "latmap/spin_model.hpp"

namespace latmap {

// Index convention for both vectors: bit j of the index <-> spin j.
// Couplings are indexed by subset mask S, energies by configuration s.
inline constexpr const char* kIndexConvention = "subset-mask-bit-j";

inline int character(std::uint64_t s, std::uint64_t subset) { return (__builtin_popcountll(s & subset) & 1) ? -1 : 1; }

// In-place unnormalized fast Walsh-Hadamard transform; size must be 2^n.
void fwht(std::vector<double>& v);

std::vector<double> couplings_to_energies(const std::vector<double>& couplings);
std::vector<double> energies_to_couplings(const std::vector<double>& energies);
// O(4^n) matrix product, for cross-checks.
std::vector<double> couplings_to_energies_naive(const std::vector<double>& couplings);

// Sizes of the agreeing and disagreeing column sets of rows s and t.
std::pair<int, int> pairing_counts(int n, std::uint64_t s, std::uint64_t t);

// C*C^T == 2^n I entrywise, plus |S| == |D| on `samples` random row pairs.
bool verify_orthogonality(int n, int samples = 64, std::uint64_t seed = 1);

// One ParityIsing term per nonempty subset in mask order, J_0 in the offset.
// Energies equal couplings_to_energies(couplings), so term S has coupling -J_S.
SpinModel superclique_model(int n, const std::vector<double>& couplings);

struct EncodeOptions {
  double beta_min = 0.1;            // penalty defaults to 60 / beta_min
  double penalty = 0.0;             // > 0 overrides the default
  std::vector<double> betas{};      // bound checked at each, defaults to beta_min
  double tol = 1e-10;               // max relative penalty-sector weight
};

struct QLevelEncoding {
  SpinModel model;                       // binary, ParityIsing terms only
  std::vector<std::vector<int>> bits;    // original spin -> binary spins, least significant first
  std::vector<int> original_levels;
  double penalty = 0.0;
  double energy_low = 0.0;   // lower bound on term energies in any sector
  double energy_high = 0.0;  // upper bound on term energies in the valid sector

  // Bound on Z_invalid / Z_valid at beta; log Z_encoded - log Z_original lies in [0, log1p(bound)].
  double penalty_bound(double beta) const;
  // Original configuration -> binary configuration.
  Configuration encode(const Configuration& config) const;
};

QLevelEncoding encode_qlevel(const SpinModel& model, const EncodeOptions& options = {});

inline int bits_for_levels(int q) {
  int m = 0;
  while ((1 << m) < q) ++m;
  return m;
}

// theta_e = 2*pi*s_e/q: a ClockCosine Z_q gauge theory.
GaugeModel discretize_u1(const LatticeGeometry& geometry, int q, const std::vector<double>& face_couplings);

// log Z with the uniform measure per edge: log Z_q - |E| log q.
double haar_log_z(const GaugeModel& gm, double beta);

struct U1Probe {
  std::vector<int> q;
  std::vector<double> log_z;     // haar-normalized
  std::vector<double> change;    // |log Z_q - log Z_2q|
};

U1Probe u1_convergence_probe(const LatticeGeometry& geometry, const std::vector<double>& face_couplings, double beta,
                             int q0, int doublings);

}  // namespace latmap
