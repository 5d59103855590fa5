// Copyright 2026 The latmap Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "latmap/gauge.hpp"
#include "latmap/gf2.hpp"
#include "latmap/rewrite.hpp"
#include "latmap/spin_model.hpp"

namespace latmap {

struct EngineOptions {
  int max_free = 26;  // log2 of the largest enumerable configuration count
  int threads = 0;    // 0: LATMAP_THREADS, else hardware concurrency
};

struct PartitionResult {
  double log_z = 0.0;
  double beta = 0.0;
  int num_free_spins = 0;
  int log2_prefactor = 0;  // total power of two applied outside the enumeration
  double offset = 0.0;     // total energy offset applied outside the enumeration
};

PartitionResult partition_function(const SpinModel& model, double beta, const EngineOptions& options = {});

// Ensemble averages next to log Z. Parities are sets of binary spins; their
// averages are <(-1)^{sum}>.
struct EnsembleResult {
  PartitionResult z;
  double mean_energy = 0.0;
  std::vector<double> parity_means;
};

EnsembleResult ensemble(const SpinModel& model, double beta, const std::vector<SparseVec>& parities,
                        const EngineOptions& options = {});

// Value from the ensemble path and from finite differences of log Z.
struct CrossChecked {
  double value = 0.0;
  double ensemble = 0.0;
  double finite_difference = 0.0;
};

struct ObservableOptions {
  EngineOptions engine;
  double h_step = 1e-4;
  double beta_step = 1e-4;  // relative
  double tol = 1e-7;        // |a-b| <= tol*max(1,|a|)
};

CrossChecked mean_energy(const SpinModel& model, double beta, const ObservableOptions& options = {});
double free_energy(const SpinModel& model, double beta, const EngineOptions& options = {});
double entropy(const SpinModel& model, double beta, const ObservableOptions& options = {});
CrossChecked magnetization(const SpinModel& model, double beta, const std::vector<int>& sites,
                           const ObservableOptions& options = {});
CrossChecked wilson_loop(const GaugeModel& gm, double beta, const std::vector<int>& loop_edges,
                         const ObservableOptions& options = {});
double face_correlation(const GaugeModel& gm, double beta, int f1, int f2, const EngineOptions& options = {});
// Euclidean distance between face centers.
double face_distance(const LatticeGeometry& geometry, int f1, int f2);

// Throws unless the edge set has even degree at every vertex.
void check_closed_loop(const LatticeGeometry& geometry, const std::vector<int>& edges);

// Richardson-extrapolated central difference of f at x with step h.
template <class F>
double richardson_derivative(F&& f, double x, double h) {
  const double d1 = (f(x + h) - f(x - h)) / (2 * h);
  const double d2 = (f(x + h / 2) - f(x - h / 2)) / h;
  return (4 * d2 - d1) / 3;
}

int engine_threads(const EngineOptions& options);

}  // namespace latmap

namespace latmap {

struct ExtraTerm {
  SparseVec spins;  // binary original spins
  double coupling = 0.0;
};

// Extraction done once, enumeration per call. Extra parity terms and parity
// observables are mapped through the constraints, so perturbing a finite
// term never repeats the elimination.
class PreparedModel {
 public:
  explicit PreparedModel(const SpinModel& model, const EngineOptions& options = {},
                         const ExtractOptions& extract = {});

  const EffectiveModel& effective() const { return eff_; }
  EnsembleResult evaluate(double beta, const std::vector<SparseVec>& parities = {},
                          const std::vector<ExtraTerm>& extra = {}) const;
  double log_z(double beta, const std::vector<ExtraTerm>& extra = {}) const { return evaluate(beta, {}, extra).z.log_z; }

 private:
  EngineOptions options_;
  EffectiveModel eff_;
};

}  // namespace latmap
