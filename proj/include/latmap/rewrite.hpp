// Copyright 2026 The latmap Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "latmap/gauge.hpp"
#include "latmap/gf2.hpp"
#include "latmap/spin_model.hpp"

namespace latmap {

struct ExtractOptions {
  // Spins to keep as effective spins, in this order, even if no term uses
  // them. They are eliminated last.
  std::vector<int> designated;
  // Spins pinned to 0 in addition to the model's own constraints.
  std::vector<int> fixed;
};

// Z(original) = 2^log2_factor * exp(-beta*offset) * Z(model) for every beta.
struct EffectiveModel {
  SpinModel model;
  std::vector<int> origin;     // effective spin -> original spin
  std::vector<int> eff_index;  // original spin -> effective spin or -1
  int log2_factor = 0;
  double offset = 0.0;
  ConstraintSet constraints;

  struct Parity {
    SparseVec spins;           // effective spins
    bool constant = false;     // parity picks up this constant
    bool hidden = false;       // depends on a free spin outside the model
  };
  // Parity of a set of binary original spins, in effective coordinates.
  Parity reduce_parity(const SparseVec& original) const;

  // Designated spins that ended up dependent on others.
  int dependent_designated = 0;
};

EffectiveModel extract_effective_model(const SpinModel& model, const ExtractOptions& options = {});

// --- rewrite trace ---

struct TraceEntry {
  std::string rule;  // merge, delete, fix, set, finite_j
  int target = -1;
  std::optional<double> param;  // merge: dependent spin; set/finite_j: coupling; nullopt on a set means +inf

  bool operator==(const TraceEntry&) const = default;
};

struct RewriteTrace {
  std::vector<TraceEntry> entries;
  double offset = 0.0;  // accumulated energy offset from folded terms
  int log2_factor = 0;  // accumulated power of two from gauge fixing

  bool operator==(const RewriteTrace&) const = default;
};

// Applies a trace to a model. Rules act on term ids (merge, delete, set,
// finite_j) or spin ids (fix).
SpinModel replay(const SpinModel& model, const RewriteTrace& trace);

struct MergeResult {
  SpinModel model;
  TraceEntry entry;
};

// Turns term `face_term` into a parity constraint and substitutes
// `dependent_spin` (lowest support index when -1) everywhere else.
MergeResult merge_face(const SpinModel& model, int face_term, int dependent_spin = -1);

SpinModel delete_face(const SpinModel& model, int face_term);

// Sets the coupling to a finite J_large instead of +inf.
SpinModel finite_j_merge(const SpinModel& model, int face_term, double j_large);

// |(log Z_finite - beta*J_large*|terms|) - log Z_inf| for the listed terms.
double merge_deviation(const SpinModel& model, const std::vector<int>& terms, double j_large, double beta);

struct GaugeFixResult {
  SpinModel model;
  RewriteTrace trace;
  int log2_ratio = 0;  // Z_before = 2^log2_ratio * Z_after
};

struct GaugeFixOptions {
  // Edges exempt from the cycle check (boundary provenance).
  std::vector<int> exempt;
  std::vector<double> check_betas{0.3, 0.7};
  int cap = 26;
};

// Checks the edges form a forest in the lattice graph, pins them to 0 and
// measures the power-of-two ratio by exact enumeration of both models.
GaugeFixResult gauge_fix_edges(const GaugeModel& gm, const std::vector<int>& edges, const GaugeFixOptions& options = {});

// Throws CycleError when the non-exempt edges contain a cycle.
void check_forest(const LatticeGeometry& geometry, const std::vector<int>& edges, const std::vector<int>& exempt = {});

// Pins spins to 0: removes them from supports, slices tables, and lowers
// log2_prefactor by one per spin.
SpinModel substitute_zero(const SpinModel& model, const std::vector<int>& spins);

}  // namespace latmap
