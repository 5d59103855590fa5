// Copyright 2026 The latmap Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "latmap/lattice.hpp"
#include "latmap/spin_model.hpp"

namespace latmap {

// A spin model tied to a geometry: one spin per edge, optionally one matter
// spin per vertex. Face terms use the global edge orientation.
struct GaugeModel {
  LatticeGeometry geometry;
  int q = 2;
  SpinModel model;
  std::vector<int> edge_spin;    // edge -> spin
  std::vector<int> vertex_spin;  // vertex -> spin, or -1
  std::vector<int> face_term;    // face -> term

  bool has_matter() const;
};

// q = 2 yields ParityIsing faces, q > 2 ClockCosine faces with +-1 weights.
GaugeModel build_zq_lgt(const LatticeGeometry& geometry, int q, std::span<const double> face_couplings);

// Edge spins 0..E-1 then vertex spins E..E+V-1. Edge terms are appended after
// the face terms, one per edge with phase -s_tail + s_edge + s_head.
GaugeModel build_matter_lgt(const LatticeGeometry& geometry, int q, std::span<const double> face_couplings,
                            std::span<const double> edge_couplings);

// Wraps a plain model on vertex spins; has no edge spins, so it is not a gauge
// model and gauge operations reject it.
GaugeModel vertex_spin_model(const LatticeGeometry& geometry, SpinModel model);

Configuration gauge_transform(const GaugeModel& gm, int vertex, const Configuration& config);

struct GaugeCheck {
  bool invariant = true;
  Configuration witness;
  int vertex = -1;
};

GaugeCheck check_gauge_invariance(const GaugeModel& gm, int trials, std::uint64_t seed);

}  // namespace latmap
