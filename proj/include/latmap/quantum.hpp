// Copyright 2026 The latmap Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "latmap/gauge.hpp"
#include "latmap/gf2.hpp"
#include "latmap/lattice.hpp"

namespace latmap {

// |F| x |E|, entry (f,e) = 1 iff e bounds f.
DenseGf2 build_incidence(const LatticeGeometry& geometry);

struct StabilizerDescription {
  int faces = 0;
  int edges = 0;
  int rank = 0;
  // X-type: one per independent column; each lists the faces the edge flip touches.
  std::vector<int> x_edges;
  std::vector<std::vector<int>> x_generators;
  // Z-type: face sets whose boundaries cancel (left null space of A).
  std::vector<std::vector<int>> z_generators;
};

int stabilizer_rank(const DenseGf2& incidence);
StabilizerDescription stabilizer_generators(const DenseGf2& incidence);

struct InnerProductOptions {
  int max_faces = 20;        // q = 2 histogram over 2^|F| patterns
  int max_log2_configs = 22;  // q > 2 enumerates q^|E| edge configurations
  double tol = 1e-9;
};

// <alpha|psi> from the face-outcome histogram; returns its logarithm and
// throws Verification if it disagrees with partition_function.
double inner_product_z(const GaugeModel& gm, double beta, const InnerProductOptions& options = {});

// Flips every edge in `edges`: faces whose boundary holds an odd number of
// them get J -> -J.
GaugeModel symmetry_orbit(const GaugeModel& gm, const std::vector<int>& edges);

}  // namespace latmap
