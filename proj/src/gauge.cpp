// Copyright 2026 The latmap Authors
// SPDX-License-Identifier: Apache-2.0
#include "latmap/gauge.hpp"

#include <random>
#include <string>

#include "latmap/errors.hpp"

namespace latmap {

bool GaugeModel::has_matter() const {
  for (int s : vertex_spin) {
    if (s >= 0) return true;
  }
  return false;
}

namespace {

InteractionTerm face_term_for(const LatticeGeometry& g, int f, int q, double j, const std::vector<int>& edge_spin) {
  std::vector<int> support;
  std::vector<int> weights;
  for (const auto& fe : g.face_boundary(f)) {
    support.push_back(edge_spin[fe.edge]);
    weights.push_back(fe.sign);
  }
  if (q == 2) return InteractionTerm::parity(std::move(support), j);
  return InteractionTerm::clock(std::move(support), j, std::move(weights));
}

}  // namespace

GaugeModel build_zq_lgt(const LatticeGeometry& geometry, int q, std::span<const double> face_couplings) {
  require(q >= 2, ErrorKind::Validation, "q must be at least 2");
  require(static_cast<int>(face_couplings.size()) == geometry.num_faces(), ErrorKind::Validation,
          "expected " + std::to_string(geometry.num_faces()) + " face couplings");
  GaugeModel gm;
  gm.geometry = geometry;
  gm.q = q;
  gm.model.levels.assign(geometry.num_edges(), q);
  gm.edge_spin.resize(geometry.num_edges());
  for (int e = 0; e < geometry.num_edges(); ++e) gm.edge_spin[e] = e;
  gm.vertex_spin.assign(geometry.num_vertices(), -1);
  for (int f = 0; f < geometry.num_faces(); ++f) {
    gm.face_term.push_back(static_cast<int>(gm.model.terms.size()));
    gm.model.terms.push_back(face_term_for(geometry, f, q, face_couplings[f], gm.edge_spin));
  }
  return gm;
}

GaugeModel build_matter_lgt(const LatticeGeometry& geometry, int q, std::span<const double> face_couplings,
                            std::span<const double> edge_couplings) {
  require(static_cast<int>(edge_couplings.size()) == geometry.num_edges(), ErrorKind::Validation,
          "expected " + std::to_string(geometry.num_edges()) + " edge couplings");
  GaugeModel gm = build_zq_lgt(geometry, q, face_couplings);
  const int ne = geometry.num_edges();
  gm.model.levels.resize(ne + geometry.num_vertices(), q);
  for (int v = 0; v < geometry.num_vertices(); ++v) gm.vertex_spin[v] = ne + v;
  for (int e = 0; e < ne; ++e) {
    std::vector<int> support{gm.vertex_spin[geometry.tail(e)], gm.edge_spin[e], gm.vertex_spin[geometry.head(e)]};
    if (q == 2) {
      gm.model.terms.push_back(InteractionTerm::parity(std::move(support), edge_couplings[e]));
    } else {
      gm.model.terms.push_back(InteractionTerm::clock(std::move(support), edge_couplings[e], {-1, 1, 1}));
    }
  }
  return gm;
}

GaugeModel vertex_spin_model(const LatticeGeometry& geometry, SpinModel model) {
  require(model.num_spins() == geometry.num_vertices(), ErrorKind::Validation, "one spin per vertex required");
  GaugeModel gm;
  gm.geometry = geometry;
  gm.q = model.levels.empty() ? 2 : model.levels.front();
  gm.vertex_spin.resize(geometry.num_vertices());
  for (int v = 0; v < geometry.num_vertices(); ++v) gm.vertex_spin[v] = v;
  gm.model = std::move(model);
  return gm;
}

Configuration gauge_transform(const GaugeModel& gm, int vertex, const Configuration& config) {
  require(!gm.edge_spin.empty(), ErrorKind::Precondition, "gauge transform needs edge spins");
  require(vertex >= 0 && vertex < gm.geometry.num_vertices(), ErrorKind::Precondition,
          "vertex " + std::to_string(vertex) + " out of range");
  require(static_cast<int>(config.size()) == gm.model.num_spins(), ErrorKind::Precondition,
          "configuration length mismatch");
  Configuration out = config;
  const int q = gm.q;
  for (int e : gm.geometry.edges_of_vertex(vertex)) {
    int& s = out[gm.edge_spin[e]];
    if (gm.geometry.tail(e) == vertex) s = (s + 1) % q;
    if (gm.geometry.head(e) == vertex) s = (s + q - 1) % q;
  }
  if (gm.vertex_spin[vertex] >= 0) {
    int& s = out[gm.vertex_spin[vertex]];
    s = (s + 1) % q;
  }
  return out;
}

GaugeCheck check_gauge_invariance(const GaugeModel& gm, int trials, std::uint64_t seed) {
  require(!gm.edge_spin.empty(), ErrorKind::Precondition, "not a gauge model: no edge spins");
  require(!gm.model.has_infinite(), ErrorKind::Precondition, "gauge check needs finite couplings");
  std::mt19937_64 rng(seed);
  GaugeCheck result;
  if (gm.geometry.num_vertices() == 0) return result;
  std::uniform_int_distribution<int> pick_v(0, gm.geometry.num_vertices() - 1);
  Configuration c(gm.model.num_spins());
  for (int t = 0; t < trials; ++t) {
    for (int i = 0; i < gm.model.num_spins(); ++i) {
      c[i] = std::uniform_int_distribution<int>(0, gm.model.levels[i] - 1)(rng);
    }
    const int v = pick_v(rng);
    if (evaluate_energy(gm.model, c) != evaluate_energy(gm.model, gauge_transform(gm, v, c))) {
      result.invariant = false;
      result.witness = c;
      result.vertex = v;
      return result;
    }
  }
  return result;
}

}  // namespace latmap
