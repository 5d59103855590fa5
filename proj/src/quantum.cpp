// Copyright 2026 The latmap Authors
// SPDX-License-Identifier: Apache-2.0
#include "latmap/quantum.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "latmap/errors.hpp"
#include "latmap/exact.hpp"

namespace latmap {

DenseGf2 build_incidence(const LatticeGeometry& g) {
  DenseGf2 a(g.num_faces(), g.num_edges());
  for (int f = 0; f < g.num_faces(); ++f) {
    for (const auto& fe : g.face_boundary(f)) a.flip(f, fe.edge);
  }
  return a;
}

int stabilizer_rank(const DenseGf2& incidence) { return incidence.rank(); }

StabilizerDescription stabilizer_generators(const DenseGf2& a) {
  StabilizerDescription d;
  d.faces = a.rows();
  d.edges = a.cols();
  d.x_edges = a.independent_columns();
  d.rank = static_cast<int>(d.x_edges.size());
  for (int e : d.x_edges) {
    std::vector<int> faces;
    for (int f = 0; f < a.rows(); ++f) {
      if (a.get(f, e)) faces.push_back(f);
    }
    d.x_generators.push_back(std::move(faces));
  }
  for (const auto& y : a.transpose().null_space()) {
    std::vector<int> faces;
    for (int f = 0; f < a.rows(); ++f) {
      if (y[f]) faces.push_back(f);
    }
    d.z_generators.push_back(std::move(faces));
  }
  return d;
}

namespace {

double log_add(double a, double b) {
  if (a == -INFINITY) return b;
  if (b == -INFINITY) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::fabs(a - b)));
}

}  // namespace

double inner_product_z(const GaugeModel& gm, double beta, const InnerProductOptions& options) {
  require(!gm.edge_spin.empty() && !gm.has_matter(), ErrorKind::Precondition, "inner product form needs a pure LGT");
  require(beta > 0, ErrorKind::Precondition, "beta must be positive");
  const auto& g = gm.geometry;
  const int nf = g.num_faces(), ne = g.num_edges();
  std::vector<double> j(nf);
  for (int f = 0; f < nf; ++f) {
    const auto& c = gm.model.terms[gm.face_term[f]].coupling;
    require(!c.is_infinite(), ErrorKind::Precondition, "inner product form needs finite couplings");
    j[f] = c.value();
  }
  double log_value = -INFINITY;
  if (gm.q == 2) {
    require(nf <= options.max_faces, ErrorKind::CapExceeded, "too many faces for the outcome histogram");
    const DenseGf2 a = build_incidence(g);
    const int rank = a.rank();
    // pattern p occurs iff y.p = 0 for every left null vector y; then 2^{|E|-rank} times
    std::vector<std::uint64_t> checks;
    for (const auto& y : a.transpose().null_space()) {
      std::uint64_t m = 0;
      for (int f = 0; f < nf; ++f) {
        if (y[f]) m |= 1ULL << f;
      }
      checks.push_back(m);
    }
    const double log_count = (ne - rank) * std::numbers::ln2;
    for (std::uint64_t p = 0; p < (1ULL << nf); ++p) {
      bool in_image = true;
      for (auto m : checks) {
        if (__builtin_parityll(p & m)) in_image = false;
      }
      if (!in_image) continue;
      // <alpha_f| = (e^{beta J_f}, e^{-beta J_f})
      double term = log_count;
      for (int f = 0; f < nf; ++f) term += (p >> f & 1) ? -beta * j[f] : beta * j[f];
      log_value = log_add(log_value, term);
    }
  } else {
    const double log2_configs = ne * std::log2(static_cast<double>(gm.q));
    require(log2_configs <= options.max_log2_configs, ErrorKind::CapExceeded, "too many edge configurations");
    std::map<std::vector<int>, double> histogram;
    std::vector<int> s(ne, 0);
    const long total = std::lround(std::pow(gm.q, ne));
    for (long idx = 0; idx < total; ++idx) {
      std::vector<int> pattern(nf);
      for (int f = 0; f < nf; ++f) {
        int sum = 0;
        for (const auto& fe : g.face_boundary(f)) sum += fe.sign * s[gm.edge_spin[fe.edge]];
        pattern[f] = ((sum % gm.q) + gm.q) % gm.q;
      }
      histogram[pattern] += 1.0;
      for (int e = 0; e < ne; ++e) {
        if (++s[e] < gm.q) break;
        s[e] = 0;
      }
    }
    for (const auto& [pattern, count] : histogram) {
      double term = std::log(count);
      for (int f = 0; f < nf; ++f) term += beta * j[f] * std::cos(2 * std::numbers::pi * pattern[f] / gm.q);
      log_value = log_add(log_value, term);
    }
  }
  log_value += gm.model.log2_prefactor * std::numbers::ln2 - beta * gm.model.energy_offset;
  const double reference = partition_function(gm.model, beta).log_z;
  require(std::fabs(log_value - reference) <= options.tol * std::max(1.0, std::fabs(reference)),
          ErrorKind::Verification, "inner product form disagrees with the partition function");
  return log_value;
}

GaugeModel symmetry_orbit(const GaugeModel& gm, const std::vector<int>& edges) {
  require(gm.q == 2, ErrorKind::Precondition, "coupling symmetries are defined for q = 2");
  const auto& g = gm.geometry;
  std::vector<char> flip(g.num_edges(), 0);
  for (int e : edges) {
    require(e >= 0 && e < g.num_edges(), ErrorKind::Precondition, "edge out of range");
    flip[e] ^= 1;
  }
  GaugeModel out = gm;
  for (int f = 0; f < g.num_faces(); ++f) {
    int odd = 0;
    for (const auto& fe : g.face_boundary(f)) odd ^= flip[fe.edge];
    if (!odd) continue;
    auto& c = out.model.terms[gm.face_term[f]].coupling;
    if (!c.is_infinite() && !c.is_zero()) c = Coupling(-c.value());
  }
  return out;
}

}  // namespace latmap
