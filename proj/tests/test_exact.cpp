// Copyright 2026 The latmap Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "latmap/errors.hpp"
#include "latmap/exact.hpp"
#include "latmap/gauge.hpp"
#include "oracle.hpp"

using namespace latmap;

namespace {

SpinModel field(double j) {
  SpinModel m = make_binary_model(1);
  m.terms.push_back(InteractionTerm::parity({0}, j));
  return m;
}

GaugeModel plaquette(double j, int q = 2) {
  return build_zq_lgt(LatticeGeometry({1, 1}, Boundary::Open), q, std::vector<double>{j});
}

double rel(double a, double b) { return std::fabs(a - b) / std::max(1.0, std::fabs(b)); }

}  // namespace

TEST_CASE("closed forms") {
  for (double beta : {0.1, 0.7, 2.0}) {
    CHECK(rel(partition_function(field(0.8), beta).log_z, std::log(2 * std::cosh(0.8 * beta))) < 1e-14);
    const double pz = std::log(8 * std::exp(beta * 1.3) + 8 * std::exp(-beta * 1.3));
    CHECK(rel(partition_function(plaquette(1.3).model, beta).log_z, pz) < 1e-14);
  }
}

TEST_CASE("2x2 periodic Ising against enumeration") {
  // 4 spins on a 2x2 torus: each neighbor pair is linked twice
  std::vector<IsingEdge> edges{{0, 1}, {2, 3}, {0, 2}, {1, 3}};
  const SpinModel m = build_ising_model(4, edges, std::vector<double>(4, 2.0), {});
  CHECK(rel(partition_function(m, 0.5).log_z, oracle::log_z(m, 0.5)) < 1e-13);
}

TEST_CASE("random models against the oracle") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 80; ++trial) {
    const int n = 2 + trial % 11;
    SpinModel m = oracle::random_binary(rng, n, 2 + trial % 7, 4, trial % 3 == 0 ? 0.3 : 0.0);
    m.energy_offset = 0.25 * (trial % 5);
    m.log2_prefactor = trial % 4 - 1;
    for (double beta : {0.2, 1.1}) {
      double expect = 0.0;
      bool frustrated = false;
      try {
        expect = oracle::log_z(m, beta);
      } catch (...) {
        frustrated = true;
      }
      if (!std::isfinite(expect)) frustrated = true;
      if (frustrated) {
        CHECK_THROWS_AS(partition_function(m, beta), FrustratedError);
      } else {
        CHECK(rel(partition_function(m, beta).log_z, expect) < 1e-12);
      }
    }
  }
}

TEST_CASE("q-level models and tables") {
  SpinModel m;
  m.levels = {3, 2, 3};
  m.terms.push_back(InteractionTerm::clock({0, 2}, 0.9, {1, 2}));
  m.terms.push_back(InteractionTerm::general({1, 0}, {0.1, -0.4, 0.3, 0.0, 0.7, -0.2}));
  m.terms.push_back(InteractionTerm::parity({1}, 0.5));
  for (double beta : {0.3, 1.7}) CHECK(rel(partition_function(m, beta).log_z, oracle::log_z(m, beta)) < 1e-13);

  SpinModel unused = m;
  unused.levels.push_back(5);
  CHECK(rel(partition_function(unused, 0.3).log_z, oracle::log_z(m, 0.3) + std::log(5.0)) < 1e-13);
}

TEST_CASE("constraint-only models count solutions") {
  SpinModel m = make_binary_model(6);
  m.terms.push_back(InteractionTerm::parity({0, 1, 2}, Coupling::infinity()));
  m.terms.push_back(InteractionTerm::parity({2, 3}, Coupling::infinity()));
  m.terms.push_back(InteractionTerm::parity({0, 1, 3}, Coupling::infinity()));  // dependent
  m.log2_prefactor = 1;
  const auto r = partition_function(m, 0.4);
  CHECK(rel(r.log_z, std::log(2.0) * (6 - 2 + 1)) < 1e-14);
}

TEST_CASE("worker count does not change results") {
  std::mt19937_64 rng(3);
  SpinModel m = oracle::random_binary(rng, 20, 30, 3);
  EngineOptions one, many;
  one.threads = 1;
  many.threads = 5;
  const double a = partition_function(m, 0.6, one).log_z;
  const double b = partition_function(m, 0.6, many).log_z;
  CHECK(rel(a, b) < 1e-12);
}

TEST_CASE("caps and errors") {
  SpinModel m = make_binary_model(30);
  for (int i = 0; i + 1 < 30; ++i) m.terms.push_back(InteractionTerm::parity({i, i + 1}, 0.1));
  try {
    partition_function(m, 1.0);
    FAIL("expected cap");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CapExceeded);
  }
  CHECK_THROWS_AS(partition_function(field(1.0), 0.0), Error);
  CHECK_THROWS_AS(partition_function(field(1.0), -1.0), Error);

}

TEST_CASE("deleting a zero term is bit-identical") {
  std::mt19937_64 rng(9);
  SpinModel m = oracle::random_binary(rng, 9, 8, 3);
  SpinModel with = m;
  with.terms.push_back(InteractionTerm::parity({0, 4}, 0.0));
  CHECK(partition_function(m, 0.9).log_z == partition_function(with, 0.9).log_z);
}

TEST_CASE("thermodynamics of one spin") {
  const double j = 0.7;
  for (double beta : {0.3, 1.0, 2.5}) {
    const auto u = mean_energy(field(j), beta);
    CHECK(rel(u.value, -j * std::tanh(beta * j)) < 1e-12);
    CHECK(rel(u.finite_difference, u.value) < 1e-7);
    CHECK(rel(free_energy(field(j), beta), -std::log(2 * std::cosh(beta * j)) / beta) < 1e-13);
    const double s = entropy(field(j), beta);
    CHECK(s >= 0.0);
    CHECK(s <= std::log(2.0) + 1e-12);
  }
  CHECK(entropy(field(j), 0.5) > entropy(field(j), 1.0));
  CHECK(entropy(field(j), 1.0) > entropy(field(j), 4.0));
  CHECK(mean_energy(field(0.0), 1.0).value == 0.0);
  CHECK(rel(entropy(field(0.0), 1.0), std::log(2.0)) < 1e-9);
  CHECK(rel(mean_energy(plaquette(1.1).model, 0.8).value, -1.1 * std::tanh(0.88)) < 1e-12);
}

TEST_CASE("magnetization") {
  SpinModel free = make_binary_model(1);
  CHECK(std::fabs(magnetization(free, 0.7, {0}).value) < 1e-15);
  SpinModel pair = build_ising_model(2, std::vector<IsingEdge>{{0, 1}}, std::vector<double>{1.0}, {});
  CHECK(std::fabs(magnetization(pair, 0.9, {0, 1}).value) < 1e-15);
  SpinModel biased = build_ising_model(2, std::vector<IsingEdge>{{0, 1}}, std::vector<double>{1.0}, {});
  biased.terms.push_back(InteractionTerm::parity({0, 1}, 0.3));
  const auto m = magnetization(biased, 0.5, {1});
  const auto o = oracle::averages(biased, 0.5, {{1}});
  CHECK(rel(m.value, o.parity[0]) < 1e-12);
  CHECK(rel(m.finite_difference, m.value) < 1e-7);
  CHECK_THROWS_AS(magnetization(field(1.0), 1.0, {0}), Error);
}

TEST_CASE("wilson loops") {
  const auto gm = plaquette(1.0);
  std::vector<int> loop{0, 1, 2, 3};
  for (double beta : {0.2, 0.9}) {
    const auto w = wilson_loop(gm, beta, loop);
    // oracle: 16 configurations
    double z = 0, wz = 0;
    for (int c = 0; c < 16; ++c) {
      const int p = __builtin_popcount(c) & 1;
      const double weight = std::exp(beta * (p ? -1.0 : 1.0));
      z += weight;
      wz += (p ? -1.0 : 1.0) * weight;
    }
    CHECK(std::fabs(w.ensemble - wz / z) < 1e-12);
    CHECK(std::fabs(w.finite_difference - wz / z) < 1e-9);
    CHECK(std::fabs(w.value - std::tanh(beta)) < 1e-12);
  }
  CHECK(std::fabs(wilson_loop(plaquette(0.0), 1.0, loop).value) < 1e-15);
  CHECK(wilson_loop(gm, 40.0, loop).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(wilson_loop(gm, 1.0, {0, 1, 2}), Error);
}

TEST_CASE("elitzur: single edges average to zero") {
  for (auto dims : std::vector<std::vector<int>>{{1, 1}, {2, 1}, {1, 1, 1}, {2, 2}}) {
    LatticeGeometry g(dims, Boundary::Open);
    std::vector<double> j(g.num_faces());
    for (int f = 0; f < g.num_faces(); ++f) j[f] = 0.4 + 0.3 * f;
    const auto gm = build_zq_lgt(g, 2, j);
    std::vector<SparseVec> edges;
    for (int e = 0; e < g.num_edges(); ++e) edges.push_back({e});
    const auto r = ensemble(gm.model, 0.8, edges);
    for (double p : r.parity_means) CHECK(std::fabs(p) < 1e-12);
  }
}

TEST_CASE("face correlations") {
  LatticeGeometry strip({2, 1}, Boundary::Open);
  const auto gm = build_zq_lgt(strip, 2, std::vector<double>{1.0, 1.0});
  const double g = face_correlation(gm, 0.3, 0, 1);
  std::vector<std::vector<int>> sups;
  for (int f = 0; f < 2; ++f) {
    std::vector<int> s;
    for (const auto& fe : strip.face_boundary(f)) s.push_back(fe.edge);
    sups.push_back(s);
  }
  std::vector<int> both;
  for (int e : sups[0]) {
    if (std::find(sups[1].begin(), sups[1].end(), e) == sups[1].end()) both.push_back(e);
  }
  for (int e : sups[1]) {
    if (std::find(sups[0].begin(), sups[0].end(), e) == sups[0].end()) both.push_back(e);
  }
  const auto o = oracle::averages(gm.model, 0.3, {sups[0], sups[1], both});
  CHECK(std::fabs(g - (o.parity[2] - o.parity[0] * o.parity[1])) < 1e-12);
  CHECK(face_distance(strip, 0, 1) == doctest::Approx(1.0));

  LatticeGeometry two({3, 1}, Boundary::Open);
  const auto gi = build_zq_lgt(two, 2, std::vector<double>{0.7, 0.0, 0.9});
  CHECK(std::fabs(face_correlation(gi, 0.5, 0, 2)) < 1e-13);
  CHECK_THROWS_AS(face_correlation(gi, 0.5, 1, 1), Error);
}

TEST_CASE("prepared models evaluate extra terms") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    SpinModel m = oracle::random_binary(rng, 10, 8, 4, 0.35);
    SpinModel plus = m;
    plus.terms.push_back(InteractionTerm::parity({1, 3, 7}, 0.45));
    plus.terms.push_back(InteractionTerm::parity({9}, -0.2));
    double expect = 0.0;
    try {
      expect = oracle::log_z(plus, 0.6);
    } catch (...) {
      continue;
    }
    if (!std::isfinite(expect)) continue;
    PreparedModel pm(m);
    CHECK(rel(pm.log_z(0.6, {{{1, 3, 7}, 0.45}, {{9}, -0.2}}), expect) < 1e-12);
    const auto e = pm.evaluate(0.6, {{2, 5}});
    const auto o = oracle::averages(m, 0.6, {{2, 5}});
    CHECK(std::fabs(e.parity_means[0] - o.parity[0]) < 1e-12);
  }
}
