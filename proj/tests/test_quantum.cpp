// Copyright 2026 The latmap Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "latmap/errors.hpp"
#include "latmap/exact.hpp"
#include "latmap/quantum.hpp"
#include "oracle.hpp"

using namespace latmap;

TEST_CASE("incidence weights") {
  const auto one = build_incidence(LatticeGeometry({1, 1}, Boundary::Open));
  CHECK(one.rows() == 1);
  for (int e = 0; e < 4; ++e) CHECK(one.get(0, e));

  LatticeGeometry sq({2, 2}, Boundary::Open);
  const auto a = build_incidence(sq);
  CHECK(a.rows() == 4);
  CHECK(a.cols() == 12);
  for (int f = 0; f < 4; ++f) {
    int w = 0;
    for (int e = 0; e < 12; ++e) w += a.get(f, e);
    CHECK(w == 4);
  }
  const auto cube = build_incidence(LatticeGeometry({1, 1, 1}, Boundary::Open));
  for (int e = 0; e < 12; ++e) {
    int w = 0;
    for (int f = 0; f < 6; ++f) w += cube.get(f, e);
    CHECK(w == 2);
  }
}

TEST_CASE("ranks of 2D lattices") {
  for (int l = 2; l <= 4; ++l) {
    const auto open = build_incidence(LatticeGeometry({l, l}, Boundary::Open));
    CHECK(stabilizer_rank(open) == l * l);
    const auto per = build_incidence(LatticeGeometry({l, l}, Boundary::Periodic));
    CHECK(stabilizer_rank(per) == l * l - 1);
  }
  // cube: the six faces sum to zero, nothing else
  CHECK(stabilizer_rank(build_incidence(LatticeGeometry({1, 1, 1}, Boundary::Open))) == 5);
}

TEST_CASE("generators") {
  for (auto g : {LatticeGeometry({2, 2}, Boundary::Periodic), LatticeGeometry({1, 1, 1}, Boundary::Open),
                 LatticeGeometry({2, 1}, Boundary::Open)}) {
    const auto a = build_incidence(g);
    const auto d = stabilizer_generators(a);
    CHECK(d.x_generators.size() + d.z_generators.size() == static_cast<std::size_t>(d.faces));
    CHECK(static_cast<int>(d.x_generators.size()) == d.rank);
    for (const auto& z : d.z_generators) {
      // face set whose boundaries cancel
      std::vector<int> cnt(g.num_edges(), 0);
      for (int f : z)
        for (const auto& fe : g.face_boundary(f)) ++cnt[fe.edge];
      for (int c : cnt) CHECK(c % 2 == 0);
    }
  }
}

TEST_CASE("inner product form of Z") {
  LatticeGeometry one({1, 1}, Boundary::Open);
  for (double beta : {0.3, 1.0}) {
    const auto gm = build_zq_lgt(one, 2, std::vector<double>{1.2});
    CHECK(std::fabs(inner_product_z(gm, beta) - std::log(8 * std::exp(1.2 * beta) + 8 * std::exp(-1.2 * beta))) <
          1e-12);
  }
  const auto zero = build_zq_lgt(LatticeGeometry({2, 1}, Boundary::Open), 2, std::vector<double>{0.0, 0.0});
  CHECK(std::fabs(inner_product_z(zero, 0.7) - 7 * std::log(2.0)) < 1e-12);

  // two plaquettes far apart in one lattice factorize
  const auto apart = build_zq_lgt(LatticeGeometry({3, 1}, Boundary::Open), 2, std::vector<double>{0.5, 0.0, -0.9});
  // 10 edges, 3 independent faces: 2^7 * prod 2cosh(beta J)
  const double want = 7 * std::log(2.0) + std::log(2 * std::cosh(0.3)) + std::log(2.0) + std::log(2 * std::cosh(0.54));
  CHECK(std::fabs(inner_product_z(apart, 0.6) - want) < 1e-12);

  for (auto g : {LatticeGeometry({2, 2}, Boundary::Periodic), LatticeGeometry({1, 1, 1}, Boundary::Open),
                 LatticeGeometry({3, 2}, Boundary::Open)}) {
    std::vector<double> j(g.num_faces());
    for (int f = 0; f < g.num_faces(); ++f) j[f] = 0.2 * f - 0.5;
    const auto gm = build_zq_lgt(g, 2, j);
    CHECK(std::fabs(inner_product_z(gm, 0.8) - partition_function(gm.model, 0.8).log_z) < 1e-9);
  }
  const auto z3 = build_zq_lgt(LatticeGeometry({2, 1}, Boundary::Open), 3, std::vector<double>{0.4, 0.9});
  CHECK(std::fabs(inner_product_z(z3, 0.8) - oracle::log_z(z3.model, 0.8)) < 1e-9);
}

TEST_CASE("x-type coupling symmetries") {
  LatticeGeometry g({2, 2}, Boundary::Periodic);
  std::vector<double> j{0.3, -0.8, 1.1, 0.5};
  const auto gm = build_zq_lgt(g, 2, j);
  const double z = partition_function(gm.model, 0.9).log_z;
  for (int e = 0; e < g.num_edges(); ++e) {
    const auto flipped = symmetry_orbit(gm, {e});
    int negated = 0;
    for (int f = 0; f < g.num_faces(); ++f) negated += flipped.model.terms[gm.face_term[f]].coupling.value() != j[f];
    CHECK(negated == 2);
    CHECK(partition_function(flipped.model, 0.9).log_z == doctest::Approx(z).epsilon(1e-14));
    CHECK(symmetry_orbit(flipped, {e}).model == gm.model);
  }
  CHECK(symmetry_orbit(gm, {}).model == gm.model);
}
