// Copyright 2026 The latmap Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <map>
#include <set>

#include "latmap/errors.hpp"
#include "latmap/gauge.hpp"
#include "latmap/lattice.hpp"
#include "oracle.hpp"

using namespace latmap;

TEST_CASE("counts of small lattices") {
  LatticeGeometry sq({2, 2}, Boundary::Open);
  CHECK(sq.num_vertices() == 9);
  CHECK(sq.num_edges() == 12);
  CHECK(sq.num_faces() == 4);

  LatticeGeometry cube({1, 1, 1}, Boundary::Open);
  CHECK(cube.num_edges() == 12);
  CHECK(cube.num_faces() == 6);

  LatticeGeometry torus({3, 3}, Boundary::Periodic);
  CHECK(torus.num_edges() == 18);
  CHECK(torus.num_faces() == 9);

  LatticeGeometry slab({2, 3, 1, 1}, Boundary::Open);
  // vertices 3*4*2*2, edges along each axis = cells * other vertices
  CHECK(slab.num_vertices() == 48);
  CHECK(slab.num_edges() == 2 * 16 + 3 * 12 + 1 * 24 + 1 * 24);

  CHECK_THROWS_AS(LatticeGeometry({1, 1}, Boundary::Periodic), Error);
}

TEST_CASE("faces have four distinct edges forming a closed loop") {
  LatticeGeometry g({2, 1, 2, 1}, Boundary::Open);
  for (int f = 0; f < g.num_faces(); ++f) {
    std::set<int> edges;
    std::map<int, int> degree;
    for (const auto& fe : g.face_boundary(f)) {
      edges.insert(fe.edge);
      ++degree[g.tail(fe.edge)];
      ++degree[g.head(fe.edge)];
    }
    CHECK(edges.size() == 4);
    for (auto [v, d] : degree) CHECK(d == 2);
  }
}

TEST_CASE("edge membership counts") {
  // interior edges of a 3D region: 2(d-1) faces
  LatticeGeometry g({3, 3, 3}, Boundary::Open);
  const int d = 3;
  for (int e = 0; e < g.num_edges(); ++e) {
    const auto c = g.coords(g.tail(e));
    const int a = g.edge_axis(e);
    int open_sides = 0;
    for (int b = 0; b < d; ++b) {
      if (b == a) continue;
      open_sides += (c[b] > 0) + (c[b] < g.extents()[b]);
    }
    CHECK(static_cast<int>(g.faces_of_edge(e).size()) == open_sides);
    if (!g.on_boundary(e)) CHECK(g.faces_of_edge(e).size() == 2 * (d - 1));
  }
  LatticeGeometry t({2, 2, 2}, Boundary::Periodic);
  for (int e = 0; e < t.num_edges(); ++e) CHECK(t.faces_of_edge(e).size() == 4);
}

TEST_CASE("orientation convention") {
  LatticeGeometry g({2, 2}, Boundary::Open);
  for (int e = 0; e < g.num_edges(); ++e) CHECK(g.coords(g.tail(e)) < g.coords(g.head(e)));
  const int f = g.face_at({0, 0}, 0, 1);
  const auto& b = g.face_boundary(f);
  CHECK(b[0].edge == g.edge_at({0, 0}, 0));
  CHECK(b[0].sign == 1);
  CHECK(b[1].edge == g.edge_at({1, 0}, 1));
  CHECK(b[2].edge == g.edge_at({0, 1}, 0));
  CHECK(b[2].sign == -1);
  CHECK(b[3].edge == g.edge_at({0, 0}, 1));
  CHECK(b[3].sign == -1);
}

TEST_CASE("lgt builders") {
  LatticeGeometry sq({2, 2}, Boundary::Open);
  auto gm = build_zq_lgt(sq, 2, std::vector<double>(4, 1.0));
  CHECK(gm.model.num_spins() == 12);
  CHECK(gm.model.terms.size() == 4);
  CHECK(gm.model.terms[0].kind == TermKind::ParityIsing);
  auto g3 = build_zq_lgt(sq, 3, std::vector<double>(4, 1.0));
  CHECK(g3.model.terms[0].kind == TermKind::ClockCosine);
  CHECK_THROWS_AS(build_zq_lgt(sq, 1, std::vector<double>(4, 1.0)), Error);
  CHECK_THROWS_AS(build_zq_lgt(sq, 2, std::vector<double>(3, 1.0)), Error);
}

TEST_CASE("gauge transform") {
  LatticeGeometry one({1, 1}, Boundary::Open);
  auto gm = build_zq_lgt(one, 2, std::vector<double>{1.0});
  Configuration zero(4, 0);
  const auto t = gauge_transform(gm, 0, zero);
  int flipped = 0;
  for (int s : t) flipped += s;
  CHECK(flipped == 2);
  CHECK(gauge_transform(gm, 0, t) == zero);

  auto g3 = build_zq_lgt(one, 3, std::vector<double>{1.0});
  Configuration c(4, 2);
  const auto t3 = gauge_transform(g3, 0, c);
  for (int e : one.edges_of_vertex(0)) {
    if (one.tail(e) == 0) CHECK(t3[e] == 0);
  }
  CHECK_THROWS_AS(gauge_transform(gm, 99, zero), Error);
}

TEST_CASE("gauge invariance, exhaustive on small instances") {
  for (int q : {2, 3}) {
    LatticeGeometry g({1, 1, 1}, Boundary::Open);
    std::vector<double> j(g.num_faces());
    for (int f = 0; f < g.num_faces(); ++f) j[f] = 0.3 + 0.1 * f;
    auto gm = build_zq_lgt(g, q, j);
    if (q == 2) {
      oracle::for_each_config(gm.model, [&](const std::vector<int>& s) {
        for (int v = 0; v < g.num_vertices(); ++v) {
          CHECK(evaluate_energy(gm.model, gauge_transform(gm, v, s)) == evaluate_energy(gm.model, s));
        }
      });
    }
    CHECK(check_gauge_invariance(gm, 200, 3).invariant);
  }
}

TEST_CASE("matter fields") {
  LatticeGeometry edge({1}, Boundary::Open);
  auto gm = build_matter_lgt(edge, 2, {}, std::vector<double>{1.0});
  REQUIRE(gm.has_matter());
  // spins: edge 0, vertices 1, 2; term over (tail, edge, head)
  CHECK(evaluate_energy(gm.model, {0, 0, 0}) == -1.0);
  CHECK(evaluate_energy(gm.model, {0, 1, 1}) == -1.0);
  const auto t = gauge_transform(gm, 0, {0, 0, 0});
  CHECK(t == Configuration{1, 1, 0});
  CHECK(evaluate_energy(gm.model, t) == evaluate_energy(gm.model, {0, 0, 0}));

  LatticeGeometry sq({2, 1}, Boundary::Open);
  auto g3 = build_matter_lgt(sq, 3, std::vector<double>(sq.num_faces(), 0.8),
                             std::vector<double>(sq.num_edges(), 0.6));
  CHECK(check_gauge_invariance(g3, 300, 11).invariant);
}

TEST_CASE("vertex spin models are not gauge models") {
  LatticeGeometry g({1}, Boundary::Open);
  SpinModel pair = make_binary_model(2);
  pair.terms.push_back(InteractionTerm::parity({0, 1}, 1.0));
  auto vm = vertex_spin_model(g, pair);
  CHECK_THROWS_AS(check_gauge_invariance(vm, 10, 1), Error);
}
