// Copyright 2026 The latmap Authors
// SPDX-License-Identifier: Apache-2.0
#include "latmap/lattice.hpp"

#include <algorithm>

#include "latmap/errors.hpp"

namespace latmap {

const char* to_string(Boundary b) {
  switch (b) {
    case Boundary::Open: return "open";
    case Boundary::Periodic: return "periodic";
    case Boundary::Fixed: return "fixed";
  }
  return "open";
}

Boundary boundary_from_string(const std::string& s) {
  if (s == "open") return Boundary::Open;
  if (s == "periodic") return Boundary::Periodic;
  if (s == "fixed") return Boundary::Fixed;
  fail(ErrorKind::Validation, "unknown boundary '" + s + "'");
}

LatticeGeometry::LatticeGeometry(std::vector<int> extents, Boundary boundary)
    : extents_(std::move(extents)), boundary_(boundary) {
  require(!extents_.empty(), ErrorKind::Validation, "geometry needs at least one axis");
  const int d = axes();
  verts_per_axis_.resize(d);
  long long nv = 1;
  for (int a = 0; a < d; ++a) {
    require(extents_[a] >= 0, ErrorKind::Validation, "negative extent");
    if (boundary_ == Boundary::Periodic && extents_[a] > 0) {
      require(extents_[a] >= 2, ErrorKind::Validation, "periodic axes need extent >= 2");
      verts_per_axis_[a] = extents_[a];
    } else {
      verts_per_axis_[a] = extents_[a] + 1;
    }
    nv *= verts_per_axis_[a];
    require(nv < (1LL << 28), ErrorKind::CapExceeded, "geometry too large");
  }
  num_vertices_ = static_cast<int>(nv);

  auto lex_less = [&](int u, int v) { return coords(u) < coords(v); };

  edge_at_.assign(static_cast<std::size_t>(num_vertices_) * d, -1);
  vertex_edges_.assign(num_vertices_, {});
  for (int v = 0; v < num_vertices_; ++v) {
    for (int a = 0; a < d; ++a) {
      const int w = step(v, a);
      if (w < 0) continue;
      const int id = static_cast<int>(edge_tail_.size());
      edge_at_[static_cast<std::size_t>(v) * d + a] = id;
      const bool forward = lex_less(v, w);
      edge_tail_.push_back(forward ? v : w);
      edge_head_.push_back(forward ? w : v);
      edge_axis_.push_back(a);
      edge_base_.push_back(v);
      bool bnd = false;
      if (boundary_ != Boundary::Periodic) {
        auto c = coords(v);
        for (int b = 0; b < d; ++b) {
          if (b == a || extents_[b] == 0) continue;
          if (c[b] == 0 || c[b] == extents_[b]) bnd = true;
        }
      }
      edge_boundary_.push_back(bnd);
      vertex_edges_[v].push_back(id);
      vertex_edges_[w].push_back(id);
    }
  }

  const int npairs = d * (d - 1) / 2;
  face_at_.assign(static_cast<std::size_t>(num_vertices_) * std::max(npairs, 1), -1);
  edge_faces_.assign(edge_tail_.size(), {});
  for (int v = 0; v < num_vertices_; ++v) {
    for (int a = 0; a < d; ++a) {
      for (int b = a + 1; b < d; ++b) {
        const int va = step(v, a), vb = step(v, b);
        if (va < 0 || vb < 0) continue;
        const int e0 = edge(v, a), e1 = edge(va, b), e2 = edge(vb, a), e3 = edge(v, b);
        if (e0 < 0 || e1 < 0 || e2 < 0 || e3 < 0) continue;
        const int vab = step(va, b);
        // counterclockwise: v -> v+a -> v+a+b -> v+b -> v
        std::array<FaceEdge, 4> fe{{{e0, edge_tail_[e0] == v ? 1 : -1},
                                    {e1, edge_tail_[e1] == va ? 1 : -1},
                                    {e2, edge_tail_[e2] == vab ? 1 : -1},
                                    {e3, edge_tail_[e3] == vb ? 1 : -1}}};
        const int id = static_cast<int>(face_edges_.size());
        face_at_[static_cast<std::size_t>(v) * npairs + pair_index(a, b)] = id;
        face_edges_.push_back(fe);
        face_base_.push_back(v);
        face_plane_.push_back({a, b});
        for (auto& x : fe) edge_faces_[x.edge].push_back(id);
      }
    }
  }
}

int LatticeGeometry::dimension() const {
  return static_cast<int>(std::count_if(extents_.begin(), extents_.end(), [](int e) { return e > 0; }));
}

std::vector<int> LatticeGeometry::coords(int vertex) const {
  std::vector<int> c(axes());
  for (int a = 0; a < axes(); ++a) {
    c[a] = vertex % verts_per_axis_[a];
    vertex /= verts_per_axis_[a];
  }
  return c;
}

int LatticeGeometry::vertex(const std::vector<int>& c) const {
  if (static_cast<int>(c.size()) != axes()) return -1;
  int v = 0, stride = 1;
  for (int a = 0; a < axes(); ++a) {
    int x = c[a];
    if (boundary_ == Boundary::Periodic && extents_[a] > 0) x = ((x % verts_per_axis_[a]) + verts_per_axis_[a]) % verts_per_axis_[a];
    if (x < 0 || x >= verts_per_axis_[a]) return -1;
    v += x * stride;
    stride *= verts_per_axis_[a];
  }
  return v;
}

int LatticeGeometry::step(int v, int axis) const {
  if (extents_[axis] == 0) return -1;
  auto c = coords(v);
  c[axis] += 1;
  if (boundary_ != Boundary::Periodic && c[axis] > extents_[axis]) return -1;
  return vertex(c);
}

int LatticeGeometry::edge_at(const std::vector<int>& c, int axis) const {
  const int v = vertex(c);
  return v < 0 ? -1 : edge(v, axis);
}

int LatticeGeometry::pair_index(int a, int b) const {
  // index of (a,b), a<b, in row-major order over the upper triangle
  const int d = axes();
  return a * d - a * (a + 1) / 2 + (b - a - 1);
}

int LatticeGeometry::face(int vertex, int a, int b) const {
  if (a == b || vertex < 0) return -1;
  if (a > b) std::swap(a, b);
  const int npairs = axes() * (axes() - 1) / 2;
  return face_at_[static_cast<std::size_t>(vertex) * npairs + pair_index(a, b)];
}

int LatticeGeometry::face_at(const std::vector<int>& c, int a, int b) const { return face(vertex(c), a, b); }

std::vector<double> LatticeGeometry::face_center(int f) const {
  auto c = coords(face_base_[f]);
  std::vector<double> out(c.begin(), c.end());
  out[face_plane_[f].first] += 0.5;
  out[face_plane_[f].second] += 0.5;
  return out;
}

}  // namespace latmap
