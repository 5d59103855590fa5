// Copyright 2026 The latmap Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string>
#include <vector>

namespace latmap {

enum class Boundary { Open, Periodic, Fixed };

const char* to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

struct FaceEdge {
  int edge = -1;
  int sign = 1;  // +1 when the counterclockwise traversal runs tail -> head
};

// Hypercubic region. `extents` counts cells per axis; an extent of 0 removes
// the axis. Open and fixed boundaries carry extent+1 vertices per axis,
// periodic ones carry extent vertices and need extent >= 2.
class LatticeGeometry {
 public:
  LatticeGeometry() = default;
  LatticeGeometry(std::vector<int> extents, Boundary boundary);

  const std::vector<int>& extents() const { return extents_; }
  Boundary boundary() const { return boundary_; }
  int axes() const { return static_cast<int>(extents_.size()); }
  // Number of axes that carry edges.
  int dimension() const;

  int num_vertices() const { return num_vertices_; }
  int num_edges() const { return static_cast<int>(edge_tail_.size()); }
  int num_faces() const { return static_cast<int>(face_edges_.size()); }

  std::vector<int> coords(int vertex) const;
  int vertex(const std::vector<int>& coords) const;  // -1 if outside
  // Neighbor along +axis (wrapping if periodic), -1 if none.
  int step(int vertex, int axis) const;

  // Edge from `vertex` towards +axis, or -1.
  int edge(int vertex, int axis) const { return edge_at_[static_cast<std::size_t>(vertex) * axes() + axis]; }
  int edge_at(const std::vector<int>& coords, int axis) const;
  int tail(int e) const { return edge_tail_[e]; }
  int head(int e) const { return edge_head_[e]; }
  int edge_axis(int e) const { return edge_axis_[e]; }
  int edge_base(int e) const { return edge_base_[e]; }
  bool on_boundary(int e) const { return edge_boundary_[e]; }

  // Face with lower corner `vertex` spanning axes a < b, or -1.
  int face(int vertex, int a, int b) const;
  int face_at(const std::vector<int>& coords, int a, int b) const;
  const std::array<FaceEdge, 4>& face_boundary(int f) const { return face_edges_[f]; }
  int face_base(int f) const { return face_base_[f]; }
  std::pair<int, int> face_plane(int f) const { return face_plane_[f]; }
  std::vector<double> face_center(int f) const;

  const std::vector<int>& faces_of_edge(int e) const { return edge_faces_[e]; }
  const std::vector<int>& edges_of_vertex(int v) const { return vertex_edges_[v]; }

 private:
  int pair_index(int a, int b) const;

  std::vector<int> extents_;
  Boundary boundary_ = Boundary::Open;
  std::vector<int> verts_per_axis_;
  int num_vertices_ = 0;
  std::vector<int> edge_at_;
  std::vector<int> edge_tail_, edge_head_, edge_axis_, edge_base_;
  std::vector<char> edge_boundary_;
  std::vector<int> face_at_;
  std::vector<std::array<FaceEdge, 4>> face_edges_;
  std::vector<int> face_base_;
  std::vector<std::pair<int, int>> face_plane_;
  std::vector<std::vector<int>> edge_faces_;
  std::vector<std::vector<int>> vertex_edges_;
};

}  // namespace latmap
