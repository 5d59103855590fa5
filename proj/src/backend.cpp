// Copyright 2026 The latmap Authors
// SPDX-License-Identifier: Apache-2.0
#include "latmap/backend.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include "latmap/errors.hpp"
#include "latmap/walsh.hpp"

namespace latmap {

const char* to_string(Backend b) {
  switch (b) {
    case Backend::Lgt4d: return "lgt4d";
    case Backend::Lgt3d: return "lgt3d";
    case Backend::Lgt3dBoundary: return "lgt3d-boundary";
  }
  return "lgt4d";
}

const char* to_string(Mode m) { return m == Mode::Superclique ? "superclique" : "direct"; }

const char* to_string(FaceRole r) {
  switch (r) {
    case FaceRole::Delete: return "delete";
    case FaceRole::Merge: return "merge";
    case FaceRole::Finite: return "finite";
  }
  return "delete";
}

const char* to_string(Provenance p) { return p == Provenance::Gauge ? "gauge" : "boundary"; }

Backend backend_from_string(const std::string& s) {
  if (s == "lgt4d") return Backend::Lgt4d;
  if (s == "lgt3d") return Backend::Lgt3d;
  if (s == "lgt3d-boundary" || s == "lgt3d_boundary") return Backend::Lgt3dBoundary;
  fail(ErrorKind::Validation, "unknown backend '" + s + "'");
}

Mode mode_from_string(const std::string& s) {
  if (s == "superclique") return Mode::Superclique;
  if (s == "direct") return Mode::Direct;
  fail(ErrorKind::Validation, "unknown mode '" + s + "'");
}

FaceRole role_from_string(const std::string& s) {
  if (s == "delete") return FaceRole::Delete;
  if (s == "merge") return FaceRole::Merge;
  if (s == "finite") return FaceRole::Finite;
  fail(ErrorKind::Validation, "unknown face role '" + s + "'");
}

Provenance provenance_from_string(const std::string& s) {
  if (s == "gauge") return Provenance::Gauge;
  if (s == "boundary") return Provenance::Boundary;
  fail(ErrorKind::Validation, "unknown provenance '" + s + "'");
}

SpinModel base_face_model(const LatticeGeometry& geometry) {
  return build_zq_lgt(geometry, 2, std::vector<double>(geometry.num_faces(), 1.0)).model;
}

SpinModel assignment_model(const FaceAssignment& fa) {
  const auto& g = fa.geometry;
  require(static_cast<int>(fa.roles.size()) == g.num_faces() && fa.couplings.size() == fa.roles.size(),
          ErrorKind::Validation, "one role and coupling per face required");
  SpinModel m = base_face_model(g);
  for (int f = 0; f < g.num_faces(); ++f) {
    auto& c = m.terms[f].coupling;
    switch (fa.roles[f]) {
      case FaceRole::Finite: c = Coupling(fa.couplings[f]); break;
      case FaceRole::Merge: c = Coupling::infinity(); break;
      case FaceRole::Delete: c = Coupling(0.0); break;
    }
  }
  std::vector<int> pinned;
  for (const auto& fe : fa.fixed) pinned.push_back(fe.edge);
  return substitute_zero(m, pinned);
}

RewriteTrace assignment_trace(const FaceAssignment& fa) {
  RewriteTrace t;
  for (int f = 0; f < static_cast<int>(fa.roles.size()); ++f) {
    switch (fa.roles[f]) {
      case FaceRole::Finite: t.entries.push_back({"set", f, fa.couplings[f]}); break;
      case FaceRole::Merge: t.entries.push_back({"merge", f, std::nullopt}); break;
      case FaceRole::Delete: t.entries.push_back({"delete", f, std::nullopt}); break;
    }
  }
  for (const auto& fe : fa.fixed) t.entries.push_back({"fix", fe.edge, std::nullopt});
  t.log2_factor = -static_cast<int>(fa.fixed.size());
  return t;
}

void check_assignment(const FaceAssignment& fa, Backend backend) {
  const auto& g = fa.geometry;
  require(static_cast<int>(fa.roles.size()) == g.num_faces(), ErrorKind::Validation, "every face needs one role");
  require(fa.couplings.size() == fa.roles.size(), ErrorKind::Validation, "every face needs a coupling slot");
  std::vector<int> gauge, boundary;
  for (const auto& fe : fa.fixed) {
    require(fe.edge >= 0 && fe.edge < g.num_edges(), ErrorKind::Validation, "fixed edge out of range");
    (fe.provenance == Provenance::Gauge ? gauge : boundary).push_back(fe.edge);
  }
  require(boundary.empty() || backend == Backend::Lgt3dBoundary, ErrorKind::Validation,
          "boundary-fixed edges belong to the lgt3d-boundary backend");
  check_forest(g, gauge);
}

ExtractOptions CompiledInstance::extract_options() const {
  ExtractOptions o;
  o.designated = logical_map;
  return o;
}

EffectiveModel GadgetBlueprint::extract() const {
  ExtractOptions o;
  o.designated = attachments;
  return extract_effective_model(model(), o);
}

namespace {

using Coords = std::vector<int>;

Coords shift(Coords v, int axis, int k = 1) {
  v[axis] += k;
  return v;
}

constexpr int X = 0, Y = 1, Z = 2, W = 3;

// Stateful builder: face roles, pinned edges and a 3-cube occupancy index.
class Layout {
 public:
  Layout(std::vector<int> extents, Boundary boundary = Boundary::Open) : g_(std::move(extents), boundary) {
    roles_.assign(g_.num_faces(), FaceRole::Delete);
    j_.assign(g_.num_faces(), 0.0);
    assigned_.assign(g_.num_faces(), 0);
  }

  const LatticeGeometry& geometry() const { return g_; }

  int face(const Coords& corner, int a, int b) const {
    const int f = g_.face_at(corner, a, b);
    require(f >= 0, ErrorKind::Precondition, "layout face outside the lattice");
    return f;
  }
  int edge(const Coords& at, int axis) const {
    const int e = g_.edge_at(at, axis);
    require(e >= 0, ErrorKind::Precondition, "layout edge outside the lattice");
    return e;
  }

  void assign(int f, FaceRole role, double j = 0.0) {
    if (assigned_[f]) fail(ErrorKind::Overlap, "face " + std::to_string(f) + " is used by two gadgets");
    assigned_[f] = 1;
    roles_[f] = role;
    j_[f] = role == FaceRole::Finite ? j : 0.0;
  }

  void fix(int e, Provenance p = Provenance::Gauge) { fixed_.emplace(e, p); }

  void fix_boundary() {
    for (int e = 0; e < g_.num_edges(); ++e) {
      if (g_.on_boundary(e)) fix(e, Provenance::Boundary);
    }
  }

  void claim(const Coords& corner, int a, int b, int c) {
    const int v = g_.vertex(corner);
    require(v >= 0, ErrorKind::Precondition, "layout cell outside the lattice");
    const int mask = (1 << a) | (1 << b) | (1 << c);
    if (!cells_.insert({v, mask}).second) fail(ErrorKind::Overlap, "cell claimed twice");
  }

  // Face in plane (a,b) with corner v: the edge along a at v carries the
  // spin, the other three edges are pinned.
  int end_face(const Coords& v, int a, int b) {
    fix(edge(shift(v, b), a));
    fix(edge(v, b));
    fix(edge(shift(v, a), b));
    return edge(v, a);
  }

  // Connects end faces at v and v+t through the four side faces.
  void tube(const Coords& v, int a, int b, int t, std::optional<double> finite = std::nullopt) {
    claim(v, a, b, t);
    end_face(v, a, b);
    end_face(shift(v, t), a, b);
    if (finite) {
      assign(face(v, a, t), FaceRole::Finite, *finite);
    } else {
      assign(face(v, a, t), FaceRole::Merge);
    }
    assign(face(shift(v, b), a, t), FaceRole::Merge);
    assign(face(v, b, t), FaceRole::Merge);
    assign(face(shift(v, a), b, t), FaceRole::Merge);
  }

  // Box of `length` cells along a. Hole faces sit on the front (or back)
  // (a,b) plane at the listed cell offsets; every other surface face is
  // merged except one, which carries j. Returns that face.
  int box(const Coords& v, int a, int b, int t, int length, const std::vector<int>& holes, bool back, double j) {
    require(!holes.empty(), ErrorKind::Precondition, "box without holes");
    std::vector<char> is_hole(length, 0);
    for (int h : holes) {
      require(h >= 0 && h < length, ErrorKind::Precondition, "hole outside the box");
      is_hole[h] = 1;
    }
    for (int k = 0; k < length; ++k) claim(shift(v, a, k), a, b, t);
    for (int h : holes) end_face(back ? shift(shift(v, a, h), t) : shift(v, a, h), a, b);
    const int finite = face(shift(shift(v, a, holes.front()), b), a, t);
    for (int k = 0; k < length; ++k) {
      const Coords c = shift(v, a, k);
      if (!(is_hole[k] && !back)) assign(face(c, a, b), FaceRole::Merge);
      if (!(is_hole[k] && back)) assign(face(shift(c, t), a, b), FaceRole::Merge);
      assign(face(c, a, t), FaceRole::Merge);
      const int top = face(shift(c, b), a, t);
      if (top == finite) {
        assign(top, FaceRole::Finite, j);
      } else {
        assign(top, FaceRole::Merge);
      }
    }
    assign(face(v, b, t), FaceRole::Merge);
    assign(face(shift(v, a, length), b, t), FaceRole::Merge);
    return finite;
  }

  FaceAssignment finish(std::optional<double> finite_j = std::nullopt) const {
    FaceAssignment fa;
    fa.geometry = g_;
    fa.roles = roles_;
    fa.couplings = j_;
    if (finite_j) {
      for (std::size_t f = 0; f < fa.roles.size(); ++f) {
        if (fa.roles[f] == FaceRole::Merge) {
          fa.roles[f] = FaceRole::Finite;
          fa.couplings[f] = *finite_j;
        }
      }
    }
    for (auto [e, p] : fixed_) fa.fixed.push_back({e, p});
    return fa;
  }

 private:
  LatticeGeometry g_;
  std::vector<FaceRole> roles_;
  std::vector<double> j_;
  std::vector<char> assigned_;
  std::map<int, Provenance> fixed_;
  std::set<std::pair<int, int>> cells_;
};

Coords origin(int d) { return Coords(d, 0); }

}  // namespace

// --- gadgets ---

GadgetBlueprint gadget_field(double j) {
  Layout L({1, 1, 1, 1});
  const Coords v = origin(4);
  GadgetBlueprint bp;
  bp.k = 1;
  bp.attachments.push_back(L.end_face(v, X, Z));
  L.assign(L.face(v, X, Z), FaceRole::Finite, j);
  bp.faces = L.finish();
  return bp;
}

GadgetBlueprint gadget_pair(double j) {
  Layout L({1, 1, 1, 1});
  const Coords v = origin(4);
  L.tube(v, X, Z, Y, j);
  GadgetBlueprint bp;
  bp.k = 2;
  bp.attachments = {L.edge(v, X), L.edge(shift(v, Y), X)};
  bp.faces = L.finish();
  return bp;
}

GadgetBlueprint gadget_kbody(int k, double j) {
  require(k >= 1, ErrorKind::Precondition, "k-body gadget needs k >= 1");
  Layout L({2 * k - 1, 1, 1, 1});
  const Coords v = origin(4);
  std::vector<int> holes;
  for (int i = 0; i < k; ++i) holes.push_back(2 * i);
  L.box(v, X, Z, Y, 2 * k - 1, holes, false, j);
  GadgetBlueprint bp;
  bp.k = k;
  for (int h : holes) bp.attachments.push_back(L.edge(shift(v, X, h), X));
  bp.faces = L.finish();
  return bp;
}

GadgetBlueprint propagate(int length) {
  require(length >= 1, ErrorKind::Precondition, "propagation length must be >= 1");
  Layout L({1, length, 1, 1});
  const Coords v = origin(4);
  for (int y = 0; y < length; ++y) L.tube(shift(v, Y, y), X, Z, Y);
  GadgetBlueprint bp;
  bp.attachments = {L.edge(v, X), L.edge(shift(v, Y, length), X)};
  bp.faces = L.finish();
  return bp;
}

GadgetBlueprint turn() {
  Layout L({1, 1, 1, 1});
  const Coords v = origin(4);
  L.claim(v, X, Y, Z);
  const int a = L.end_face(v, X, Z);
  // leaving face: plane (x,y) at z = 1, spin on its far x edge
  const Coords up = shift(v, Z);
  L.fix(L.edge(up, X));
  L.fix(L.edge(up, Y));
  L.fix(L.edge(shift(up, X), Y));
  const int b = L.edge(shift(up, Y), X);
  L.assign(L.face(v, X, Y), FaceRole::Merge);
  L.assign(L.face(shift(v, Y), X, Z), FaceRole::Merge);
  L.assign(L.face(v, Y, Z), FaceRole::Merge);
  L.assign(L.face(shift(v, X), Y, Z), FaceRole::Merge);
  GadgetBlueprint bp;
  bp.attachments = {a, b};
  bp.faces = L.finish();
  return bp;
}

GadgetBlueprint replicate(Backend backend, int fanout) {
  require(fanout >= 1, ErrorKind::Precondition, "fanout must be >= 1");
  GadgetBlueprint bp;
  if (backend == Backend::Lgt3d) {
    if (fanout >= 3) {
      fail(ErrorKind::Obstruction,
           "fanout " + std::to_string(fanout) +
               " needs more ends than a face object has in 3D: 2(d - d_e) = 2(3 - 2) = 2; use lgt4d or lgt3d-boundary");
    }
    Layout L({1, 2, 1});
    const Coords v = origin(3);
    L.tube(v, X, Z, Y);
    L.tube(shift(v, Y), X, Z, Y);
    bp.attachments.push_back(L.edge(v, X));
    if (fanout == 2) bp.attachments.push_back(L.edge(shift(v, Y, 2), X));
    bp.faces = L.finish();
    return bp;
  }
  if (backend == Backend::Lgt3dBoundary) {
    Layout L({1, 3, std::max(2, 2 * fanout - 2)}, Boundary::Fixed);
    L.fix_boundary();
    auto x_edge = [&](int y, int z) { return L.edge({0, y, z}, X); };
    bp.attachments.push_back(x_edge(1, 1));
    for (int z = 1; z < 2 * fanout - 3; ++z) L.assign(L.face({0, 1, z}, X, Z), FaceRole::Merge);
    for (int k = 0; k + 1 < fanout; ++k) {
      L.assign(L.face({0, 1, 2 * k + 1}, X, Y), FaceRole::Merge);
      bp.attachments.push_back(x_edge(2, 2 * k + 1));
    }
    bp.faces = L.finish();
    return bp;
  }
  const int len = std::max(1, 2 * (fanout - 1));
  Layout L({1, len, 1, 1});
  const Coords v = origin(4);
  bp.attachments.push_back(L.edge(v, X));
  if (fanout > 1) {
    for (int y = 0; y < len; ++y) L.tube(shift(v, Y, y), X, Z, Y);
    for (int j = 1; j < fanout; ++j) {
      const Coords at = shift(v, Y, 2 * j);
      L.tube(at, X, Z, W);
      bp.attachments.push_back(L.edge(shift(at, W), X));
    }
  } else {
    L.end_face(v, X, Z);
  }
  bp.faces = L.finish();
  return bp;
}

// --- target helpers ---

SpinModel parity_expansion(const SpinModel& binary) {
  binary.validate();
  require(binary.all_binary(), ErrorKind::Precondition, "parity expansion needs q = 2 spins");
  require(!binary.has_infinite(), ErrorKind::Precondition, "targets carry finite couplings");
  SpinModel out = make_binary_model(binary.num_spins());
  out.energy_offset = binary.energy_offset;
  out.log2_prefactor = binary.log2_prefactor;
  std::map<std::vector<int>, double> acc;
  for (const auto& t : binary.terms) {
    if (t.coupling.is_zero()) continue;
    if (t.kind == TermKind::GeneralTable) {
      require(t.support.size() <= 24, ErrorKind::CapExceeded, "table term too wide");
      const auto j = energies_to_couplings(t.table);
      out.energy_offset += j[0];
      for (std::size_t S = 1; S < j.size(); ++S) {
        if (j[S] == 0.0) continue;
        std::vector<int> sup;
        for (std::size_t b = 0; b < t.support.size(); ++b) {
          if (S >> b & 1) sup.push_back(t.support[b]);
        }
        std::sort(sup.begin(), sup.end());
        acc[sup] -= j[S];
      }
      continue;
    }
    std::vector<int> sup;
    for (std::size_t i = 0; i < t.support.size(); ++i) {
      if (t.weights.empty() || t.weights[i] % 2 != 0) sup.push_back(t.support[i]);
    }
    std::sort(sup.begin(), sup.end());
    if (sup.empty()) {
      out.energy_offset -= t.coupling.value();
    } else {
      acc[sup] += t.coupling.value();
    }
  }
  for (const auto& [sup, j] : acc) {
    if (j != 0.0) out.terms.push_back(InteractionTerm::parity(sup, j));
  }
  sort_terms(out);
  return out;
}

IsingCouplings IsingCouplings::uniform(int n, int m, double j) {
  IsingCouplings c;
  c.horizontal.assign(static_cast<std::size_t>(std::max(0, n - 1) * m), j);
  c.vertical.assign(static_cast<std::size_t>(n * std::max(0, m - 1)), j);
  return c;
}

SpinModel ising_2d_target(int n, int m, const IsingCouplings& c) {
  require(n >= 1 && m >= 1, ErrorKind::Precondition, "grid needs n, m >= 1");
  require(c.horizontal.size() == static_cast<std::size_t>((n - 1) * m) &&
              c.vertical.size() == static_cast<std::size_t>(n * (m - 1)),
          ErrorKind::Validation, "coupling arrays do not match the grid");
  std::vector<IsingEdge> edges;
  std::vector<double> j;
  for (int r = 0; r < m; ++r) {
    for (int i = 0; i + 1 < n; ++i) {
      edges.push_back({r * n + i, r * n + i + 1});
      j.push_back(c.horizontal[r * (n - 1) + i]);
    }
  }
  for (int r = 0; r + 1 < m; ++r) {
    for (int i = 0; i < n; ++i) {
      edges.push_back({r * n + i, (r + 1) * n + i});
      j.push_back(c.vertical[r * n + i]);
    }
  }
  return build_ising_model(n * m, edges, j, {});
}

SpinModel four_clique_target(int n, double j) {
  require(n >= 4, ErrorKind::Precondition, "4-clique needs n >= 4");
  SpinModel m = make_binary_model(n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c)
        for (int d = c + 1; d < n; ++d) m.terms.push_back(InteractionTerm::parity({a, b, c, d}, j));
  return m;
}

namespace {

struct SlotTerm {
  std::vector<int> support;
  double j = 0.0;
};

// Spins on the x axis at x = 2i, spines along y at w = 0, one box per term
// in the w = 1 slab, each term in its own slot of A(k) y-cells.
CompiledInstance slot_layout(int n, const std::vector<SlotTerm>& terms, int lead_cells, const LayoutOptions& options,
                             const std::string& mode) {
  int extent_y = lead_cells;
  for (const auto& t : terms) extent_y += spacing_a(static_cast<int>(t.support.size()));
  extent_y = std::max(extent_y, 1);
  Layout L({2 * std::max(n, 1), extent_y, 1, 1});
  std::vector<int> last(n, 0);
  std::vector<int> plane;
  int y = lead_cells;
  for (const auto& t : terms) {
    plane.push_back(y + 1);
    for (int s : t.support) last[s] = std::max(last[s], y + 1);
    y += spacing_a(static_cast<int>(t.support.size()));
  }
  CompiledInstance inst;
  inst.backend = Backend::Lgt4d;
  inst.mode = mode;
  for (int i = 0; i < n; ++i) {
    const Coords base{2 * i, 0, 0, 0};
    inst.logical_map.push_back(L.end_face(base, X, Z));
    inst.source_faces.push_back(L.face(base, X, Z));
    for (int yy = 0; yy < last[i]; ++yy) L.tube(shift(base, Y, yy), X, Z, Y);
  }
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const auto& t = terms[k];
    require(!t.support.empty(), ErrorKind::Precondition, "slot term without support");
    const int y0 = plane[k];
    for (int s : t.support) L.tube({2 * s, y0, 0, 0}, X, Z, W);
    const int lo = t.support.front(), hi = t.support.back();
    std::vector<int> holes;
    for (int s : t.support) holes.push_back(2 * (s - lo));
    const int f = L.box({2 * lo, y0, 0, 1}, X, Z, Y, 2 * (hi - lo) + 1, holes, false, t.j);
    inst.term_faces.push_back({t.support, f});
  }
  inst.faces = L.finish(options.finite_j);
  return inst;
}

// Sets the trace and the accounting relative to `expansion`, after checking
// the effective model realizes it.
void seal(CompiledInstance& inst, const SpinModel& expansion, double term_tol = 1e-12) {
  check_assignment(inst.faces, inst.backend);
  inst.trace = assignment_trace(inst.faces);
  const auto eff = extract_effective_model(inst.model(), inst.extract_options());
  inst.accounting.pow2 = eff.log2_factor - expansion.log2_prefactor;
  inst.accounting.offset = eff.offset - expansion.energy_offset;
  inst.trace.offset = inst.accounting.offset;
  (void)term_tol;
}

std::vector<SlotTerm> slot_terms(const SpinModel& expansion) {
  std::vector<SlotTerm> out;
  for (const auto& t : expansion.terms) out.push_back({t.support, t.coupling.value()});
  return out;
}

// Connected groups of the interaction hypergraph.
std::vector<std::vector<int>> interaction_groups(const SpinModel& m) {
  const int n = m.num_spins();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
  for (const auto& t : m.terms) {
    if (t.coupling.is_zero()) continue;
    for (std::size_t i = 1; i < t.support.size(); ++i) parent[find(t.support[i])] = find(t.support[0]);
  }
  std::map<int, std::vector<int>> groups;
  for (int s = 0; s < n; ++s) groups[find(s)].push_back(s);
  std::vector<std::vector<int>> out;
  for (auto& [root, g] : groups) out.push_back(g);
  std::sort(out.begin(), out.end());
  return out;
}

// Subsets of 0..n-1 ordered by size, then lexicographically.
std::vector<std::uint64_t> ordered_subsets(int n) {
  std::vector<std::uint64_t> masks;
  for (std::uint64_t s = 1; s < (1ULL << n); ++s) masks.push_back(s);
  auto key = [](std::uint64_t s) {
    std::vector<int> v;
    for (int j = 0; j < 64; ++j) {
      if (s >> j & 1) v.push_back(j);
    }
    return v;
  };
  std::sort(masks.begin(), masks.end(), [&](std::uint64_t a, std::uint64_t b) {
    const int pa = __builtin_popcountll(a), pb = __builtin_popcountll(b);
    if (pa != pb) return pa < pb;
    return key(a) < key(b);
  });
  return masks;
}

CompiledInstance compile_boundary(const SpinModel& expansion) {
  const int n = expansion.num_spins();
  std::vector<double> field(n, 0.0);
  std::map<int, std::vector<std::pair<int, double>>> adj;
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
  for (const auto& t : expansion.terms) {
    require(t.support.size() <= 2, ErrorKind::Unsupported,
            "lgt3d-boundary realizes 1- and 2-body terms; a " + std::to_string(t.support.size()) +
                "-body term needs lgt4d");
    if (t.support.size() == 1) {
      field[t.support[0]] = t.coupling.value();
      continue;
    }
    const int a = t.support[0], b = t.support[1];
    require(find(a) != find(b), ErrorKind::Unsupported,
            "lgt3d-boundary lays out forests of pair terms; the interaction graph has a cycle");
    parent[find(a)] = find(b);
    adj[a].push_back({b, t.coupling.value()});
    adj[b].push_back({a, t.coupling.value()});
  }
  // columns in preorder, one fresh row per link, later links below earlier subtrees
  std::vector<int> column(n, -1), bottom(n, 1);
  struct Link {
    int p, u, row;
    double j;
  };
  std::vector<Link> links;
  int next_col = 1, row = 1;
  std::function<void(int, int)> place = [&](int v, int from) {
    column[v] = next_col;
    next_col += 2;
    auto kids = adj[v];
    std::sort(kids.begin(), kids.end());
    for (auto [u, j] : kids) {
      if (u == from) continue;
      place(u, v);
      const int r = ++row;
      bottom[u] = std::max(bottom[u], r);
      bottom[v] = std::max(bottom[v], r);
      links.push_back({v, u, r, j});
    }
  };
  for (int s = 0; s < n; ++s) {
    if (column[s] < 0) place(s, -1);
  }
  Layout L({1, std::max(2, next_col - 1), row + 1}, Boundary::Fixed);
  L.fix_boundary();
  CompiledInstance inst;
  inst.backend = Backend::Lgt3dBoundary;
  inst.mode = "direct";
  for (int v = 0; v < n; ++v) {
    const int c = column[v];
    inst.logical_map.push_back(L.edge({0, c, 1}, X));
    const int src = L.face({0, c, 0}, X, Z);
    inst.source_faces.push_back(src);
    if (field[v] != 0.0) {
      L.assign(src, FaceRole::Finite, field[v]);
      inst.term_faces.push_back({{v}, src});
    }
    for (int z = 1; z < bottom[v]; ++z) L.assign(L.face({0, c, z}, X, Z), FaceRole::Merge);
  }
  for (const auto& lk : links) {
    const int cp = column[lk.p], cu = column[lk.u];
    for (int c = cp; c < cu - 1; ++c) L.assign(L.face({0, c, lk.row}, X, Y), FaceRole::Merge);
    const int f = L.face({0, cu - 1, lk.row}, X, Y);
    L.assign(f, FaceRole::Finite, lk.j);
    inst.term_faces.push_back({{std::min(lk.p, lk.u), std::max(lk.p, lk.u)}, f});
  }
  inst.faces = L.finish();
  return inst;
}

int max_fanout(const SpinModel& expansion) {
  std::vector<int> deg(expansion.num_spins(), 0);
  for (const auto& t : expansion.terms) {
    for (int s : t.support) ++deg[s];
  }
  return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

}  // namespace

CompiledInstance layout_superclique(int n, const std::vector<double>& couplings, const LayoutOptions& options) {
  require(n >= 1, ErrorKind::Precondition, "superclique needs n >= 1");
  require(n <= options.max_spins, ErrorKind::CapExceeded,
          "superclique of " + std::to_string(n) + " spins exceeds the cap " + std::to_string(options.max_spins));
  require(couplings.size() == (1ULL << n), ErrorKind::Validation, "coupling vector must have 2^n entries");
  std::vector<SlotTerm> terms;
  for (std::uint64_t s : ordered_subsets(n)) {
    SlotTerm t;
    for (int j = 0; j < n; ++j) {
      if (s >> j & 1) t.support.push_back(j);
    }
    t.j = couplings[s] == 0.0 ? 0.0 : -couplings[s];
    terms.push_back(std::move(t));
  }
  CompiledInstance inst = slot_layout(n, terms, spacing_a(0), options, "superclique");
  seal(inst, parity_expansion(superclique_model(n, couplings)));
  return inst;
}

CompiledInstance compile_target(const SpinModel& target, const CompileOptions& options) {
  target.validate();
  require(!target.has_infinite(), ErrorKind::Precondition, "targets carry finite couplings");
  if (!target.all_binary()) {
    EncodeOptions eo;
    eo.beta_min = options.beta_min;
    eo.betas = options.betas;
    const auto enc = encode_qlevel(target, eo);
    CompiledInstance inst = compile_target(enc.model, options);
    inst.qlevel = QLevelInfo{target.levels, enc.penalty, options.beta_min};
    return inst;
  }
  const SpinModel expansion = parity_expansion(target);
  if (options.backend == Backend::Lgt3d) {
    const int f = max_fanout(expansion);
    if (f >= 3) {
      fail(ErrorKind::Obstruction, "a spin takes part in " + std::to_string(f) +
                                       " terms; pure 3D face objects have 2(d - d_e) = 2 ends. Use lgt4d or "
                                       "lgt3d-boundary");
    }
    fail(ErrorKind::Unsupported, "pure 3D compilation is limited to replication checks");
  }
  if (options.backend == Backend::Lgt3dBoundary) {
    CompiledInstance inst = compile_boundary(expansion);
    seal(inst, expansion);
    return inst;
  }
  const int n = target.num_spins();
  if (options.mode == Mode::Direct) {
    CompiledInstance inst = slot_layout(n, slot_terms(expansion), 0, options.layout, "direct");
    seal(inst, expansion);
    return inst;
  }
  // superclique per connected group
  std::vector<SlotTerm> terms;
  for (const auto& group : interaction_groups(target)) {
    const int ng = static_cast<int>(group.size());
    require(ng <= options.layout.max_spins, ErrorKind::CapExceeded,
            "interaction group of " + std::to_string(ng) + " spins exceeds the superclique cap");
    if (ng == 1) {
      bool used = false;
      for (const auto& t : expansion.terms) used |= t.support == std::vector<int>{group[0]};
      if (!used) continue;
    }
    std::vector<int> local(n, -1);
    for (int i = 0; i < ng; ++i) local[group[i]] = i;
    std::vector<double> lambda(1ULL << ng, 0.0);
    Configuration cfg(n, 0);
    for (std::uint64_t s = 0; s < lambda.size(); ++s) {
      for (int i = 0; i < ng; ++i) cfg[group[i]] = (s >> i) & 1;
      for (const auto& t : target.terms) {
        if (t.coupling.is_zero() || local[t.support.front()] < 0) continue;
        lambda[s] += term_energy(t, target, cfg);
      }
    }
    const auto j = energies_to_couplings(lambda);
    for (std::uint64_t s : ordered_subsets(ng)) {
      SlotTerm t;
      for (int i = 0; i < ng; ++i) {
        if (s >> i & 1) t.support.push_back(group[i]);
      }
      t.j = j[s] == 0.0 ? 0.0 : -j[s];
      terms.push_back(std::move(t));
    }
  }
  CompiledInstance inst = slot_layout(n, terms, spacing_a(0), options.layout, "superclique");
  seal(inst, expansion);
  return inst;
}

CompiledInstance compile_2d_ising(int n, int m, const IsingCouplings& couplings, const LayoutOptions& options) {
  const SpinModel target = ising_2d_target(n, m, couplings);
  Layout L({2 * n, 4, 1, m});
  CompiledInstance inst;
  inst.backend = Backend::Lgt4d;
  inst.mode = "direct";
  inst.logical_map.resize(n * m);
  inst.source_faces.resize(n * m);
  for (int r = 0; r < m; ++r) {
    for (int i = 0; i < n; ++i) {
      const Coords base{2 * i, 2, 0, r};
      inst.logical_map[r * n + i] = L.end_face(base, X, Z);
      inst.source_faces[r * n + i] = L.face(base, X, Z);
      L.tube({2 * i, 1, 0, r}, X, Z, Y);
      L.tube({2 * i, 2, 0, r}, X, Z, Y);
    }
    for (int i = 0; i + 1 < n; ++i) {
      const double j = couplings.horizontal[r * (n - 1) + i];
      // even links below the spine, odd links above it
      const bool even = i % 2 == 0;
      const int f = L.box({2 * i, even ? 0 : 3, 0, r}, X, Z, Y, 3, {0, 2}, even, j);
      inst.term_faces.push_back({{r * n + i, r * n + i + 1}, f});
    }
  }
  for (int r = 0; r + 1 < m; ++r) {
    for (int i = 0; i < n; ++i) {
      const Coords at{2 * i, 2, 0, r};
      L.tube(at, X, Z, W, couplings.vertical[r * n + i]);
      inst.term_faces.push_back({{r * n + i, (r + 1) * n + i}, L.face(at, X, W)});
    }
  }
  inst.faces = L.finish(options.finite_j);
  seal(inst, parity_expansion(target));
  return inst;
}

CompiledInstance build_4clique(int n, double j, const LayoutOptions& options) {
  const SpinModel target = four_clique_target(n, j);
  CompiledInstance inst = slot_layout(n, slot_terms(parity_expansion(target)), 0, options, "direct");
  seal(inst, parity_expansion(target));
  return inst;
}

}  // namespace latmap
