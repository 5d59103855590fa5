// Copyright 2026 The latmap Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "latmap/exact.hpp"
#include "latmap/lattice.hpp"
#include "latmap/rewrite.hpp"
#include "latmap/spin_model.hpp"

namespace latmap {

enum class Backend { Lgt4d, Lgt3d, Lgt3dBoundary };
enum class Mode { Superclique, Direct };
enum class FaceRole { Delete, Merge, Finite };
enum class Provenance { Gauge, Boundary };

const char* to_string(Backend b);
const char* to_string(Mode m);
const char* to_string(FaceRole r);
const char* to_string(Provenance p);
Backend backend_from_string(const std::string& s);
Mode mode_from_string(const std::string& s);
FaceRole role_from_string(const std::string& s);
Provenance provenance_from_string(const std::string& s);

struct FixedEdge {
  int edge = -1;
  Provenance provenance = Provenance::Gauge;
  bool operator==(const FixedEdge&) const = default;
};

// Role per face plus pinned edges on one geometry.
struct FaceAssignment {
  LatticeGeometry geometry;
  std::vector<FaceRole> roles;
  std::vector<double> couplings;  // used by Finite faces
  std::vector<FixedEdge> fixed;   // sorted by edge
};

// One ParityIsing term per face (term id = face id): Finite -> J, Merge -> +inf,
// Delete -> 0. Fixed edges are pinned to 0.
SpinModel assignment_model(const FaceAssignment& fa);

// set/merge/delete per face, then fix per pinned edge; replaying it on the
// all-ones face model reproduces assignment_model.
RewriteTrace assignment_trace(const FaceAssignment& fa);

// The plain q = 2 model of the geometry with every face coupling 1.
SpinModel base_face_model(const LatticeGeometry& geometry);

// Checks one role per face and a forest of gauge-provenance edges.
void check_assignment(const FaceAssignment& fa, Backend backend);

struct GadgetBlueprint {
  int k = 0;
  FaceAssignment faces;
  std::vector<int> attachments;  // edges carrying the logical spins

  SpinModel model() const { return assignment_model(faces); }
  EffectiveModel extract() const;
};

GadgetBlueprint gadget_field(double j);
GadgetBlueprint gadget_pair(double j);
GadgetBlueprint gadget_kbody(int k, double j);
// Face object carried `length` cells along y.
GadgetBlueprint propagate(int length);
// Face object entering along y leaves along z.
GadgetBlueprint turn();
// `fanout` copies of one logical spin; pure 3D caps this at 2 ends.
GadgetBlueprint replicate(Backend backend, int fanout);

struct Accounting {
  int pow2 = 0;
  double offset = 0.0;
};

struct TermFace {
  std::vector<int> support;  // logical spins
  int face = -1;
};

struct QLevelInfo {
  std::vector<int> levels;
  double penalty = 0.0;
  double beta_min = 0.0;
};

struct CompiledInstance {
  Backend backend = Backend::Lgt4d;
  std::string mode;
  FaceAssignment faces;
  std::vector<int> logical_map;   // logical spin -> edge
  std::vector<int> source_faces;  // logical spin -> face with that parity, or -1
  std::vector<TermFace> term_faces;
  RewriteTrace trace;
  Accounting accounting;
  std::optional<QLevelInfo> qlevel;

  const LatticeGeometry& geometry() const { return faces.geometry; }
  SpinModel model() const { return assignment_model(faces); }
  ExtractOptions extract_options() const;
};

inline int spacing_a(int k) { return 2 * ((k + 3) / 4) + 2; }

struct LayoutOptions {
  int max_spins = 10;  // superclique size cap
  std::optional<double> finite_j;  // replace +inf by this finite value
};

CompiledInstance layout_superclique(int n, const std::vector<double>& couplings, const LayoutOptions& options = {});

struct CompileOptions {
  Backend backend = Backend::Lgt4d;
  Mode mode = Mode::Superclique;
  LayoutOptions layout;
  double beta_min = 0.1;  // q-level penalty scale
  std::vector<double> betas;  // q-level penalty bound checked here
};

CompiledInstance compile_target(const SpinModel& target, const CompileOptions& options = {});

struct IsingCouplings {
  // horizontal[r*(n-1)+i] couples (r,i)-(r,i+1); vertical[r*n+i] couples (r,i)-(r+1,i)
  std::vector<double> horizontal;
  std::vector<double> vertical;
  static IsingCouplings uniform(int n, int m, double j);
};

// Spin (r,i) is index r*n+i.
SpinModel ising_2d_target(int n, int m, const IsingCouplings& couplings);
CompiledInstance compile_2d_ising(int n, int m, const IsingCouplings& couplings, const LayoutOptions& options = {});

CompiledInstance build_4clique(int n, double j = 1.0, const LayoutOptions& options = {});
SpinModel four_clique_target(int n, double j = 1.0);

// Binary model -> ParityIsing terms merged by support, zero terms dropped,
// constants in the offset, canonical order.
SpinModel parity_expansion(const SpinModel& binary);

struct VerifyRow {
  double beta = 0.0;
  double log_z_target = 0.0;
  double log_z_instance = 0.0;
  double log_ratio = 0.0;
  double residual = 0.0;  // relative to max(1, |log Z_target|)
};

struct VerifyOptions {
  double tol = 1e-9;
  double term_tol = 1e-12;
  EngineOptions engine;
};

struct VerifyReport {
  bool pass = false;
  int a = 0;
  double c = 0.0;
  Accounting expected;  // from the instance extraction against this target
  std::vector<VerifyRow> rows;
  double max_residual = 0.0;
  double max_residual_beta = 0.0;
  double penalty_bound = 0.0;
  bool terms_match = false;
  bool accounting_match = false;
  std::string message;
};

VerifyReport verify_instance(const SpinModel& target, const CompiledInstance& instance, const std::vector<double>& betas,
                             const VerifyOptions& options = {});

// --- observables through a compiled instance ---

struct InstanceObservable {
  double target = 0.0;    // direct on the target model
  double instance = 0.0;  // derivatives of log Z_instance w.r.t. target parameters
};

InstanceObservable observe_mean_energy(const SpinModel& target, const CompiledInstance& inst, double beta,
                                       const ObservableOptions& options = {});
InstanceObservable observe_magnetization(const SpinModel& target, const CompiledInstance& inst, double beta,
                                         const std::vector<int>& sites, const ObservableOptions& options = {});
// Loop parity over target spins; it must coincide with a realized term.
InstanceObservable observe_term_parity(const SpinModel& target, const CompiledInstance& inst, double beta,
                                       const std::vector<int>& support, const ObservableOptions& options = {});

}  // namespace latmap
