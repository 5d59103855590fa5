// Copyright 2026 The latmap Authors
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "latmap/backend.hpp"
#include "latmap/errors.hpp"
#include "latmap/walsh.hpp"

namespace latmap {

// --- verification ---

namespace {

struct TargetView {
  SpinModel binary;     // what the lattice realizes
  SpinModel expansion;  // its parity expansion
  const SpinModel* original;
  double penalty_bound_at(double beta) const { return enc ? enc->penalty_bound(beta) : 0.0; }
  std::optional<QLevelEncoding> enc;
};

TargetView view_target(const SpinModel& target, const CompiledInstance& inst) {
  TargetView v;
  v.original = &target;
  if (target.all_binary()) {
    require(!inst.qlevel, ErrorKind::Precondition, "instance was compiled from a q-level target");
    v.binary = target;
  } else {
    require(inst.qlevel.has_value(), ErrorKind::Precondition, "q-level target needs an instance with encoding data");
    require(inst.qlevel->levels == target.levels, ErrorKind::Precondition, "target levels differ from the instance");
    EncodeOptions eo;
    eo.beta_min = inst.qlevel->beta_min;
    eo.penalty = inst.qlevel->penalty;
    eo.tol = INFINITY;
    v.enc = encode_qlevel(target, eo);
    v.binary = v.enc->model;
  }
  v.expansion = parity_expansion(v.binary);
  return v;
}

}  // namespace

VerifyReport verify_instance(const SpinModel& target, const CompiledInstance& inst, const std::vector<double>& betas,
                             const VerifyOptions& options) {
  require(betas.size() >= 3, ErrorKind::Precondition, "verification needs at least three beta values");
  for (std::size_t i = 0; i < betas.size(); ++i) {
    require(betas[i] > 0, ErrorKind::Precondition, "beta values must be positive");
    for (std::size_t k = 0; k < i; ++k) require(betas[k] != betas[i], ErrorKind::Precondition, "beta values repeat");
  }
  target.validate();
  check_assignment(inst.faces, inst.backend);
  const TargetView tv = view_target(target, inst);
  require(static_cast<int>(inst.logical_map.size()) == tv.binary.num_spins(), ErrorKind::Precondition,
          "logical map size differs from the target");

  VerifyReport rep;
  const SpinModel im = inst.model();
  PreparedModel pm(im, options.engine, inst.extract_options());
  const EffectiveModel& eff = pm.effective();
  rep.expected.pow2 = eff.log2_factor - tv.expansion.log2_prefactor;
  rep.expected.offset = eff.offset - tv.expansion.energy_offset;

  // term-by-term comparison, tiny terms dropped on both sides
  std::string mismatch;
  if (eff.dependent_designated > 0) mismatch = "logical spins are tied together by constraints";
  if (eff.model.num_spins() != tv.binary.num_spins()) {
    mismatch = "effective model has " + std::to_string(eff.model.num_spins()) + " spins, target has " +
               std::to_string(tv.binary.num_spins());
  }
  if (mismatch.empty()) {
    std::map<std::vector<int>, double> lhs, rhs;
    for (const auto& t : eff.model.terms) {
      if (t.kind != TermKind::ParityIsing) {
        mismatch = "effective model holds a non-parity term";
        break;
      }
      lhs[t.support] += t.coupling.value();
    }
    for (const auto& t : tv.expansion.terms) rhs[t.support] += t.coupling.value();
    auto scale = [&](double x) { return options.term_tol * std::max(1.0, std::fabs(x)); };
    std::set<std::vector<int>> keys;
    for (auto& [k, v] : lhs) keys.insert(k);
    for (auto& [k, v] : rhs) keys.insert(k);
    for (const auto& k : keys) {
      const double a = lhs.count(k) ? lhs[k] : 0.0, b = rhs.count(k) ? rhs[k] : 0.0;
      if (std::fabs(a - b) > scale(b)) {
        std::string sup;
        for (int s : k) sup += (sup.empty() ? "" : ",") + std::to_string(s);
        std::string face;
        for (const auto& tf : inst.term_faces) {
          if (tf.support == k) face = " (face " + std::to_string(tf.face) + ")";
        }
        mismatch = "term {" + sup + "}" + face + ": instance " + std::to_string(a) + " vs target " + std::to_string(b);
        break;
      }
    }
  }
  rep.terms_match = mismatch.empty();

  for (double beta : betas) {
    VerifyRow row;
    row.beta = beta;
    row.log_z_target = partition_function(target, beta, options.engine).log_z;
    row.log_z_instance = pm.log_z(beta);
    row.log_ratio = row.log_z_instance - row.log_z_target;
    rep.rows.push_back(row);
  }
  const auto& r0 = rep.rows[0];
  const auto& r1 = rep.rows[1];
  const double slope = (r1.log_ratio - r0.log_ratio) / (r1.beta - r0.beta);
  const double a_real = (r0.log_ratio - slope * r0.beta) / std::log(2.0);
  rep.a = static_cast<int>(std::lround(a_real));
  rep.c = 0.5 * ((rep.a * std::log(2.0) - r0.log_ratio) / r0.beta + (rep.a * std::log(2.0) - r1.log_ratio) / r1.beta);
  for (auto& row : rep.rows) {
    tv.penalty_bound_at(row.beta);
    const double model = rep.a * std::log(2.0) - row.beta * rep.c;
    row.residual = std::fabs(row.log_ratio - model) / std::max(1.0, std::fabs(row.log_z_target));
    rep.penalty_bound = std::max(rep.penalty_bound, tv.penalty_bound_at(row.beta));
    if (row.residual >= rep.max_residual) {
      rep.max_residual = row.residual;
      rep.max_residual_beta = row.beta;
    }
  }
  rep.accounting_match = rep.a == rep.expected.pow2 &&
                         std::fabs(rep.c - rep.expected.offset) <= 1e-7 * std::max(1.0, std::fabs(rep.expected.offset));
  const bool residual_ok = rep.max_residual < options.tol + rep.penalty_bound;
  rep.pass = residual_ok && rep.terms_match && rep.accounting_match;
  if (!rep.terms_match) {
    rep.message = mismatch;
  } else if (!residual_ok) {
    rep.message = "residual " + std::to_string(rep.max_residual) + " at beta " + std::to_string(rep.max_residual_beta);
  } else if (!rep.accounting_match) {
    rep.message = "fitted accounting differs from the extraction";
  } else {
    rep.message = "ok";
  }
  return rep;
}

// --- observables through instances ---

namespace {

SparseVec face_parity(const CompiledInstance& inst, int face) {
  std::set<int> pinned;
  for (const auto& fe : inst.faces.fixed) pinned.insert(fe.edge);
  SparseVec v;
  for (const auto& fe : inst.geometry().face_boundary(face)) {
    if (!pinned.count(fe.edge)) v.push_back(fe.edge);
  }
  std::sort(v.begin(), v.end());
  return v;
}

double agree_or_throw(double a, double b, double tol, const std::string& what) {
  if (std::fabs(a - b) > tol * std::max(1.0, std::fabs(a))) {
    fail(ErrorKind::Verification, what + ": target " + std::to_string(a) + " vs instance " + std::to_string(b));
  }
  return b;
}

}  // namespace

InstanceObservable observe_mean_energy(const SpinModel& target, const CompiledInstance& inst, double beta,
                                       const ObservableOptions& options) {
  InstanceObservable out;
  out.target = mean_energy(target, beta, options).value;
  const SpinModel im = inst.model();
  PreparedModel pm(im, options.engine, inst.extract_options());
  const TargetView tv = view_target(target, inst);
  const double c = pm.effective().offset - tv.expansion.energy_offset;
  out.instance = -richardson_derivative([&](double b) { return pm.log_z(b); }, beta, beta * options.beta_step) - c;
  agree_or_throw(out.target, out.instance, options.tol, "mean energy");
  return out;
}

InstanceObservable observe_magnetization(const SpinModel& target, const CompiledInstance& inst, double beta,
                                         const std::vector<int>& sites, const ObservableOptions& options) {
  require(!inst.qlevel, ErrorKind::Unsupported, "magnetization is defined for binary targets");
  InstanceObservable out;
  out.target = magnetization(target, beta, sites, options).value;
  std::vector<SparseVec> src;
  for (int s : sites) {
    require(s >= 0 && s < static_cast<int>(inst.source_faces.size()) && inst.source_faces[s] >= 0,
            ErrorKind::Precondition, "no source face for spin " + std::to_string(s));
    src.push_back(face_parity(inst, inst.source_faces[s]));
  }
  PreparedModel pm(inst.model(), options.engine, inst.extract_options());
  auto log_z_h = [&](double h) {
    std::vector<ExtraTerm> extra;
    for (const auto& v : src) extra.push_back({v, h / beta});
    return pm.log_z(beta, extra);
  };
  out.instance = richardson_derivative(log_z_h, 0.0, options.h_step);
  agree_or_throw(out.target, out.instance, options.tol, "magnetization");
  return out;
}

InstanceObservable observe_term_parity(const SpinModel& target, const CompiledInstance& inst, double beta,
                                       const std::vector<int>& support, const ObservableOptions& options) {
  require(!inst.qlevel, ErrorKind::Unsupported, "parity observables are defined for binary targets");
  std::vector<int> sup = support;
  std::sort(sup.begin(), sup.end());
  int face = -1;
  for (const auto& tf : inst.term_faces) {
    if (tf.support == sup) face = tf.face;
  }
  require(face >= 0, ErrorKind::Unsupported, "no realized term matches the requested parity");
  InstanceObservable out;
  PreparedModel tp(target, options.engine);
  out.target = tp.evaluate(beta, {sup}).parity_means[0];
  const double fd_target = richardson_derivative([&](double h) { return tp.log_z(beta, {{sup, h / beta}}); }, 0.0,
                                                 options.h_step);
  agree_or_throw(out.target, fd_target, options.tol, "target parity paths");
  const SparseVec fv = face_parity(inst, face);
  PreparedModel pm(inst.model(), options.engine, inst.extract_options());
  out.instance =
      richardson_derivative([&](double h) { return pm.log_z(beta, {{fv, h / beta}}); }, 0.0, options.h_step);
  agree_or_throw(out.target, out.instance, options.tol, "parity");
  return out;
}

}  // namespace latmap
