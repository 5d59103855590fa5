// Copyright 2026 The latmap Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace latmap {

// A finite real or the symbolic +infinity used by the merge rule.
class Coupling {
 public:
  Coupling() = default;
  Coupling(double v) : value_(v) {}  // NOLINT: implicit from a finite value
  static Coupling infinity() {
    Coupling c;
    c.infinite_ = true;
    return c;
  }

  bool is_infinite() const { return infinite_; }
  bool is_zero() const { return !infinite_ && value_ == 0.0; }
  double value() const;  // throws on infinity

  bool operator==(const Coupling&) const = default;

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

enum class TermKind { ParityIsing, ClockCosine, GeneralTable };

const char* to_string(TermKind kind);

struct InteractionTerm {
  std::vector<int> support;
  TermKind kind = TermKind::ParityIsing;
  Coupling coupling;
  // ClockCosine only: integer coefficient per support spin, empty means all 1.
  // The phase is 2*pi/q * sum_i weights[i]*s_i.
  std::vector<int> weights;
  // GeneralTable only. Local configuration index is mixed radix with the
  // first support spin as least significant digit.
  std::vector<double> table;

  static InteractionTerm parity(std::vector<int> support, Coupling j);
  static InteractionTerm clock(std::vector<int> support, Coupling j, std::vector<int> weights = {});
  static InteractionTerm general(std::vector<int> support, std::vector<double> table);

  bool operator==(const InteractionTerm&) const = default;
};

using Configuration = std::vector<int>;

struct SpinModel {
  std::vector<int> levels;
  std::vector<InteractionTerm> terms;
  double energy_offset = 0.0;
  int log2_prefactor = 0;

  int num_spins() const { return static_cast<int>(levels.size()); }
  bool all_binary() const;
  bool has_infinite() const;

  // Throws Validation on any broken invariant.
  void validate() const;

  bool operator==(const SpinModel&) const = default;
};

SpinModel make_binary_model(int num_spins);

// Energy of one term for the local values `local` (same order as support).
// Infinite couplings are rejected.
double term_energy(const InteractionTerm& term, std::span<const int> local, std::span<const int> levels);

// Local values of `term` read from a full configuration.
double term_energy(const InteractionTerm& term, const SpinModel& model, const Configuration& config);

double evaluate_energy(const SpinModel& model, const Configuration& config);

// Full table of a term in mixed-radix order, levels taken from the model.
std::vector<double> expand_table(const InteractionTerm& term, const SpinModel& model);

enum class IsingConvention { PmOne, ZeroOne };

struct IsingEdge {
  int a = 0;
  int b = 0;
};

// Couplings are ferromagnetic for J > 0: H = -sum J s_a s_b - sum h s_i with
// s = (-1)^sigma. Stored as ParityIsing terms in the [0,2) convention.
SpinModel build_ising_model(int num_spins, std::span<const IsingEdge> edges, std::span<const double> couplings,
                            std::span<const double> fields, IsingConvention convention = IsingConvention::PmOne);

// sigma in {0,1} -> s in {+1,-1}.
std::vector<int> to_pm_one(const Configuration& sigma);
Configuration from_pm_one(std::span<const int> s);

// Canonical form: supports sorted, terms sorted by (size, support, kind).
void sort_terms(SpinModel& model);

}  // namespace latmap
