// Copyright 2026 The latmap Authors
// SPDX-License-Identifier: Apache-2.0
#include "latmap/spin_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <string>

#include "latmap/errors.hpp"

namespace latmap {

double Coupling::value() const {
  if (infinite_) fail(ErrorKind::Precondition, "coupling is +inf where a finite value is required");
  return value_;
}

const char* to_string(TermKind kind) {
  switch (kind) {
    case TermKind::ParityIsing: return "parity";
    case TermKind::ClockCosine: return "clock";
    case TermKind::GeneralTable: return "table";
  }
  return "unknown";
}

InteractionTerm InteractionTerm::parity(std::vector<int> support, Coupling j) {
  InteractionTerm t;
  t.support = std::move(support);
  t.kind = TermKind::ParityIsing;
  t.coupling = j;
  return t;
}

InteractionTerm InteractionTerm::clock(std::vector<int> support, Coupling j, std::vector<int> weights) {
  InteractionTerm t;
  t.support = std::move(support);
  t.kind = TermKind::ClockCosine;
  t.coupling = j;
  t.weights = std::move(weights);
  return t;
}

InteractionTerm InteractionTerm::general(std::vector<int> support, std::vector<double> table) {
  InteractionTerm t;
  t.support = std::move(support);
  t.kind = TermKind::GeneralTable;
  t.coupling = Coupling(1.0);
  t.table = std::move(table);
  return t;
}

bool SpinModel::all_binary() const {
  return std::all_of(levels.begin(), levels.end(), [](int q) { return q == 2; });
}

bool SpinModel::has_infinite() const {
  return std::any_of(terms.begin(), terms.end(), [](const InteractionTerm& t) { return t.coupling.is_infinite(); });
}

void SpinModel::validate() const {
  const int n = num_spins();
  for (int i = 0; i < n; ++i) {
    require(levels[i] >= 2, ErrorKind::Validation,
            "spin " + std::to_string(i) + " has " + std::to_string(levels[i]) + " levels, need at least 2");
  }
  if (!std::isfinite(energy_offset)) fail(ErrorKind::Validation, "energy offset is not finite");
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const auto& t = terms[k];
    const std::string where = "term " + std::to_string(k);
    std::set<int> seen;
    for (int s : t.support) {
      require(s >= 0 && s < n, ErrorKind::Validation, where + ": spin index " + std::to_string(s) + " out of range");
      require(seen.insert(s).second, ErrorKind::Validation, where + ": spin " + std::to_string(s) + " repeated");
    }
    if (!t.coupling.is_infinite() && !std::isfinite(t.coupling.value())) {
      fail(ErrorKind::Validation, where + ": coupling is not finite");
    }
    switch (t.kind) {
      case TermKind::ParityIsing:
        for (int s : t.support) {
          require(levels[s] == 2, ErrorKind::Validation, where + ": parity term on a spin with q != 2");
        }
        require(t.table.empty() && t.weights.empty(), ErrorKind::Validation, where + ": parity term carries extra data");
        break;
      case TermKind::ClockCosine: {
        require(!t.support.empty(), ErrorKind::Validation, where + ": clock term with empty support");
        const int q = levels[t.support.front()];
        for (int s : t.support) {
          require(levels[s] == q, ErrorKind::Validation, where + ": clock term mixes spins with different q");
        }
        require(t.weights.empty() || t.weights.size() == t.support.size(), ErrorKind::Validation,
                where + ": clock weights do not match support");
        require(t.table.empty(), ErrorKind::Validation, where + ": clock term carries a table");
        break;
      }
      case TermKind::GeneralTable: {
        std::size_t size = 1;
        for (int s : t.support) size *= static_cast<std::size_t>(levels[s]);
        require(t.table.size() == size, ErrorKind::Validation,
                where + ": table has " + std::to_string(t.table.size()) + " entries, expected " + std::to_string(size));
        require(t.coupling.is_zero() || t.coupling == Coupling(1.0), ErrorKind::Validation,
                where + ": table terms carry their energies in the table");
        for (double v : t.table) require(std::isfinite(v), ErrorKind::Validation, where + ": non-finite table entry");
        break;
      }
    }
  }
}

SpinModel make_binary_model(int num_spins) {
  SpinModel m;
  m.levels.assign(static_cast<std::size_t>(num_spins), 2);
  return m;
}

double term_energy(const InteractionTerm& term, std::span<const int> local, std::span<const int> levels) {
  if (term.coupling.is_infinite()) fail(ErrorKind::Precondition, "energy of a +inf coupling is undefined");
  switch (term.kind) {
    case TermKind::ParityIsing: {
      int parity = 0;
      for (int v : local) parity ^= v & 1;
      const double j = term.coupling.value();
      return parity ? j : -j;
    }
    case TermKind::ClockCosine: {
      const int q = levels.empty() ? 2 : levels[0];
      long sum = 0;
      for (std::size_t i = 0; i < local.size(); ++i) {
        sum += static_cast<long>(term.weights.empty() ? 1 : term.weights[i]) * local[i];
      }
      const long r = ((sum % q) + q) % q;
      if (r == 0) return -term.coupling.value();
      return -term.coupling.value() * std::cos(2.0 * std::numbers::pi * static_cast<double>(r) / q);
    }
    case TermKind::GeneralTable: {
      if (term.coupling.is_zero()) return 0.0;
      std::size_t index = 0, stride = 1;
      for (std::size_t i = 0; i < local.size(); ++i) {
        index += static_cast<std::size_t>(local[i]) * stride;
        stride *= static_cast<std::size_t>(levels[i]);
      }
      return term.table[index];
    }
  }
  return 0.0;
}

double term_energy(const InteractionTerm& term, const SpinModel& model, const Configuration& config) {
  std::vector<int> local, lv;
  local.reserve(term.support.size());
  lv.reserve(term.support.size());
  for (int s : term.support) {
    local.push_back(config[s]);
    lv.push_back(model.levels[s]);
  }
  return term_energy(term, local, lv);
}

double evaluate_energy(const SpinModel& model, const Configuration& config) {
  require(static_cast<int>(config.size()) == model.num_spins(), ErrorKind::Precondition,
          "configuration has " + std::to_string(config.size()) + " entries, model has " +
              std::to_string(model.num_spins()) + " spins");
  for (int i = 0; i < model.num_spins(); ++i) {
    require(config[i] >= 0 && config[i] < model.levels[i], ErrorKind::Precondition,
            "spin " + std::to_string(i) + " value out of range");
  }
  double e = model.energy_offset;
  for (const auto& t : model.terms) e += term_energy(t, model, config);
  return e;
}

std::vector<double> expand_table(const InteractionTerm& term, const SpinModel& model) {
  std::vector<int> lv;
  std::size_t size = 1;
  for (int s : term.support) {
    lv.push_back(model.levels[s]);
    size *= static_cast<std::size_t>(model.levels[s]);
  }
  std::vector<double> out(size);
  std::vector<int> local(term.support.size(), 0);
  for (std::size_t idx = 0; idx < size; ++idx) {
    std::size_t rest = idx;
    for (std::size_t i = 0; i < local.size(); ++i) {
      local[i] = static_cast<int>(rest % lv[i]);
      rest /= lv[i];
    }
    out[idx] = term_energy(term, local, lv);
  }
  return out;
}

SpinModel build_ising_model(int num_spins, std::span<const IsingEdge> edges, std::span<const double> couplings,
                            std::span<const double> fields, IsingConvention /*convention*/) {
  require(num_spins >= 0, ErrorKind::Validation, "negative spin count");
  require(couplings.size() == edges.size(), ErrorKind::Validation, "one coupling per edge required");
  require(fields.empty() || static_cast<int>(fields.size()) == num_spins, ErrorKind::Validation,
          "fields must be empty or one per spin");
  SpinModel m = make_binary_model(num_spins);
  std::set<std::pair<int, int>> seen;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    auto [a, b] = edges[k];
    require(a >= 0 && a < num_spins && b >= 0 && b < num_spins, ErrorKind::Validation, "edge references unknown spin");
    require(a != b, ErrorKind::Validation, "self-loop on spin " + std::to_string(a));
    require(seen.insert({std::min(a, b), std::max(a, b)}).second, ErrorKind::Validation,
            "duplicate edge " + std::to_string(a) + "-" + std::to_string(b));
    m.terms.push_back(InteractionTerm::parity({std::min(a, b), std::max(a, b)}, couplings[k]));
  }
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i] != 0.0) m.terms.push_back(InteractionTerm::parity({static_cast<int>(i)}, fields[i]));
  }
  return m;
}

std::vector<int> to_pm_one(const Configuration& sigma) {
  std::vector<int> s(sigma.size());
  std::transform(sigma.begin(), sigma.end(), s.begin(), [](int v) { return v ? -1 : 1; });
  return s;
}

Configuration from_pm_one(std::span<const int> s) {
  Configuration sigma(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    require(s[i] == 1 || s[i] == -1, ErrorKind::Validation, "pm-one spin must be +1 or -1");
    sigma[i] = s[i] == 1 ? 0 : 1;
  }
  return sigma;
}

namespace {

// Reorders the support ascending, carrying weights or table entries along.
void canonicalize_support(InteractionTerm& t, const std::vector<int>& levels) {
  std::vector<std::size_t> order(t.support.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return t.support[a] < t.support[b]; });
  if (std::is_sorted(order.begin(), order.end())) return;
  std::vector<int> support(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) support[i] = t.support[order[i]];
  if (!t.weights.empty()) {
    std::vector<int> w(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) w[i] = t.weights[order[i]];
    t.weights = std::move(w);
  }
  if (t.kind == TermKind::GeneralTable) {
    const std::size_t k = order.size();
    std::vector<int> old_lv(k), new_lv(k);
    for (std::size_t i = 0; i < k; ++i) {
      old_lv[i] = levels[t.support[i]];
      new_lv[i] = levels[support[i]];
    }
    std::vector<double> table(t.table.size());
    std::vector<int> digit(k);
    for (std::size_t idx = 0; idx < t.table.size(); ++idx) {
      std::size_t rest = idx;
      for (std::size_t i = 0; i < k; ++i) {
        digit[i] = static_cast<int>(rest % new_lv[i]);
        rest /= new_lv[i];
      }
      // digit[i] is the value of support[i] = old support[order[i]]
      std::size_t old_idx = 0, stride = 1;
      std::vector<int> old_digit(k);
      for (std::size_t i = 0; i < k; ++i) old_digit[order[i]] = digit[i];
      for (std::size_t i = 0; i < k; ++i) {
        old_idx += static_cast<std::size_t>(old_digit[i]) * stride;
        stride *= old_lv[i];
      }
      table[idx] = t.table[old_idx];
    }
    t.table = std::move(table);
  }
  t.support = std::move(support);
}

}  // namespace

void sort_terms(SpinModel& model) {
  for (auto& t : model.terms) canonicalize_support(t, model.levels);
  std::stable_sort(model.terms.begin(), model.terms.end(), [](const InteractionTerm& a, const InteractionTerm& b) {
    if (a.support.size() != b.support.size()) return a.support.size() < b.support.size();
    if (a.support != b.support) return a.support < b.support;
    return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  });
}

}  // namespace latmap
