// Copyright 2026 The latmap Authors
// SPDX-License-Identifier: Apache-2.0
#include "latmap/gf2.hpp"

#include <algorithm>
#include <bit>
#include <queue>
#include <string>

#include "latmap/errors.hpp"

namespace latmap {

SparseVec xor_sparse(const SparseVec& a, const SparseVec& b) {
  SparseVec out;
  out.reserve(a.size() + b.size());
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

int ConstraintSet::add_row(SparseVec vars, bool rhs) {
  std::sort(vars.begin(), vars.end());
  // repeated variables cancel in pairs
  SparseVec clean;
  for (std::size_t i = 0; i < vars.size();) {
    std::size_t j = i;
    while (j < vars.size() && vars[j] == vars[i]) ++j;
    if ((j - i) % 2) clean.push_back(vars[i]);
    i = j;
  }
  for (int v : clean) {
    require(v >= 0 && v < num_vars_, ErrorKind::Validation, "constraint variable " + std::to_string(v) + " out of range");
  }
  rows_.push_back(std::move(clean));
  rhs_.push_back(rhs);
  eliminated_ = false;
  return static_cast<int>(rows_.size()) - 1;
}

void ConstraintSet::protect(int var) {
  if (protected_.size() < static_cast<std::size_t>(num_vars_)) protected_.resize(num_vars_, 0);
  protected_[var] = 1;
  eliminated_ = false;
}

void ConstraintSet::eliminate() {
  protected_.resize(num_vars_, 0);
  pivots_.clear();
  pivot_rows_.clear();
  pivot_rhs_.clear();
  pivot_order_.assign(num_vars_, -1);

  const int nr = static_cast<int>(rows_.size());
  std::vector<SparseVec> rows = rows_;
  std::vector<char> rhs = rhs_;
  std::vector<char> active(nr, 1);
  const bool track = std::any_of(rhs.begin(), rhs.end(), [](char c) { return c != 0; });
  std::vector<SparseVec> prov;
  if (track) {
    prov.resize(nr);
    for (int r = 0; r < nr; ++r) prov[r] = {r};
  }

  std::vector<int> count(num_vars_, 0);
  std::vector<std::vector<int>> col_rows(num_vars_);
  for (int r = 0; r < nr; ++r) {
    for (int v : rows[r]) {
      ++count[v];
      col_rows[v].push_back(r);
    }
  }

  using Entry = std::pair<std::size_t, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  for (int r = 0; r < nr; ++r) queue.push({rows[r].size(), r});

  while (!queue.empty()) {
    auto [size, r] = queue.top();
    queue.pop();
    if (!active[r] || rows[r].size() != size) continue;
    active[r] = 0;
    if (rows[r].empty()) {
      if (rhs[r]) {
        throw FrustratedError("frustrated constraint system: a combination of " + std::to_string(prov[r].size()) +
                                  " rows reads 0 = 1",
                              prov[r]);
      }
      continue;
    }
    int pivot = -1;
    for (int v : rows[r]) {
      if (pivot < 0) {
        pivot = v;
        continue;
      }
      const bool pv = protected_[pivot], vv = protected_[v];
      if (pv != vv) {
        if (pv) pivot = v;
        continue;
      }
      if (count[v] < count[pivot]) pivot = v;
    }
    const SparseVec& prow = rows[r];
    for (int v : prow) --count[v];

    auto& cands = col_rows[pivot];
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    for (int o : cands) {
      if (o == r || !active[o]) continue;
      if (!std::binary_search(rows[o].begin(), rows[o].end(), pivot)) continue;
      for (int v : prow) {
        if (std::binary_search(rows[o].begin(), rows[o].end(), v)) {
          --count[v];
        } else {
          ++count[v];
          col_rows[v].push_back(o);
        }
      }
      rows[o] = xor_sparse(rows[o], prow);
      rhs[o] ^= rhs[r];
      if (track) prov[o] = xor_sparse(prov[o], prov[r]);
      queue.push({rows[o].size(), o});
    }
    cands.clear();
    pivot_order_[pivot] = static_cast<int>(pivots_.size());
    pivots_.push_back(pivot);
    pivot_rows_.push_back(prow);
    pivot_rhs_.push_back(rhs[r]);
  }
  eliminated_ = true;
}

std::vector<int> ConstraintSet::pivots() const { return pivots_; }

std::vector<int> ConstraintSet::free_vars() const {
  std::vector<int> out;
  for (int v = 0; v < num_vars_; ++v) {
    if (pivot_order_.empty() || pivot_order_[v] < 0) out.push_back(v);
  }
  return out;
}

std::pair<SparseVec, bool> ConstraintSet::reduce(SparseVec v) const {
  require(eliminated_, ErrorKind::Precondition, "constraint set not eliminated");
  std::sort(v.begin(), v.end());
  bool constant = false;
  for (;;) {
    int best = -1;
    for (int x : v) {
      const int o = pivot_order_[x];
      if (o >= 0 && (best < 0 || o < best)) best = o;
    }
    if (best < 0) break;
    v = xor_sparse(v, pivot_rows_[best]);
    constant ^= pivot_rhs_[best] != 0;
  }
  return {v, constant};
}

std::vector<ConstraintSet::Row> ConstraintSet::normalized() const {
  std::vector<Row> out;
  out.reserve(pivots_.size());
  for (std::size_t k = 0; k < pivots_.size(); ++k) {
    SparseVec rest;
    for (int x : pivot_rows_[k]) {
      if (x != pivots_[k]) rest.push_back(x);
    }
    auto [red, c] = reduce(rest);
    out.push_back({pivots_[k], std::move(red), (pivot_rhs_[k] != 0) != c});
  }
  return out;
}

DenseGf2::DenseGf2(int rows, int cols)
    : rows_(rows), cols_(cols), words_((cols + 63) / 64), data_(static_cast<std::size_t>(rows) * words_, 0) {}

void DenseGf2::set(int r, int c, bool v) {
  auto& w = data_[idx(r, c)];
  const std::uint64_t bit = 1ULL << (c & 63);
  w = v ? (w | bit) : (w & ~bit);
}

std::vector<std::uint64_t> DenseGf2::row_bits(int r) const {
  return {data_.begin() + static_cast<std::ptrdiff_t>(r) * words_,
          data_.begin() + static_cast<std::ptrdiff_t>(r + 1) * words_};
}

DenseGf2 DenseGf2::transpose() const {
  DenseGf2 t(cols_, rows_);
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) {
      if (get(r, c)) t.set(c, r, true);
    }
  }
  return t;
}

std::vector<int> DenseGf2::to_rref() {
  std::vector<int> pivot_cols;
  int row = 0;
  for (int c = 0; c < cols_ && row < rows_; ++c) {
    int sel = -1;
    for (int r = row; r < rows_; ++r) {
      if (get(r, c)) {
        sel = r;
        break;
      }
    }
    if (sel < 0) continue;
    if (sel != row) {
      for (int w = 0; w < words_; ++w) std::swap(data_[static_cast<std::size_t>(sel) * words_ + w], data_[static_cast<std::size_t>(row) * words_ + w]);
    }
    for (int r = 0; r < rows_; ++r) {
      if (r != row && get(r, c)) {
        for (int w = 0; w < words_; ++w) data_[static_cast<std::size_t>(r) * words_ + w] ^= data_[static_cast<std::size_t>(row) * words_ + w];
      }
    }
    pivot_cols.push_back(c);
    ++row;
  }
  return pivot_cols;
}

int DenseGf2::rank() const {
  DenseGf2 m = *this;
  return static_cast<int>(m.to_rref().size());
}

std::vector<int> DenseGf2::independent_columns() const {
  DenseGf2 m = *this;
  return m.to_rref();
}

std::vector<std::vector<char>> DenseGf2::null_space() const {
  DenseGf2 m = *this;
  const auto piv = m.to_rref();
  std::vector<char> is_pivot(cols_, 0);
  for (int c : piv) is_pivot[c] = 1;
  std::vector<std::vector<char>> basis;
  for (int f = 0; f < cols_; ++f) {
    if (is_pivot[f]) continue;
    std::vector<char> x(cols_, 0);
    x[f] = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) {
      if (m.get(static_cast<int>(r), f)) x[piv[r]] = 1;
    }
    basis.push_back(std::move(x));
  }
  return basis;
}

bool DenseGf2::in_column_space(const std::vector<char>& b) const {
  DenseGf2 aug(rows_, cols_ + 1);
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) {
      if (get(r, c)) aug.set(r, c, true);
    }
    if (b[r]) aug.set(r, cols_, true);
  }
  return aug.rank() == rank();
}

}  // namespace latmap
