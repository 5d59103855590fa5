// Copyright 2026 The latmap Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

namespace latmap {

// Sorted list of variable indices, read as a GF(2) vector.
using SparseVec = std::vector<int>;

SparseVec xor_sparse(const SparseVec& a, const SparseVec& b);

// Parity equations sum_{v in row} x_v = rhs over GF(2), eliminated sparsely.
// Pivots prefer short rows and rarely used variables; protected variables are
// chosen as pivots only when a row contains nothing else. Ties go to the
// lowest index.
class ConstraintSet {
 public:
  explicit ConstraintSet(int num_vars = 0) : num_vars_(num_vars) {}

  int num_vars() const { return num_vars_; }
  int add_row(SparseVec vars, bool rhs = false);  // returns the row id
  void protect(int var);

  // Runs elimination; throws FrustratedError with a certificate if some
  // combination of rows reads 0 = 1.
  void eliminate();

  bool eliminated() const { return eliminated_; }
  int rank() const { return static_cast<int>(pivots_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  bool is_pivot(int var) const { return pivot_order_[var] >= 0; }
  // Pivot variables in elimination order.
  std::vector<int> pivots() const;
  std::vector<int> free_vars() const;

  // Expresses a vector through free variables; the returned bool is the
  // constant part picked up from row right-hand sides.
  std::pair<SparseVec, bool> reduce(SparseVec v) const;

  // Fully reduced rows: pivot = sum of free variables (+ rhs), in elimination order.
  struct Row {
    int pivot;
    SparseVec rest;
    bool rhs;
  };
  std::vector<Row> normalized() const;

 private:
  int num_vars_;
  std::vector<SparseVec> rows_;
  std::vector<char> rhs_;
  std::vector<char> protected_;
  bool eliminated_ = false;
  // elimination output
  std::vector<int> pivots_;             // in order
  std::vector<SparseVec> pivot_rows_;   // row including the pivot
  std::vector<char> pivot_rhs_;
  std::vector<int> pivot_order_;        // var -> position in pivots_, or -1
};

// Dense GF(2) matrix with packed rows.
class DenseGf2 {
 public:
  DenseGf2(int rows = 0, int cols = 0);
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool get(int r, int c) const { return (data_[idx(r, c)] >> (c & 63)) & 1ULL; }
  void set(int r, int c, bool v);
  void flip(int r, int c) { data_[idx(r, c)] ^= 1ULL << (c & 63); }
  std::vector<std::uint64_t> row_bits(int r) const;

  DenseGf2 transpose() const;
  int rank() const;
  // Column indices of a maximal independent column set (pivot columns of the RREF).
  std::vector<int> independent_columns() const;
  // Basis of {x : M x = 0}, each vector of length cols().
  std::vector<std::vector<char>> null_space() const;
  // Whether b (length rows()) lies in the column space.
  bool in_column_space(const std::vector<char>& b) const;

 private:
  std::size_t idx(int r, int c) const { return static_cast<std::size_t>(r) * words_ + (c >> 6); }
  std::vector<int> to_rref();

  int rows_, cols_, words_;
  std::vector<std::uint64_t> data_;
};

}  // namespace latmap
