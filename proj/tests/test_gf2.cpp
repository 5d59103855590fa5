// Copyright 2026 The latmap Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>
#include <set>

#include "latmap/errors.hpp"
#include "latmap/gf2.hpp"

using namespace latmap;

namespace {

// Rank by brute force: size of the span, counted by enumerating combinations.
int brute_rank(const std::vector<std::vector<char>>& rows, int cols) {
  std::set<std::vector<char>> span;
  const int r = static_cast<int>(rows.size());
  for (std::uint64_t mask = 0; mask < (1ULL << r); ++mask) {
    std::vector<char> v(cols, 0);
    for (int i = 0; i < r; ++i) {
      if (mask >> i & 1) {
        for (int c = 0; c < cols; ++c) v[c] ^= rows[i][c];
      }
    }
    span.insert(v);
  }
  int k = 0;
  while ((1ULL << k) < span.size()) ++k;
  return k;
}

}  // namespace

TEST_CASE("xor of sparse vectors") {
  CHECK(xor_sparse({1, 3, 5}, {3, 4}) == SparseVec{1, 4, 5});
  CHECK(xor_sparse({2}, {2}).empty());
}

TEST_CASE("dense rank against span counting") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const int r = 1 + trial % 7, c = 1 + (trial * 3) % 9;
    DenseGf2 m(r, c);
    std::vector<std::vector<char>> rows(r, std::vector<char>(c, 0));
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) {
        const bool b = rng() & 1;
        m.set(i, j, b);
        rows[i][j] = b;
      }
    CHECK(m.rank() == brute_rank(rows, c));
    CHECK(m.transpose().rank() == m.rank());
    CHECK(static_cast<int>(m.independent_columns().size()) == m.rank());
    const auto ns = m.null_space();
    CHECK(static_cast<int>(ns.size()) == c - m.rank());
    for (const auto& x : ns) {
      for (int i = 0; i < r; ++i) {
        int s = 0;
        for (int j = 0; j < c; ++j) s ^= rows[i][j] & x[j];
        CHECK(s == 0);
      }
    }
  }
}

TEST_CASE("sparse elimination") {
  ConstraintSet cs(5);
  cs.add_row({0, 1});
  cs.add_row({1, 2}, true);
  cs.add_row({0, 2}, true);  // dependent: sum of the two above
  cs.eliminate();
  CHECK(cs.rank() == 2);
  CHECK(cs.free_vars().size() == 3);
  // x0 + x2 reduces to the constant 1
  auto [v, c] = cs.reduce({0, 2});
  CHECK(v.empty());
  CHECK(c);
  for (const auto& row : cs.normalized()) {
    CHECK(cs.is_pivot(row.pivot));
    for (int v : row.rest) CHECK(!cs.is_pivot(v));
  }
}

TEST_CASE("frustration carries a certificate") {
  ConstraintSet cs(3);
  cs.add_row({0, 1});
  cs.add_row({1, 2});
  cs.add_row({0, 2}, true);
  try {
    cs.eliminate();
    FAIL("expected frustration");
  } catch (const FrustratedError& e) {
    CHECK(e.kind() == ErrorKind::Frustrated);
    CHECK(e.certificate() == std::vector<int>{0, 1, 2});
  }
}

TEST_CASE("protected variables stay free when possible") {
  ConstraintSet cs(4);
  cs.protect(0);
  cs.protect(1);
  cs.add_row({0, 2});
  cs.add_row({1, 3});
  cs.eliminate();
  CHECK(!cs.is_pivot(0));
  CHECK(!cs.is_pivot(1));
  CHECK(cs.reduce({2}).first == SparseVec{0});
}
