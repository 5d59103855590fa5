// Copyright 2026 The latmap Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "latmap/errors.hpp"
#include "latmap/exact.hpp"
#include "latmap/walsh.hpp"
#include "oracle.hpp"

using namespace latmap;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_CASE("transform examples") {
  CHECK(couplings_to_energies({0, 1}) == std::vector<double>{1, -1});
  CHECK(couplings_to_energies({2.5, 0, 0, 0}) == std::vector<double>{2.5, 2.5, 2.5, 2.5});
  CHECK(couplings_to_energies({0, 0, 0, -1}) == std::vector<double>{-1, 1, 1, -1});
  CHECK(energies_to_couplings({1, -1}) == std::vector<double>{0, 1});
  const auto c = energies_to_couplings({3, 3, 3, 3, 3, 3, 3, 3});
  CHECK(c[0] == 3.0);
  for (std::size_t i = 1; i < c.size(); ++i) CHECK(c[i] == 0.0);
}

TEST_CASE("round trips and the naive path") {
  std::mt19937_64 rng(1);
  for (int n = 0; n <= 6; ++n) {
    const auto j = random_vec(rng, 1ULL << n);
    const auto fast = couplings_to_energies(j);
    const auto naive = couplings_to_energies_naive(j);
    const auto back = energies_to_couplings(fast);
    for (std::size_t i = 0; i < j.size(); ++i) {
      CHECK(std::fabs(fast[i] - naive[i]) < 1e-12);
      CHECK(std::fabs(back[i] - j[i]) < 1e-12);
    }
  }
}

TEST_CASE("fwht twice scales by 2^n") {
  std::mt19937_64 rng(2);
  for (int n : {1, 5, 12, 16}) {
    const auto v = random_vec(rng, 1ULL << n);
    auto w = v;
    fwht(w);
    fwht(w);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::fabs(w[i] - v[i] * std::ldexp(1.0, n)) < 1e-9);
  }
}

TEST_CASE("shifting energies touches only J0") {
  std::mt19937_64 rng(4);
  const auto l = random_vec(rng, 32);
  auto shifted = l;
  for (auto& x : shifted) x += 0.75;
  const auto a = energies_to_couplings(l), b = energies_to_couplings(shifted);
  CHECK(std::fabs(b[0] - a[0] - 0.75) < 1e-14);
  for (std::size_t i = 1; i < a.size(); ++i) CHECK(std::fabs(a[i] - b[i]) < 1e-14);
}

TEST_CASE("orthogonality") {
  for (int n = 1; n <= 10; ++n) CHECK(verify_orthogonality(n));
  CHECK(pairing_counts(3, 0b000, 0b101) == std::pair<int, int>{4, 4});
  CHECK(pairing_counts(1, 0, 1) == std::pair<int, int>{1, 1});
  CHECK(character(0b11, 0b01) == -1);
  CHECK(character(0b11, 0b11) == 1);
}

TEST_CASE("superclique models") {
  const auto m2 = superclique_model(2, {0, 1, 2, 3});
  REQUIRE(m2.terms.size() == 3);
  CHECK(m2.terms[0].support == std::vector<int>{0});
  CHECK(m2.terms[1].support == std::vector<int>{1});
  CHECK(m2.terms[2].support == std::vector<int>{0, 1});

  std::mt19937_64 rng(8);
  const auto l = random_vec(rng, 32);
  const auto m5 = superclique_model(5, energies_to_couplings(l));
  CHECK(m5.terms.size() == 31);
  for (int s = 0; s < 5; ++s) {
    int member = 0;
    for (const auto& t : m5.terms) member += std::count(t.support.begin(), t.support.end(), s);
    CHECK(member == 16);
  }
  oracle::for_each_config(m5, [&](const std::vector<int>& c) {
    std::size_t idx = 0;
    for (int i = 0; i < 5; ++i) idx |= static_cast<std::size_t>(c[i]) << i;
    CHECK(std::fabs(evaluate_energy(m5, c) - l[idx]) < 1e-12);
  });
}

TEST_CASE("q-level encoding") {
  CHECK(bits_for_levels(2) == 1);
  CHECK(bits_for_levels(3) == 2);
  CHECK(bits_for_levels(5) == 3);

  SpinModel chain;
  chain.levels = {3, 3, 3};
  chain.terms.push_back(InteractionTerm::clock({0, 1}, 1.0, {1, -1}));
  chain.terms.push_back(InteractionTerm::clock({1, 2}, 0.6, {1, -1}));
  const auto enc = encode_qlevel(chain);
  CHECK(enc.model.num_spins() == 6);
  CHECK(enc.model.all_binary());
  CHECK(enc.penalty == doctest::Approx(600.0));
  for (const auto& t : enc.model.terms) CHECK(t.kind == TermKind::ParityIsing);
  // valid codes carry the original energies
  oracle::for_each_config(chain, [&](const std::vector<int>& c) {
    CHECK(std::fabs(evaluate_energy(enc.model, enc.encode(c)) - evaluate_energy(chain, c)) < 1e-10);
  });
  // Z agrees up to the reported bound
  for (double beta : {0.1, 0.5, 1.0}) {
    const double d = partition_function(enc.model, beta).log_z - oracle::log_z(chain, beta);
    CHECK(d >= -1e-12);
    CHECK(d <= std::log1p(enc.penalty_bound(beta)) + 1e-12);
  }

  SpinModel binary = make_binary_model(2);
  binary.terms.push_back(InteractionTerm::parity({0, 1}, 0.5));
  const auto id = encode_qlevel(binary);
  CHECK(id.model.num_spins() == 2);
  CHECK(std::fabs(partition_function(id.model, 0.7).log_z - oracle::log_z(binary, 0.7)) < 1e-13);

  EncodeOptions weak;
  weak.penalty = 1.0;
  CHECK_THROWS_AS(encode_qlevel(chain, weak), Error);

  SpinModel five;
  five.levels = {5, 2};
  five.terms.push_back(InteractionTerm::general({0, 1}, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9}));
  const auto e5 = encode_qlevel(five);
  CHECK(e5.bits[0].size() == 3);
  CHECK(std::fabs(partition_function(e5.model, 0.4).log_z - oracle::log_z(five, 0.4)) < 1e-10);
}

TEST_CASE("u1 discretization") {
  LatticeGeometry one({1, 1}, Boundary::Open);
  const auto z2 = discretize_u1(one, 2, {1.0});
  CHECK(z2.model.terms[0].kind == TermKind::ParityIsing);

  // Z4 plaquette against a 4^4 sum
  const auto z4 = discretize_u1(one, 4, {1.0});
  double z = 0;
  for (int c = 0; c < 256; ++c) {
    int s[4] = {c & 3, (c >> 2) & 3, (c >> 4) & 3, (c >> 6) & 3};
    int phase = 0;
    for (int k = 0; k < 4; ++k) phase += one.face_boundary(0)[k].sign * s[one.face_boundary(0)[k].edge];
    z += std::exp(0.5 * std::cos(2 * std::numbers::pi * phase / 4.0));
  }
  CHECK(std::fabs(partition_function(z4.model, 0.5).log_z - std::log(z)) < 1e-13);

  const auto probe = u1_convergence_probe(one, {1.0}, 0.5, 2, 3);
  REQUIRE(probe.log_z.size() == 4);
  const double limit = std::log(std::cyl_bessel_i(0.0, 0.5));
  for (std::size_t i = 1; i < probe.log_z.size(); ++i) {
    CHECK(std::fabs(probe.log_z[i] - limit) <= std::fabs(probe.log_z[i - 1] - limit));
  }
  CHECK(std::fabs(probe.log_z.back() - limit) < 1e-6);
}
