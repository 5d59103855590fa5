// Copyright 2026 The latmap Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "latmap/backend.hpp"
#include "latmap/cli.hpp"
#include "latmap/errors.hpp"
#include "latmap/serialize.hpp"

using namespace latmap;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("latmap_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& text = "") const {
    const auto p = (path / name).string();
    if (!text.empty()) std::ofstream(p) << text;
    return p;
  }
};

}  // namespace

TEST_CASE("beta grids") {
  CHECK(parse_betas("0.1:1.0:10").size() == 10);
  CHECK(parse_betas("0.1:1.0:10").back() == doctest::Approx(1.0));
  CHECK(parse_betas("0.5,0.25") == std::vector<double>{0.5, 0.25});
  CHECK_THROWS_AS(parse_betas(""), Error);
  CHECK_THROWS_AS(parse_betas("0.1,0.1"), Error);
  CHECK_THROWS_AS(parse_betas("-1,2"), Error);
  CHECK_THROWS_AS(parse_betas("0:1:0"), Error);
}

TEST_CASE("model and instance round trips") {
  SpinModel m;
  m.levels = {2, 3, 2};
  m.terms.push_back(InteractionTerm::parity({0, 2}, Coupling::infinity()));
  m.terms.push_back(InteractionTerm::clock({1}, 0.5, {2}));
  m.terms.push_back(InteractionTerm::general({0, 1}, {1, 2, 3, 4, 5, 6}));
  m.energy_offset = 0.25;
  m.log2_prefactor = -3;
  const auto j = model_to_json(m);
  CHECK(j["terms"][0]["coupling"] == "inf");
  CHECK(model_from_json(Json::parse(j.dump())) == m);

  const auto inst = compile_2d_ising(2, 2, IsingCouplings::uniform(2, 2, 1.0));
  const auto back = instance_from_json(Json::parse(instance_to_json(inst).dump()));
  CHECK(back.model() == inst.model());
  CHECK(back.trace == inst.trace);
  CHECK(back.logical_map == inst.logical_map);
  const auto target = ising_2d_target(2, 2, IsingCouplings::uniform(2, 2, 1.0));
  const auto a = verify_instance(target, inst, {0.2, 0.5, 0.9});
  const auto b = verify_instance(target, back, {0.2, 0.5, 0.9});
  CHECK(report_to_json(a).dump() == report_to_json(b).dump());

  const auto v = vector_to_json({1, 2, 3, 4});
  CHECK(v["index_convention"] == "subset-mask-bit-j");
  CHECK(vector_from_json(v) == std::vector<double>{1, 2, 3, 4});

  CHECK_THROWS_AS(model_from_json(Json::parse(R"({"num_spins":1,"levels":[1],"terms":[]})")), Error);
  CHECK_THROWS_AS(model_from_json(Json::parse(R"({"num_spins":2,"terms":[{"support":[0,5],"coupling":1}]})")), Error);
  CHECK_THROWS_AS(model_from_json(Json::parse(R"({"terms":[]})")), Error);
}

TEST_CASE("compile and verify through files") {
  TempDir dir;
  const auto target = dir.file("ising2x2.json", model_to_json(ising_2d_target(2, 2, IsingCouplings::uniform(2, 2, 1.0))).dump());
  const auto inst = dir.file("inst.json");
  auto r = run({"compile", "--target", target, "--backend", "lgt4d", "--mode", "direct", "--out", inst});
  CHECK(r.code == 0);
  REQUIRE(fs::exists(inst));
  r = run({"verify", "--target", target, "--instance", inst, "--betas", "0.1,0.25,0.5,0.75,1.0"});
  CHECK(r.code == 0);
  const auto rep = Json::parse(r.out);
  CHECK(rep["pass"] == true);
  CHECK(rep["max_residual"].get<double>() < 1e-9);
  CHECK(rep["rows"].size() == 5);

  // tamper with one finite face
  auto ij = read_json_file(inst);
  for (auto& f : ij["faces"]) {
    if (f["role"] == "finite") {
      f["J"] = f["J"].get<double>() + 1e-3;
      break;
    }
  }
  const auto bad = dir.file("bad.json", ij.dump());
  r = run({"verify", "--target", target, "--instance", bad, "--format", "text"});
  CHECK(r.code == kExitVerification);
  CHECK(r.out.find("FAIL") != std::string::npos);

  // replay reproduces the compiled model
  r = run({"replay", inst});
  CHECK(r.code == 0);
  CHECK(model_from_json(Json::parse(r.out)) == instance_from_json(read_json_file(inst)).model());
}

TEST_CASE("superclique compile of a 3-spin table") {
  TempDir dir;
  const auto t = dir.file("t.json");
  auto r = run({"compile", "--random-table", "3", "--seed", "5", "--target-out", t});
  CHECK(r.code == 0);
  const auto j = Json::parse(r.out);
  CHECK(j["dims"] == Json({6, 2 + 4 * 3 + 4 * 3 + 4, 1, 1}));
  CHECK(j["mode"] == "superclique");
}

TEST_CASE("errors become records with exit codes") {
  TempDir dir;
  const auto q1 = dir.file("q1.json", R"({"num_spins":1,"levels":[1],"terms":[]})");
  auto r = run({"compile", "--target", q1});
  CHECK(r.code == kExitValidation);
  CHECK(Json::parse(r.err)["error"] == "validation");

  r = run({"compile", "--target", dir.file("missing.json")});
  CHECK(r.code == kExitValidation);
  r = run({"frobnicate"});
  CHECK(r.code == kExitValidation);

  const auto star = dir.file("star.json",
                             R"({"num_spins":4,"terms":[{"support":[0,1],"coupling":1},{"support":[0,2],"coupling":1},{"support":[0,3],"coupling":1}]})");
  r = run({"compile", "--target", star, "--backend", "lgt3d"});
  CHECK(r.code == kExitValidation);
  CHECK(Json::parse(r.err)["error"] == "obstruction");

  const auto chain = dir.file("chain.json", model_to_json(ising_2d_target(30, 1, IsingCouplings::uniform(30, 1, 1.0))).dump());
  r = run({"observe", "--target", chain, "--cap", "10"});
  CHECK(r.code == kExitCap);

  const auto geom = dir.file("g.json", R"({"dims":[1,1],"boundary":"open"})");
  r = run({"observe", "--geometry", geom, "--observable", "wilson", "--loop", "0,1,2"});
  CHECK(r.code == kExitValidation);
  r = run({"scan", "--geometry", geom, "--betas", ""});
  CHECK(r.code == kExitValidation);
}

TEST_CASE("observe and scan") {
  TempDir dir;
  const auto geom = dir.file("g.json", R"({"dims":[1,1],"boundary":"open"})");
  auto r = run({"observe", "--geometry", geom, "--observable", "wilson", "--loop", "0,1,2,3", "--beta", "0.7"});
  REQUIRE(r.code == 0);
  const auto w = Json::parse(r.out)["observables"]["wilson"];
  CHECK(std::fabs(w["direct"].get<double>() - std::tanh(0.7)) < 1e-7);
  CHECK(std::fabs(w["sources"].get<double>() - std::tanh(0.7)) < 1e-7);

  r = run({"scan", "--geometry", geom, "--betas", "0.1:1.0:10", "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 11);

  r = run({"scan", "--quantity", "merge-deviation", "--betas", "5,10,20", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto rows = Json::parse(r.out)["rows"];
  CHECK(rows[0][1].get<double>() > rows[1][1].get<double>());
  CHECK(rows[1][1].get<double>() > rows[2][1].get<double>());

  // one spin in a field through its gadget
  const auto one = dir.file("one.json", R"({"num_spins":1,"terms":[{"support":[0],"kind":"parity","coupling":0.8}]})");
  const auto inst = dir.file("one_inst.json");
  REQUIRE(run({"compile", "--target", one, "--mode", "direct", "--out", inst}).code == 0);
  r = run({"observe", "--target", one, "--instance", inst, "--observable", "energy", "--beta", "0.5"});
  REQUIRE(r.code == 0);
  const auto e = Json::parse(r.out);
  CHECK(std::fabs(e["observables"]["energy"]["instance"].get<double>() + 0.8 * std::tanh(0.4)) < 1e-7);
  CHECK(e.contains("accounting"));

  r = run({"stabilizer", "--geometry", geom, "--format", "text"});
  CHECK(r.code == 0);
  CHECK(r.out.find("rank 1") != std::string::npos);
}
