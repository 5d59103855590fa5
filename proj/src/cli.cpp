// Copyright 2026 The latmap Authors
// SPDX-License-Identifier: Apache-2.0
#include "latmap/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "latmap/backend.hpp"
#include "latmap/errors.hpp"
#include "latmap/exact.hpp"
#include "latmap/quantum.hpp"
#include "latmap/serialize.hpp"
#include "latmap/walsh.hpp"

namespace latmap {

std::vector<double> parse_betas(const std::string& text) {
  std::vector<double> out;
  auto num = [](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      require(used == s.size(), ErrorKind::Validation, "bad number '" + s + "'");
      return v;
    } catch (const std::logic_error&) {
      fail(ErrorKind::Validation, "bad number '" + s + "'");
    }
  };
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    require(parts.size() == 3, ErrorKind::Validation, "beta grid must read a:b:n");
    const double a = num(parts[0]), b = num(parts[1]);
    const double nd = num(parts[2]);
    const int n = static_cast<int>(nd);
    require(n >= 1 && n == nd, ErrorKind::Validation, "beta grid needs a positive count");
    for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  } else {
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) {
      if (!p.empty()) out.push_back(num(p));
    }
  }
  require(!out.empty(), ErrorKind::Validation, "empty beta grid");
  for (std::size_t i = 0; i < out.size(); ++i) {
    require(out[i] > 0 && std::isfinite(out[i]), ErrorKind::Validation, "beta values must be positive");
    for (std::size_t k = 0; k < i; ++k) require(out[k] != out[i], ErrorKind::Validation, "beta values must be distinct");
  }
  return out;
}

namespace {

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::Verification: return kExitVerification;
    case ErrorKind::CapExceeded: return kExitCap;
    default: return kExitValidation;
  }
}

struct Job {
  std::string target, instance, geometry, trace, out, format = "json";
  std::string backend = "lgt4d", mode = "superclique";
  std::string betas = "0.1,0.25,0.5,0.75,1.0";
  double tol = -1;
  int cap = 26;
  unsigned seed = 1;
};

void emit(const Job& job, std::ostream& out, const std::string& text) {
  if (job.out.empty()) {
    out << text;
  } else {
    write_text_atomic(job.out, text);
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

SpinModel load_model(const std::string& path) {
  require(!path.empty(), ErrorKind::Validation, "--target is required");
  return model_from_json(read_json_file(path));
}

CompiledInstance load_instance(const std::string& path) {
  require(!path.empty(), ErrorKind::Validation, "--instance is required");
  return instance_from_json(read_json_file(path));
}

EngineOptions engine(const Job& job) {
  EngineOptions e;
  e.max_free = job.cap;
  return e;
}

std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> v;
  std::stringstream ss(s);
  for (std::string p; std::getline(ss, p, ',');) {
    if (p.empty()) continue;
    try {
      v.push_back(std::stoi(p));
    } catch (const std::logic_error&) {
      fail(ErrorKind::Validation, "bad integer '" + p + "'");
    }
  }
  return v;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

// Random table target over n binary spins, entries uniform in [-1,1].
SpinModel random_table(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> table(1ULL << n);
  for (auto& x : table) x = u(rng);
  std::vector<int> sup(n);
  for (int i = 0; i < n; ++i) sup[i] = i;
  SpinModel m = make_binary_model(n);
  m.terms.push_back(InteractionTerm::general(sup, table));
  return m;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"latmap: compile spin models into Z2 lattice gauge theories and verify them exactly"};
  app.require_subcommand(1);
  Job job;
  auto common = [&](CLI::App* c) {
    c->add_option("--out", job.out, "output file (default: stdout)");
    c->add_option("--format", job.format, "json, text or csv")->check(CLI::IsMember({"json", "text", "csv"}));
    c->add_option("--cap", job.cap, "largest enumeration, log2 of configurations");
    c->add_option("--seed", job.seed, "random seed");
  };

  auto* compile = app.add_subcommand("compile", "compile a target model into an instance");
  common(compile);
  compile->add_option("--target", job.target, "target model JSON");
  compile->add_option("--backend", job.backend)->check(CLI::IsMember({"lgt4d", "lgt3d", "lgt3d-boundary"}));
  compile->add_option("--mode", job.mode)->check(CLI::IsMember({"superclique", "direct"}));
  std::string ising2d, target_out;
  int four_clique = 0, random_n = 0, max_spins = 10;
  double beta_min = 0.1;
  std::optional<double> finite_j;
  compile->add_option("--ising2d", ising2d, "n:m[:J] grid instead of --target");
  compile->add_option("--four-clique", four_clique, "n: all 4-body terms instead of --target");
  compile->add_option("--random-table", random_n, "n: seeded random table target");
  compile->add_option("--target-out", target_out, "write the generated target here");
  compile->add_option("--beta-min", beta_min, "smallest beta the q-level penalty must cover");
  compile->add_option("--finite-j", finite_j, "replace infinite merges by this coupling");
  compile->add_option("--max-spins", max_spins, "superclique group size cap");

  auto* verify = app.add_subcommand("verify", "verify an instance against its target");
  common(verify);
  verify->add_option("--target", job.target)->required();
  verify->add_option("--instance", job.instance)->required();
  verify->add_option("--betas", job.betas, "a:b:n or comma list");
  verify->add_option("--tol", job.tol, "relative residual tolerance");

  auto* observe = app.add_subcommand("observe", "observables on the target and through an instance");
  common(observe);
  std::string observable = "energy", sites, loop;
  double beta = 0.5, coupling = 1.0;
  observe->add_option("--target", job.target);
  observe->add_option("--geometry", job.geometry, "Z2 gauge model geometry instead of --target");
  observe->add_option("--coupling", coupling, "uniform face coupling for --geometry");
  observe->add_option("--instance", job.instance);
  observe->add_option("--observable", observable)
      ->check(CLI::IsMember({"energy", "free-energy", "entropy", "magnetization", "parity", "wilson"}));
  observe->add_option("--beta", beta);
  observe->add_option("--sites", sites, "comma list of spins");
  observe->add_option("--loop", loop, "comma list of edges");
  observe->add_option("--tol", job.tol);

  auto* scan = app.add_subcommand("scan", "per-beta observables as columns");
  common(scan);
  std::string quantity = "thermo";
  scan->add_option("--target", job.target);
  scan->add_option("--geometry", job.geometry);
  scan->add_option("--coupling", coupling);
  scan->add_option("--betas", job.betas);
  scan->add_option("--quantity", quantity, "thermo, or merge-deviation (betas read as beta*J_large)")
      ->check(CLI::IsMember({"thermo", "merge-deviation"}));

  auto* replay_cmd = app.add_subcommand("replay", "apply a trace to a model");
  common(replay_cmd);
  std::string model_path;
  replay_cmd->add_option("trace", job.trace, "trace or instance JSON")->required();
  replay_cmd->add_option("model", model_path, "model JSON (default: all-ones face model of the instance)");

  auto* stab = app.add_subcommand("stabilizer", "stabilizer rank and generators of a geometry");
  common(stab);
  stab->add_option("--geometry", job.geometry)->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << Json{{"error", "validation"}, {"message", e.what()}}.dump() << "\n";
    return kExitValidation;
  }

  try {
    if (*compile) {
      SpinModel target;
      CompiledInstance inst;
      LayoutOptions lo;
      lo.max_spins = max_spins;
      lo.finite_j = finite_j;
      if (!ising2d.empty()) {
        std::vector<std::string> parts;
        std::stringstream ss(ising2d);
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
        require(parts.size() == 2 || parts.size() == 3, ErrorKind::Validation, "--ising2d reads n:m[:J]");
        const int n = std::stoi(parts[0]), m = std::stoi(parts[1]);
        const double j = parts.size() == 3 ? std::stod(parts[2]) : 1.0;
        const auto c = IsingCouplings::uniform(n, m, j);
        target = ising_2d_target(n, m, c);
        inst = compile_2d_ising(n, m, c, lo);
      } else if (four_clique > 0) {
        target = four_clique_target(four_clique);
        inst = build_4clique(four_clique, 1.0, lo);
      } else {
        target = random_n > 0 ? random_table(random_n, job.seed) : load_model(job.target);
        CompileOptions co;
        co.backend = backend_from_string(job.backend);
        co.mode = mode_from_string(job.mode);
        co.layout = lo;
        co.beta_min = beta_min;
        inst = compile_target(target, co);
      }
      if (!target_out.empty()) write_text_atomic(target_out, dump(model_to_json(target)));
      if (job.format == "text") {
        std::ostringstream os;
        os << "backend " << to_string(inst.backend) << "\nmode " << inst.mode << "\ndims";
        for (int d : inst.geometry().extents()) os << " " << d;
        os << "\nfaces " << inst.geometry().num_faces() << "\nfixed_edges " << inst.faces.fixed.size()
           << "\nterms " << inst.term_faces.size() << "\naccounting pow2=" << inst.accounting.pow2
           << " offset=" << fmt(inst.accounting.offset) << "\n";
        emit(job, out, os.str());
      } else {
        emit(job, out, dump(instance_to_json(inst)));
      }
      return kExitOk;
    }

    if (*verify) {
      const SpinModel target = load_model(job.target);
      const CompiledInstance inst = load_instance(job.instance);
      VerifyOptions vo;
      vo.engine = engine(job);
      if (job.tol > 0) vo.tol = job.tol;
      require(job.tol == -1 || job.tol > 0, ErrorKind::Validation, "--tol must be positive");
      const auto rep = verify_instance(target, inst, parse_betas(job.betas), vo);
      if (job.format == "json") {
        emit(job, out, dump(report_to_json(rep)));
      } else {
        std::ostringstream os;
        os << "beta,log_Z_target,log_Z_instance,log_ratio,residual\n";
        for (const auto& r : rep.rows) {
          os << fmt(r.beta) << "," << fmt(r.log_z_target) << "," << fmt(r.log_z_instance) << "," << fmt(r.log_ratio)
             << "," << fmt(r.residual) << "\n";
        }
        os << (rep.pass ? "PASS" : "FAIL") << " a=" << rep.a << " c=" << fmt(rep.c)
           << " max_residual=" << fmt(rep.max_residual) << " at beta=" << fmt(rep.max_residual_beta) << " "
           << rep.message << "\n";
        emit(job, out, os.str());
      }
      return rep.pass ? kExitOk : kExitVerification;
    }

    if (*observe) {
      ObservableOptions oo;
      oo.engine = engine(job);
      require(job.tol == -1 || job.tol > 0, ErrorKind::Validation, "--tol must be positive");
      if (job.tol > 0) oo.tol = job.tol;
      Json rec;
      rec["beta"] = beta;
      Json obs;
      if (!job.geometry.empty()) {
        const auto g = geometry_from_json(read_json_file(job.geometry));
        const auto gm = build_zq_lgt(g, 2, std::vector<double>(g.num_faces(), coupling));
        rec["log_Z"] = partition_function(gm.model, beta, oo.engine).log_z;
        require(observable == "wilson", ErrorKind::Validation, "--geometry supports --observable wilson");
        const auto w = wilson_loop(gm, beta, parse_ints(loop), oo);
        obs["wilson"] = {{"direct", w.ensemble}, {"sources", w.finite_difference}};
      } else {
        const SpinModel target = load_model(job.target);
        rec["log_Z"] = partition_function(target, beta, oo.engine).log_z;
        std::optional<CompiledInstance> inst;
        if (!job.instance.empty()) inst = load_instance(job.instance);
        if (observable == "energy") {
          if (inst) {
            const auto r = observe_mean_energy(target, *inst, beta, oo);
            obs["energy"] = {{"target", r.target}, {"instance", r.instance}};
          } else {
            const auto r = mean_energy(target, beta, oo);
            obs["energy"] = {{"target", r.value}, {"finite_difference", r.finite_difference}};
          }
        } else if (observable == "free-energy") {
          obs["free_energy"] = {{"target", free_energy(target, beta, oo.engine)}};
        } else if (observable == "entropy") {
          obs["entropy"] = {{"target", entropy(target, beta, oo)}};
        } else if (observable == "magnetization") {
          const auto s = parse_ints(sites);
          if (inst) {
            const auto r = observe_magnetization(target, *inst, beta, s, oo);
            obs["magnetization"] = {{"target", r.target}, {"instance", r.instance}};
          } else {
            const auto r = magnetization(target, beta, s, oo);
            obs["magnetization"] = {{"target", r.value}, {"finite_difference", r.finite_difference}};
          }
        } else {
          // parity / wilson on a model: product over the listed spins
          const auto s = parse_ints(observable == "wilson" ? loop : sites);
          require(!s.empty(), ErrorKind::Validation, "empty parity support");
          if (inst) {
            const auto r = observe_term_parity(target, *inst, beta, s, oo);
            obs[observable] = {{"target", r.target}, {"instance", r.instance}};
          } else {
            PreparedModel pm(target, oo.engine);
            SparseVec sv(s.begin(), s.end());
            std::sort(sv.begin(), sv.end());
            const double direct = pm.evaluate(beta, {sv}).parity_means[0];
            const double src =
                richardson_derivative([&](double h) { return pm.log_z(beta, {{sv, h / beta}}); }, 0.0, oo.h_step);
            require(std::fabs(direct - src) <= oo.tol * std::max(1.0, std::fabs(direct)), ErrorKind::Verification,
                    "parity paths disagree");
            obs[observable] = {{"direct", direct}, {"sources", src}};
          }
        }
        if (inst) rec["accounting"] = {{"pow2", inst->accounting.pow2}, {"offset", inst->accounting.offset}};
      }
      rec["observables"] = obs;
      emit(job, out, dump(rec));
      return kExitOk;
    }

    if (*scan) {
      const auto betas = parse_betas(job.betas);
      std::vector<std::string> cols;
      std::vector<std::vector<double>> rows;
      if (quantity == "merge-deviation") {
        // pair gadget: finite J_large on every merged face, beta = 1
        const auto bp = gadget_pair(1.0);
        SpinModel m = bp.model();
        std::vector<int> merged;
        for (int t = 0; t < static_cast<int>(m.terms.size()); ++t) {
          if (m.terms[t].coupling.is_infinite()) merged.push_back(t);
        }
        cols = {"beta_J", "deviation"};
        for (double bj : betas) rows.push_back({bj, merge_deviation(m, merged, bj, 1.0)});
      } else {
        SpinModel model;
        if (!job.geometry.empty()) {
          const auto g = geometry_from_json(read_json_file(job.geometry));
          model = build_zq_lgt(g, 2, std::vector<double>(g.num_faces(), coupling)).model;
        } else {
          model = load_model(job.target);
        }
        ObservableOptions oo;
        oo.engine = engine(job);
        cols = {"beta", "log_Z", "energy", "free_energy", "entropy"};
        for (double b : betas) {
          rows.push_back({b, partition_function(model, b, oo.engine).log_z, mean_energy(model, b, oo).value,
                          free_energy(model, b, oo.engine), entropy(model, b, oo)});
        }
      }
      std::ostringstream os;
      if (job.format == "json") {
        Json j;
        j["columns"] = cols;
        j["rows"] = rows;
        os << dump(j);
      } else {
        for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
        os << "\n";
        for (const auto& r : rows) {
          for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << fmt(r[i]);
          os << "\n";
        }
      }
      emit(job, out, os.str());
      return kExitOk;
    }

    if (*replay_cmd) {
      const Json tj = read_json_file(job.trace);
      const bool is_instance = tj.is_object() && tj.contains("faces");
      RewriteTrace trace = is_instance ? instance_from_json(tj).trace : trace_from_json(tj);
      SpinModel model;
      std::optional<CompiledInstance> inst;
      if (is_instance) inst = instance_from_json(tj);
      if (!model_path.empty()) {
        model = model_from_json(read_json_file(model_path));
      } else {
        require(inst.has_value(), ErrorKind::Validation, "replay of a bare trace needs a model file");
        model = base_face_model(inst->geometry());
      }
      const SpinModel result = replay(model, trace);
      if (inst && model_path.empty() && !(result == inst->model())) {
        fail(ErrorKind::Verification, "replayed model differs from the instance");
      }
      emit(job, out, dump(model_to_json(result)));
      return kExitOk;
    }

    if (*stab) {
      const auto g = geometry_from_json(read_json_file(job.geometry));
      const auto a = build_incidence(g);
      const auto d = stabilizer_generators(a);
      if (job.format == "json") {
        Json j;
        j["faces"] = d.faces;
        j["edges"] = d.edges;
        j["rank"] = d.rank;
        j["incidence"] = incidence_to_json(a);
        j["x_generators"] = Json::array();
        for (std::size_t i = 0; i < d.x_edges.size(); ++i) {
          j["x_generators"].push_back({{"edge", d.x_edges[i]}, {"faces", d.x_generators[i]}});
        }
        j["z_generators"] = d.z_generators;
        emit(job, out, dump(j));
      } else {
        std::ostringstream os;
        os << "faces " << d.faces << "\nedges " << d.edges << "\nrank " << d.rank << "\n\n";
        os << "type  edge  faces\n";
        for (std::size_t i = 0; i < d.x_edges.size(); ++i) {
          os << "X     " << std::setw(4) << d.x_edges[i] << "  ";
          for (int f : d.x_generators[i]) os << f << " ";
          os << "\n";
        }
        for (const auto& z : d.z_generators) {
          os << "Z        -  ";
          for (int f : z) os << f << " ";
          os << "\n";
        }
        emit(job, out, os.str());
      }
      return kExitOk;
    }
  } catch (const FrustratedError& e) {
    err << Json{{"error", to_string(e.kind())}, {"message", e.what()}, {"certificate", e.certificate()}}.dump() << "\n";
    return exit_code_for(e.kind());
  } catch (const CycleError& e) {
    err << Json{{"error", to_string(e.kind())}, {"message", e.what()}, {"cycle", e.cycle()}}.dump() << "\n";
    return exit_code_for(e.kind());
  } catch (const Error& e) {
    err << Json{{"error", to_string(e.kind())}, {"message", e.what()}}.dump() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << Json{{"error", "validation"}, {"message", e.what()}}.dump() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace latmap
