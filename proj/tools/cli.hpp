// Copyright 2026 The lisa-match Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// gm: command-line front end.
//
//   gm gen   --kind K --n N --seed S --out A.gm [--permute [--b-out B.gm]
//            [--truth-out T.json] [--noise-level L] [--noise-seed S2]] [--points-out P]
//   gm match --algo lisa|sm|smkb --a A.gm --b B.gm --out M.json
//            [--tol 1e-4] [--max-iter 1000] [--sm-cap 22500] [--truth T.json]
//   gm bench (--plan PLAN.json | --algos lisa,sm --kind K --sizes 30,100 ...)
//            [--csv OUT.csv] [--threads N]
//
// Exit codes: 0 success, 1 runtime or domain error, 2 usage or parse error.

#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lisa/lisa.hpp"

namespace lisa::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

namespace detail {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::filesystem::path sibling(const std::filesystem::path& out, const std::string& suffix) {
  std::filesystem::path p = out;
  p.replace_extension();
  return p.string() + suffix;
}

struct GenArgs {
  std::string kind;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string out;
  bool permute = false;
  std::string b_out;
  std::string truth_out;
  std::string points_out;
  std::optional<double> noise_level;
  std::optional<std::uint64_t> noise_seed;
};

struct MatchArgs {
  std::string algo;
  std::string a;
  std::string b;
  std::string out;
  std::string truth;
  double tol = 1e-4;
  std::size_t max_iter = 1000;
  std::size_t sm_cap = kDefaultSmCap;
};

struct BenchArgs {
  std::string plan;
  std::vector<std::string> algos;
  std::string kind = "dense";
  std::vector<std::size_t> sizes;
  std::vector<double> levels;
  std::size_t trials = 20;
  std::uint64_t seed_base = 0;
  double tol = 1e-4;
  std::size_t max_iter = 1000;
  std::size_t sm_cap = kDefaultSmCap;
  std::string csv;
  std::size_t threads = 0;
};

inline int run_gen(const GenArgs& g, std::ostream& out, std::ostream& err) {
  const auto kind = parse_graph_kind(g.kind);
  if (!kind || *kind == GraphKind::external) throw UsageError("--kind: unknown graph kind '" + g.kind + "'");
  if (!g.permute && (g.noise_level || g.noise_seed || !g.b_out.empty() || !g.truth_out.empty())) {
    throw UsageError("--b-out, --truth-out and noise flags require --permute");
  }
  const PointSet points = gen_points(g.n, g.seed);
  const AffinityMatrix a = build_graph(*kind, points);
  save_matrix(a, g.out);
  if (!g.points_out.empty()) save_points(points, g.points_out);
  err << "gen: wrote " << a.order() << "-node " << to_string(*kind) << " graph to " << g.out << '\n';
  if (!g.permute) return kExitOk;

  auto [b, truth] = permute_instance(a, g.seed);
  if (g.noise_level && *g.noise_level > 0.0) {
    NoiseSpec spec;
    spec.level = *g.noise_level;
    b = perturb(b, spec, g.noise_seed.value_or(g.seed));
  }
  const std::string b_path = g.b_out.empty() ? sibling(g.out, ".b.gm").string() : g.b_out;
  const std::string t_path =
      g.truth_out.empty() ? sibling(g.out, ".truth.json").string() : g.truth_out;
  save_matrix(b, b_path);
  save_matching(truth, t_path, "truth");
  err << "gen: wrote permuted twin to " << b_path << " and ground truth to " << t_path << '\n';
  (void)out;
  return kExitOk;
}

inline bool env_threads_parallel() {
  return std::getenv("GM_THREADS") != nullptr && default_threads() > 1;
}

inline int run_match(const MatchArgs& m, std::ostream& out, std::ostream& err) {
  const auto algo = parse_algorithm(m.algo);
  if (!algo) throw UsageError("--algo: unknown algorithm '" + m.algo + "'");
  const AffinityMatrix a = load_matrix(m.a);
  const AffinityMatrix b = load_matrix(m.b);
  MatcherOptions opts;
  opts.power.tolerance = m.tol;
  opts.power.max_iterations = m.max_iter;
  opts.sm_cap = m.sm_cap;
  opts.parallel = env_threads_parallel();
  std::optional<Matching> truth;
  if (!m.truth.empty()) truth = load_matching(m.truth);

  const MatchResult res = run_matcher(*algo, a, b, opts);
  save_matching(res.matching, m.out, to_string(*algo), res.wall_seconds);
  err << "match: " << to_string(*algo) << " finished in " << res.iterations << " iterations, "
      << format_real(res.wall_seconds) << " s" << (res.converged ? "" : " (not converged)") << '\n';
  if (truth) out << "accuracy " << format_real(accuracy(res.matching, *truth)) << '\n';
  return kExitOk;
}

inline int run_bench(const BenchArgs& args, std::ostream& out, std::ostream& err) {
  BenchPlan plan;
  if (!args.plan.empty()) {
    if (!args.algos.empty() || !args.sizes.empty()) {
      throw UsageError("--plan cannot be combined with --algos or --sizes");
    }
    plan = load_plan(args.plan);
  } else {
    if (args.algos.empty() || args.sizes.empty()) {
      throw UsageError("bench needs --plan or both --algos and --sizes");
    }
    for (const auto& name : args.algos) {
      const auto algo = parse_algorithm(name);
      if (!algo) throw UsageError("--algos: unknown algorithm '" + name + "'");
      plan.algorithms.push_back(*algo);
    }
    const auto kind = parse_graph_kind(args.kind);
    if (!kind || *kind == GraphKind::external) throw UsageError("--kind: unknown graph kind '" + args.kind + "'");
    plan.kind = *kind;
    plan.sizes = args.sizes;
    if (!args.levels.empty()) plan.noise_levels = args.levels;
    plan.trials = args.trials;
    plan.seed_base = args.seed_base;
    plan.power.tolerance = args.tol;
    plan.power.max_iterations = args.max_iter;
    plan.sm_cap = args.sm_cap;
    try {
      plan.validate();
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
  }
  const std::size_t threads = args.threads > 0 ? args.threads : default_threads();
  const auto records = run_plan(plan, threads, [&](std::size_t done, std::size_t total) {
    err << "bench: " << done << "/" << total << " instances\n";
  });
  std::size_t failures = 0;
  for (const auto& r : records) failures += r.failed();
  if (args.csv.empty()) {
    write_csv(records, out);
  } else {
    write_csv(records, std::filesystem::path(args.csv));
    err << "bench: wrote " << records.size() << " rows to " << args.csv << '\n';
  }
  if (failures > 0) err << "bench: " << failures << " runs failed (see error rows)\n";
  return kExitOk;
}

}  // namespace detail

/// Runs the command line `args` (without the program name). Machine output
/// goes to `out`, progress and diagnostics to `err`.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral graph matching: LiSA, SM and SM-KB", "gm"};
  app.require_subcommand(1);

  detail::GenArgs g;
  auto* gen = app.add_subcommand("gen", "Generate a random graph and optionally a permuted twin");
  gen->add_option("--kind", g.kind, "dense | sparse-weighted | sparse-binary")->required();
  gen->add_option("--n", g.n, "Number of nodes")->required()->check(CLI::PositiveNumber);
  gen->add_option("--seed", g.seed, "Instance seed")->required();
  gen->add_option("--out", g.out, "Output matrix file")->required();
  gen->add_flag("--permute", g.permute, "Also write a randomly relabeled twin and its ground truth");
  gen->add_option("--b-out", g.b_out, "Twin matrix file (default <out>.b.gm)");
  gen->add_option("--truth-out", g.truth_out, "Ground truth JSON (default <out>.truth.json)");
  gen->add_option("--points-out", g.points_out, "Write the generated points");
  gen->add_option("--noise-level", g.noise_level, "Noise level applied to the twin")
      ->check(CLI::NonNegativeNumber);
  gen->add_option("--noise-seed", g.noise_seed, "Noise seed (default --seed)");

  detail::MatchArgs m;
  auto* match = app.add_subcommand("match", "Match graph A to graph B");
  match->add_option("--algo", m.algo, "lisa | sm | smkb")->required();
  match->add_option("--a", m.a, "Source matrix file")->required();
  match->add_option("--b", m.b, "Target matrix file")->required();
  match->add_option("--out", m.out, "Output matching JSON")->required();
  match->add_option("--truth", m.truth, "Ground truth JSON; prints the accuracy");
  match->add_option("--tol", m.tol, "Power iteration tolerance")->check(CLI::PositiveNumber);
  match->add_option("--max-iter", m.max_iter, "Power iteration limit")->check(CLI::PositiveNumber);
  match->add_option("--sm-cap", m.sm_cap, "Largest n*m SM may materialize");

  detail::BenchArgs b;
  auto* bench = app.add_subcommand("bench", "Run a benchmark plan and write CSV");
  bench->add_option("--plan", b.plan, "Plan JSON file");
  bench->add_option("--algos", b.algos, "Algorithms, comma separated")->delimiter(',');
  bench->add_option("--kind", b.kind, "Graph kind");
  bench->add_option("--sizes", b.sizes, "Node counts, comma separated")->delimiter(',');
  bench->add_option("--noise-levels", b.levels, "Noise levels, comma separated")->delimiter(',');
  bench->add_option("--trials", b.trials, "Trials per scenario")->check(CLI::PositiveNumber);
  bench->add_option("--seed-base", b.seed_base, "Base seed");
  bench->add_option("--tol", b.tol, "Power iteration tolerance")->check(CLI::PositiveNumber);
  bench->add_option("--max-iter", b.max_iter, "Power iteration limit")->check(CLI::PositiveNumber);
  bench->add_option("--sm-cap", b.sm_cap, "Largest n*m SM may materialize");
  bench->add_option("--csv", b.csv, "Output CSV (default stdout)");
  bench->add_option("--threads", b.threads, "Worker threads (default GM_THREADS or all cores)");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return kExitUsage;
  }

  try {
    if (gen->parsed()) return detail::run_gen(g, out, err);
    if (match->parsed()) return detail::run_match(m, out, err);
    return detail::run_bench(b, out, err);
  } catch (const detail::UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace lisa::cli
