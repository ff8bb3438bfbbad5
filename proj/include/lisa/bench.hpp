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

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <cstdlib>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "lisa/core.hpp"
#include "lisa/graphgen.hpp"
#include "lisa/graphio.hpp"
#include "lisa/matchers.hpp"
#include "lisa/rng.hpp"

namespace lisa {

struct BenchPlan {
  std::vector<Algorithm> algorithms;
  GraphKind kind = GraphKind::dense_weighted;
  std::vector<std::size_t> sizes;
  std::vector<double> noise_levels{0.0};
  std::size_t trials = 20;
  std::uint64_t seed_base = 0;
  PowerConfig power;
  std::size_t sm_cap = kDefaultSmCap;

  void validate() const {
    if (algorithms.empty()) throw DomainError("bench plan: no algorithms");
    if (sizes.empty()) throw DomainError("bench plan: no sizes");
    if (noise_levels.empty()) throw DomainError("bench plan: no noise levels");
    if (trials == 0) throw DomainError("bench plan: trials must be >= 1");
    if (kind == GraphKind::external) throw DomainError("bench plan: kind must be generated");
    for (std::size_t n : sizes)
      if (n < 3) throw DomainError("bench plan: sizes must be >= 3");
    for (double l : noise_levels)
      if (!(l >= 0.0) || !std::isfinite(l)) throw DomainError("bench plan: noise levels must be >= 0");
    power.validate(1);
  }
};

/// Reads a plan object:
///   {"algorithms": ["lisa", "sm", "smkb"], "kind": "dense", "sizes": [50],
///    "noise_levels": [0], "trials": 20, "seed_base": 1,
///    "tolerance": 1e-4, "max_iterations": 1000, "sm_cap": 22500}
/// Only "algorithms" and "sizes" are required.
inline BenchPlan plan_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("bench plan must be a JSON object");
  static const char* known[] = {"algorithms", "kind",      "graph_kind",     "sizes",
                                "noise_levels", "trials",  "seed_base",      "tolerance",
                                "max_iterations", "sm_cap"};
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) ==
        std::end(known)) {
      throw ParseError("bench plan: unknown key '" + key + "'");
    }
  }
  BenchPlan plan;
  try {
    for (const auto& name : j.at("algorithms")) {
      const auto algo = parse_algorithm(name.get<std::string>());
      if (!algo) throw ParseError("bench plan: unknown algorithm '" + name.get<std::string>() + "'");
      plan.algorithms.push_back(*algo);
    }
    const char* kind_key = j.contains("kind") ? "kind" : "graph_kind";
    if (j.contains(kind_key)) {
      const auto kind = parse_graph_kind(j.at(kind_key).get<std::string>());
      if (!kind) throw ParseError("bench plan: unknown graph kind");
      plan.kind = *kind;
    }
    plan.sizes = j.at("sizes").get<std::vector<std::size_t>>();
    if (j.contains("noise_levels")) plan.noise_levels = j.at("noise_levels").get<std::vector<double>>();
    if (j.contains("trials")) plan.trials = j.at("trials").get<std::size_t>();
    if (j.contains("seed_base")) plan.seed_base = j.at("seed_base").get<std::uint64_t>();
    if (j.contains("tolerance")) plan.power.tolerance = j.at("tolerance").get<double>();
    if (j.contains("max_iterations")) plan.power.max_iterations = j.at("max_iterations").get<std::size_t>();
    if (j.contains("sm_cap")) plan.sm_cap = j.at("sm_cap").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bench plan: ") + e.what());
  }
  try {
    plan.validate();
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
  return plan;
}

inline BenchPlan load_plan(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return plan_from_json(j);
}

struct BenchRecord {
  Algorithm algorithm = Algorithm::lisa;
  GraphKind kind = GraphKind::dense_weighted;
  std::size_t n = 0;
  double noise_level = 0.0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  /// NaN for failed runs.
  double accuracy = std::numeric_limits<double>::quiet_NaN();
  double seconds = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  /// Empty on success, else the failure message.
  std::string error;

  bool failed() const noexcept { return !error.empty(); }
};

/// Fraction of sources i with result(i) == truth(i).
inline double accuracy(const Matching& result, const Matching& truth) {
  if (result.source_size() != truth.source_size()) {
    throw DimensionError("accuracy: matchings have " + std::to_string(result.source_size()) +
                         " and " + std::to_string(truth.source_size()) + " sources");
  }
  if (result.assignment.empty()) throw DimensionError("accuracy: empty matching");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < result.assignment.size(); ++i)
    hits += result.assignment[i] == truth.assignment[i];
  return static_cast<double>(hits) / static_cast<double>(result.assignment.size());
}

/// Instance seed of one trial. Independent of the algorithm list.
inline std::uint64_t trial_seed(std::uint64_t seed_base, GraphKind kind, std::size_t n,
                                double level, std::size_t trial) {
  return hash64({seed_base, static_cast<std::uint64_t>(kind), n, bits_of(level), trial});
}

using BenchProgress = std::function<void(std::size_t done, std::size_t total)>;

/// Default worker count: GM_THREADS when set to a positive integer, else the
/// number of logical cores.
inline std::size_t default_threads() {
  if (const char* env = std::getenv("GM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Runs every (size, level, trial) instance through every algorithm. Records
/// come out ordered by size, level, trial, then plan algorithm order,
/// whatever the thread count. Failed runs become records with `error` set.
inline std::vector<BenchRecord> run_plan(const BenchPlan& plan, std::size_t threads = 1,
                                         const BenchProgress& progress = {}) {
  plan.validate();
  struct Task {
    std::size_t n;
    double level;
    std::size_t trial;
  };
  std::vector<Task> tasks;
  for (std::size_t n : plan.sizes)
    for (double level : plan.noise_levels)
      for (std::size_t t = 0; t < plan.trials; ++t) tasks.push_back({n, level, t});

  const std::size_t per_task = plan.algorithms.size();
  std::vector<BenchRecord> records(tasks.size() * per_task);
  MatcherOptions opts;
  opts.power = plan.power;
  opts.sm_cap = plan.sm_cap;

  auto run_task = [&](std::size_t ti) {
    const Task& task = tasks[ti];
    const std::uint64_t seed = trial_seed(plan.seed_base, plan.kind, task.n, task.level, task.trial);
    BenchRecord base;
    base.kind = plan.kind;
    base.n = task.n;
    base.noise_level = task.level;
    base.trial = task.trial;
    base.seed = seed;

    std::optional<GraphInstance> inst;
    std::string gen_error;
    try {
      inst = make_instance(plan.kind, task.n, seed, task.level);
    } catch (const std::exception& e) {
      gen_error = std::string("generation: ") + e.what();
    }
    for (std::size_t k = 0; k < per_task; ++k) {
      BenchRecord r = base;
      r.algorithm = plan.algorithms[k];
      if (!inst) {
        r.error = gen_error;
      } else {
        try {
          const MatchResult res = run_matcher(r.algorithm, inst->a, inst->b, opts);
          r.accuracy = accuracy(res.matching, *inst->ground_truth);
          r.seconds = res.wall_seconds;
          r.iterations = res.iterations;
          r.converged = res.converged;
        } catch (const std::exception& e) {
          r.error = e.what();
        }
      }
      records[ti * per_task + k] = std::move(r);
    }
  };

  std::atomic<std::size_t> next{0};
  std::size_t done = 0;
  std::mutex progress_mutex;
  auto worker = [&] {
    for (std::size_t ti = next++; ti < tasks.size(); ti = next++) {
      run_task(ti);
      std::lock_guard lock(progress_mutex);
      ++done;
      if (progress) progress(done, tasks.size());
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, tasks.size());
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  return records;
}

inline constexpr const char* kCsvHeader =
    "algo,kind,n,noise_level,trial,seed,accuracy,seconds,iterations,converged";

/// One row per record. Failed runs print accuracy "nan" and converged "error".
inline void write_csv(const std::vector<BenchRecord>& records, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << to_string(r.algorithm) << ',' << to_string(r.kind) << ',' << r.n << ','
        << format_real(r.noise_level) << ',' << r.trial << ',' << r.seed << ','
        << (r.failed() ? std::string("nan") : format_real(r.accuracy)) << ','
        << format_real(r.seconds) << ',' << r.iterations << ','
        << (r.failed() ? "error" : (r.converged ? "true" : "false")) << '\n';
  }
}

inline void write_csv(const std::vector<BenchRecord>& records, const std::filesystem::path& path) {
  auto out = detail::open_out(path);
  write_csv(records, out);
  detail::finish(out, path);
}

}  // namespace lisa
