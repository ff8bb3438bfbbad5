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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit status if
// any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lisa/lisa.hpp"
#include "oracles.hpp"

namespace {

using lisa::AffinityMatrix;
using lisa::Algorithm;
using lisa::GraphKind;
using lisa::Matching;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    if (pass) detail << "first failure: " << why << "; ";
    pass = false;
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size() / 2;
  return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

AffinityMatrix from_rows(std::size_t n, std::vector<double> v) {
  return AffinityMatrix::dense(n, std::move(v));
}

std::string kind_name(GraphKind k) { return std::string(lisa::to_string(k)); }

// 1. Exact recovery of the hidden permutation.
Outcome isomorphism_recovery() {
  Outcome o;
  const auto t0 = Clock::now();
  std::size_t runs = 0;
  for (std::size_t n : {30u, 100u, 150u}) {
    for (std::size_t trial = 0; trial < 20; ++trial) {
      const auto seed = lisa::trial_seed(1, GraphKind::dense_weighted, n, 0.0, trial);
      const auto inst = lisa::make_instance(GraphKind::dense_weighted, n, seed);
      for (auto algo : {Algorithm::lisa, Algorithm::sm, Algorithm::smkb}) {
        const auto r = lisa::run_matcher(algo, inst.a, inst.b);
        ++runs;
        const double acc = lisa::accuracy(r.matching, *inst.ground_truth);
        if (acc != 1.0) {
          o.fail(std::string(lisa::to_string(algo)) + " n=" + std::to_string(n) + " trial " +
                 std::to_string(trial) + " accuracy " + lisa::format_real(acc));
        }
      }
    }
  }
  const double small_seconds = seconds_since(t0);
  for (std::size_t n : {500u, 2000u}) {
    for (auto kind : {GraphKind::dense_weighted, GraphKind::sparse_weighted, GraphKind::sparse_binary}) {
      for (std::size_t trial = 0; trial < 20; ++trial) {
        const auto inst = lisa::make_instance(kind, n, lisa::trial_seed(1, kind, n, 0.0, trial));
        const auto r = lisa::lisa_match(inst.a, inst.b);
        ++runs;
        const double acc = lisa::accuracy(r.matching, *inst.ground_truth);
        if (acc != 1.0) {
          o.fail("lisa " + kind_name(kind) + " n=" + std::to_string(n) + " trial " +
                 std::to_string(trial) + " accuracy " + lisa::format_real(acc));
        }
      }
    }
  }
  o.detail << runs << " runs, all accuracy 1 required; n<=150 block " << lisa::format_real(std::round(small_seconds * 10) / 10)
           << " s, total " << lisa::format_real(std::round(seconds_since(t0) * 10) / 10) << " s";
  return o;
}

// 2. SM-KB vs LiSA running time at n = 1000.
Outcome speedup_ordering() {
  Outcome o;
  std::vector<double> t_lisa, t_smkb;
  for (std::size_t trial = 0; trial < 5; ++trial) {
    const auto inst = lisa::make_instance(GraphKind::dense_weighted, 1000,
                                          lisa::trial_seed(2, GraphKind::dense_weighted, 1000, 0.0, trial));
    const auto a = lisa::lisa_match(inst.a, inst.b);
    const auto k = lisa::smkb_match(inst.a, inst.b);
    t_lisa.push_back(a.wall_seconds);
    t_smkb.push_back(k.wall_seconds);
  }
  const double ml = median(t_lisa), mk = median(t_smkb);
  const double ratio = mk / ml;
  o.detail << "median lisa " << ml << " s, median smkb " << mk << " s, ratio " << ratio
           << " (need >= 10 and lisa < 1 s)";
  if (!(ratio >= 10.0)) o.fail("ratio below 10");
  if (!(ml < 1.0)) o.fail("lisa not under 1 s");
  return o;
}

// 3. LiSA dense running time grows about quadratically.
Outcome quadratic_scaling() {
  Outcome o;
  auto median_time = [](std::size_t n) {
    std::vector<double> t;
    // Untimed warm-up so the first trial does not pay for page faults alone.
    {
      const auto warm = lisa::make_instance(GraphKind::dense_weighted, n, 12345);
      lisa::lisa_match(warm.a, warm.b);
    }
    for (std::size_t trial = 0; trial < 5; ++trial) {
      const auto inst = lisa::make_instance(GraphKind::dense_weighted, n,
                                            lisa::trial_seed(3, GraphKind::dense_weighted, n, 0.0, trial));
      t.push_back(lisa::lisa_match(inst.a, inst.b).wall_seconds);
    }
    return median(t);
  };
  const double t1 = median_time(1000), t2 = median_time(2000);
  o.detail << "median t(1000) " << t1 << " s, t(2000) " << t2 << " s, ratio " << t2 / t1 << " (need <= 6)";
  if (!(t2 / t1 <= 6.0)) o.fail("ratio above 6");
  return o;
}

// 4. LiSA accuracy under noise at n = 500.
Outcome noise_degradation() {
  Outcome o;
  const std::vector<double> levels{0, 5, 10, 20};
  std::vector<double> means;
  for (double level : levels) {
    double sum = 0.0;
    for (std::size_t trial = 0; trial < 20; ++trial) {
      const auto inst = lisa::make_instance(GraphKind::dense_weighted, 500,
                                            lisa::trial_seed(4, GraphKind::dense_weighted, 500, level, trial), level);
      sum += lisa::accuracy(lisa::lisa_match(inst.a, inst.b).matching, *inst.ground_truth);
    }
    means.push_back(sum / 20.0);
  }
  o.detail << "mean accuracy at levels {0,5,10,20}:";
  for (double m : means) o.detail << ' ' << m;
  if (means[0] != 1.0) o.fail("level 0 not perfect");
  for (std::size_t k = 1; k < means.size(); ++k)
    if (means[k] > means[k - 1] + 0.02) o.fail("accuracy rose by more than 0.02 at level index " + std::to_string(k));
  return o;
}

// 5. Sort assignment vs exhaustive assignment.
Outcome assignment_optimality() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(5);
  double worst = 0.0;
  std::size_t unbalanced = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + rng() % 8;
    const std::size_t n = trial % 2 == 0 ? m : 1 + rng() % m;
    unbalanced += n < m;
    const double lo = trial % 4 < 2 ? -1.0 : 0.0;
    std::uniform_real_distribution<double> u(lo, 1.0);
    std::vector<double> phi(n), phi_t(m);
    for (auto& v : phi) v = u(rng);
    for (auto& v : phi_t) v = u(rng);
    const auto profit = lisa::ProfitMatrix::outer(phi, phi_t);
    const Matching got = lisa::one_dim_assign(phi, phi_t);
    if (!lisa::validate_matching(got)) o.fail("invalid matching");
    const double diff = std::abs(lisa::assignment_objective(profit, got) - lisa::brute_force_lap(profit).second);
    worst = std::max(worst, diff);
  }
  const double secs = seconds_since(t0);
  o.detail << "200 pairs (" << unbalanced << " unbalanced), worst gap " << worst << ", " << secs << " s";
  if (!(worst <= 1e-10)) o.fail("objective gap above 1e-10");
  if (!(secs < 5.0)) o.fail("slower than 5 s");
  return o;
}

// 6. Kronecker-vec identity and SM / SM-KB trajectory agreement.
Outcome kronecker_identity() {
  Outcome o;
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_identity = 0.0, worst_trajectory = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 8;
    const std::size_t m = n + rng() % (64 / n - n + 1);
    const auto ad = oracle::random_symmetric(n, rng);
    const auto bd = oracle::random_symmetric(m, rng);
    const auto a = from_rows(n, ad), b = from_rows(m, bd);
    const lisa::KroneckerAffinity w(a, b);
    std::vector<double> x(n * m), y(n * m), xr(n * m);
    for (auto& v : x) v = u(rng);
    w.multiply(x, y);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) xr[i * m + j] = x[i + j * n];
    const auto axb = oracle::matmul(oracle::matmul(ad, xr, n, n, m), bd, n, m, m);
    for (std::size_t r = 0; r < n * m; ++r)
      worst_identity = std::max(worst_identity, std::abs(y[r] - axb[(r % n) * m + r / n]));

    std::vector<std::vector<double>> sm_steps, kb_steps;
    lisa::sm_match(a, b, {}, lisa::kDefaultSmCap, [&](std::size_t, std::span<const double> s) {
      sm_steps.emplace_back(s.begin(), s.end());
    });
    lisa::smkb_match(a, b, {}, [&](std::size_t, std::span<const double> s) {
      kb_steps.emplace_back(s.begin(), s.end());
    });
    if (sm_steps.size() != kb_steps.size()) {
      o.fail("iteration counts differ in trial " + std::to_string(trial));
      continue;
    }
    for (std::size_t k = 0; k < sm_steps.size(); ++k)
      for (std::size_t e = 0; e < sm_steps[k].size(); ++e)
        worst_trajectory = std::max(worst_trajectory, std::abs(sm_steps[k][e] - kb_steps[k][e]));
  }
  o.detail << "worst |W vec(X) - vec(AXB)| " << worst_identity << " (<= 1e-12), worst trajectory gap "
           << worst_trajectory << " (<= 1e-10)";
  if (!(worst_identity <= 1e-12)) o.fail("identity gap");
  if (!(worst_trajectory <= 1e-10)) o.fail("trajectory gap");
  return o;
}

// 7. Leading-eigenvector perturbation bound.
Outcome perturbation_bound() {
  Outcome o;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0), frac(0.05, 1.0);
  lisa::PowerConfig tight;
  tight.tolerance = 1e-13;
  tight.max_iterations = 1000000;
  const std::size_t n = 20;
  int held = 0;
  double worst_ratio = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    auto a = oracle::random_symmetric(n, rng);
    // Positive shift: eigenvectors unchanged, every eigenvalue positive.
    for (std::size_t i = 0; i < n; ++i) a[i * n + i] += static_cast<double>(n) / 2.0;
    const auto am = from_rows(n, a);
    const double rho = lisa::eigengap(am, tight);
    std::vector<double> e(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) e[i * n + j] = e[j * n + i] = u(rng);
    double fro = 0.0;
    for (double v : e) fro += v * v;
    fro = std::sqrt(fro);
    // Halve until sqrt(2) ||E|| <= rho / 2, then shrink by a random factor.
    double scale = 1.0;
    while (std::sqrt(2.0) * scale * fro > rho / 2.0) scale /= 2.0;
    scale *= frac(rng);
    std::vector<double> perturbed(n * n);
    for (std::size_t k = 0; k < n * n; ++k) {
      e[k] *= scale;
      perturbed[k] = a[k] + e[k];
    }
    const double e_fro = fro * scale;
    const auto bound = lisa::perturbation_bound(e_fro, rho);
    if (!bound) {
      o.fail("bound inapplicable after scaling");
      continue;
    }
    // Perturbed weights may dip below zero; the oracle eigensolver handles that.
    const auto phi = lisa::unit_vector(lisa::power_method(am, tight).values);
    const auto eig = oracle::jacobi(perturbed, n);
    std::vector<double> phi_t = eig.vectors[0];
    lisa::align_sign(phi, phi_t);
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) diff += (phi[i] - phi_t[i]) * (phi[i] - phi_t[i]);
    diff = std::sqrt(diff);
    worst_ratio = std::max(worst_ratio, diff / *bound);
    if (diff <= *bound) ++held;
  }
  o.detail << held << "/100 trials within the bound, worst diff/bound " << worst_ratio;
  if (held != 100) o.fail("bound violated");
  return o;
}

// 8. Delaunay against the empty-circumcircle oracle, and planarity / connectivity.
Outcome delaunay_oracle() {
  Outcome o;
  std::size_t compared = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t n = 3 + (seed * 7) % 48;
    const auto p = lisa::gen_points(n, 800 + seed);
    const auto edges = lisa::delaunay_edges(p);
    if (std::set<lisa::Edge>(edges.begin(), edges.end()) != oracle::delaunay_edges(p)) {
      o.fail("edge set mismatch for seed " + std::to_string(seed));
    }
    ++compared;
  }
  std::size_t checked = 0;
  for (std::size_t n : {3u, 4u, 10u, 100u, 1000u, 5000u, 10000u}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto p = lisa::gen_points(n, 900 + seed);
      const auto edges = lisa::delaunay_edges(p);
      if (edges.size() > 3 * n - 6 && n >= 3) o.fail("3n-6 bound at n=" + std::to_string(n));
      oracle::UnionFind uf(n);
      std::size_t comps = n;
      for (const auto& [i, j] : edges) comps -= uf.unite(i, j);
      if (comps != 1) o.fail("disconnected at n=" + std::to_string(n));
      ++checked;
    }
  }
  o.detail << compared << " sets matched the O(n^4) oracle, " << checked
           << " instances up to n=10000 planar-bounded and connected";
  return o;
}

// 9. Bench output is reproducible across runs and thread counts.
Outcome determinism() {
  Outcome o;
  auto strip_seconds = [](const std::string& csv) {
    std::istringstream in(csv);
    std::string line, out;
    while (std::getline(in, line)) {
      std::vector<std::string> cells;
      std::stringstream ss(line);
      std::string c;
      while (std::getline(ss, c, ',')) cells.push_back(c);
      cells.erase(cells.begin() + 7);
      for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
      out += '\n';
    }
    return out;
  };
  std::size_t rows = 0;
  for (auto kind : {GraphKind::dense_weighted, GraphKind::sparse_weighted, GraphKind::sparse_binary}) {
    lisa::BenchPlan plan;
    plan.algorithms = {Algorithm::lisa, Algorithm::sm, Algorithm::smkb};
    plan.kind = kind;
    plan.sizes = {20, 40};
    plan.noise_levels = {0, 10};
    plan.trials = 3;
    plan.seed_base = 9;
    std::vector<std::string> csvs;
    for (std::size_t threads : {1u, 1u, 4u}) {
      std::ostringstream out;
      const auto records = lisa::run_plan(plan, threads);
      rows += records.size();
      lisa::write_csv(records, out);
      csvs.push_back(strip_seconds(out.str()));
    }
    if (csvs[0] != csvs[1]) o.fail(kind_name(kind) + ": two single-thread runs differ");
    if (csvs[0] != csvs[2]) o.fail(kind_name(kind) + ": 1 vs 4 threads differ");
  }
  o.detail << rows << " rows over 3 kinds x (1, 1, 4 threads), compared without the seconds column";
  return o;
}

// 10. SNAP-format fixture, self-match of a permuted copy.
Outcome real_network_smoke() {
  Outcome o;
  const auto path = std::filesystem::path(LISA_TEST_DATA_DIR) / "synthetic_100.txt";
  lisa::EdgeListOptions opts;
  opts.weighted = true;
  const auto list = lisa::load_edge_list(path, opts);
  const auto& a = list.matrix;
  // Fixture precondition: leading-eigenvector entries are distinct.
  const auto phi = lisa::power_method(a).values;
  std::vector<double> sorted = phi;
  std::sort(sorted.begin(), sorted.end());
  double min_gap = 1.0;
  for (std::size_t i = 1; i < sorted.size(); ++i) min_gap = std::min(min_gap, sorted[i] - sorted[i - 1]);
  const auto [b, truth] = lisa::permute_instance(a, 10);
  const double acc = lisa::accuracy(lisa::lisa_match(a, b).matching, truth);
  o.detail << a.order() << " nodes, " << a.stored_entries() << " edges, min score gap " << min_gap
           << ", accuracy " << acc;
  if (!(min_gap > 0.0)) o.fail("repeated eigenvector entries");
  if (acc != 1.0) o.fail("accuracy below 1");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"isomorphism recovery", isomorphism_recovery},
      {"speedup ordering", speedup_ordering},
      {"quadratic scaling", quadratic_scaling},
      {"noise degradation shape", noise_degradation},
      {"assignment optimality", assignment_optimality},
      {"kronecker vec identity", kronecker_identity},
      {"perturbation bound", perturbation_bound},
      {"delaunay oracle", delaunay_oracle},
      {"determinism", determinism},
      {"edge-list smoke test", real_network_smoke},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    failures += !o.pass;
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first,
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
