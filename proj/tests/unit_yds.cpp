#include <doctest.h>

#include "helpers.hpp"
#include "sspd/yds.hpp"

#include <cmath>
#include <random>
#include <limits>

using namespace sspd;
using test::make_instance;

TEST_CASE("[yds] blackout timeline bookkeeping") {
  BlackoutTimeline tl;
  tl.add(2, 4);
  tl.add(6, 8);
  tl.add(3, 7); // merges everything into [2,8)
  REQUIRE(tl.intervals().size() == 1);
  CHECK(tl.overlap(0, 10) == doctest::Approx(6.0));
  CHECK(tl.available(0, 10) == doctest::Approx(4.0));
  CHECK(tl.skip_right(3) == doctest::Approx(8.0));
  CHECK(tl.skip_right(1) == doctest::Approx(1.0));
  CHECK(tl.skip_left(5) == doctest::Approx(2.0));
  CHECK(tl.skip_left(9) == doctest::Approx(9.0));

  std::vector<std::pair<double, double>> pieces;
  const double end = tl.advance(1, 3, &pieces); // 1 unit before, 2 after the blackout
  CHECK(end == doctest::Approx(10.0));
  REQUIRE(pieces.size() == 2);
  CHECK(pieces[0].first == doctest::Approx(1.0));
  CHECK(pieces[0].second == doctest::Approx(2.0));
  CHECK(pieces[1].first == doctest::Approx(8.0));
  CHECK(pieces[1].second == doctest::Approx(10.0));
}

TEST_CASE("[yds] single job runs over its whole window") {
  EnergyModel m(2, 1, 1);
  std::vector<Job> jobs = {{1, 0, 2, 2}};
  auto s = yds_schedule(m, jobs, -10, 10);
  REQUIRE(s.has_value());
  REQUIRE(s->runs.size() == 1);
  CHECK(s->runs[0].speed == doctest::Approx(1.0));
  CHECK(s->runs[0].start == doctest::Approx(0.0));
  CHECK(s->runs[0].end == doctest::Approx(2.0));
  CHECK(s->speed_cost == doctest::Approx(2.0));
}

TEST_CASE("[yds] nested windows split around the blacked-out peak") {
  // independent check: with job 2 pinned inside job 1's window, the speed
  // cost as a function of job 2's slice length len is
  //   16/len + 4/(4-len),  minimal at len = 2
  double best = std::numeric_limits<double>::infinity();
  for (double len = 0.01; len <= 2.0 + 1e-12; len += 0.001)
    best = std::min(best, 16.0 / len + 4.0 / (4.0 - len));
  CHECK(best == doctest::Approx(10.0).epsilon(1e-3));

  EnergyModel m(2, 1, 1);
  std::vector<Job> jobs = {{1, 0, 4, 2}, {2, 1, 3, 4}};
  auto s = yds_schedule(m, jobs, 0, 4);
  REQUIRE(s.has_value());
  CHECK(s->speed_cost == doctest::Approx(10.0));
  REQUIRE(s->rounds.size() == 2);
  CHECK(s->rounds[0].dens == doctest::Approx(2.0));
  CHECK(s->rounds[1].dens == doctest::Approx(1.0));
  // job 1 runs in two pieces around [1,3)
  int job1_pieces = 0;
  for (const auto& run : s->runs)
    if (run.job == 1) {
      ++job1_pieces;
      CHECK(run.speed == doctest::Approx(1.0));
    }
  CHECK(job1_pieces == 2);
}

TEST_CASE("[yds] disjoint singletons get their own rounds") {
  EnergyModel m(2, 1, 1);
  std::vector<Job> jobs = {{1, 0, 1, 1}, {2, 2, 3, 1}};
  auto s = yds_schedule(m, jobs, 0, 3);
  REQUIRE(s.has_value());
  CHECK(s->speed_cost == doctest::Approx(2.0));
  CHECK(s->runs.size() == 2);
}

TEST_CASE("[yds] empty restricted window is infeasible") {
  EnergyModel m(2, 1, 1);
  std::vector<Job> jobs = {{1, 0, 2, 1}};
  CHECK(!yds_schedule(m, jobs, 2, 5).has_value());
  CHECK(yds_schedule(m, jobs, 1, 5).has_value());
}

TEST_CASE("[yds] round densities never increase and beat each job's own density") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0, 1);
  for (int t = 0; t < 50; ++t) {
    const int n = 1 + static_cast<int>(rng() % 6);
    std::vector<double> rel(static_cast<size_t>(n));
    for (double& x : rel) x = 10 * unit(rng);
    std::sort(rel.begin(), rel.end());
    std::vector<Job> jobs;
    double dprev = 0;
    for (int k = 0; k < n; ++k) {
      Job j;
      j.id = k + 1;
      j.release = rel[static_cast<size_t>(k)];
      j.deadline = std::max(dprev, j.release + 0.3 + 3 * unit(rng));
      dprev = j.deadline;
      j.workload = 0.1 + 2 * unit(rng);
      jobs.push_back(j);
    }
    auto s = yds_schedule(EnergyModel(2, 1, 1), jobs, -1, dprev + 1);
    REQUIRE(s.has_value());
    for (size_t k = 1; k < s->rounds.size(); ++k)
      CHECK(s->rounds[k].dens <= s->rounds[k - 1].dens * (1 + 1e-9));
    // each job's execution speed is at least the density of its own window
    std::vector<double> speed(static_cast<size_t>(n) + 1, 0);
    for (const auto& run : s->runs) speed[static_cast<size_t>(run.job)] = run.speed;
    for (const Job& j : jobs)
      CHECK(speed[static_cast<size_t>(j.id)] >=
            j.workload / (j.deadline - j.release) * (1 - 1e-9));
  }
}

TEST_CASE("[yds] extraction: all sparse leaves a single gap") {
  Instance inst = make_instance(2, 1, 4, {{0, 2, 1}, {1, 5, 2}}); // s* = 2
  Decomposition dec = extract_dense_regions(inst);
  CHECK(dec.dense_runs.empty());
  REQUIRE(dec.gaps.size() == 1);
  CHECK(dec.gaps[0].lo == 1);
  CHECK(dec.gaps[0].hi == 2);
  CHECK(dec.gaps[0].left == doctest::Approx(inst.sentinel_left()));
  CHECK(dec.gaps[0].right == doctest::Approx(inst.sentinel_right()));
}

TEST_CASE("[yds] extraction: one dense job becomes a fragment") {
  Instance inst = make_instance(2, 1, 1, {{0, 1, 5}}); // density 5 >= s* = 1
  Decomposition dec = extract_dense_regions(inst);
  REQUIRE(dec.dense_runs.size() == 1);
  CHECK(dec.dense_runs[0].speed == doctest::Approx(5.0));
  REQUIRE(dec.gaps.size() == 2);
  CHECK(dec.gaps[0].empty());
  CHECK(dec.gaps[1].empty());
}

TEST_CASE("[yds] extraction: remaining gaps contain no dense interval") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unit(0, 1);
  for (int t = 0; t < 40; ++t) {
    const int n = 2 + static_cast<int>(rng() % 7);
    std::vector<double> rel(static_cast<size_t>(n));
    for (double& x : rel) x = 3.0 * n * unit(rng);
    std::sort(rel.begin(), rel.end());
    std::vector<Job> jobs;
    double dprev = 0;
    for (int k = 0; k < n; ++k) {
      Job j;
      j.release = rel[static_cast<size_t>(k)];
      j.deadline = std::max(dprev, j.release + 0.4 + 3 * unit(rng));
      dprev = j.deadline;
      j.workload = (0.2 + 1.4 * unit(rng)) * (j.deadline - j.release);
      jobs.push_back(j);
    }
    Instance inst(EnergyModel(2, 1, 1), jobs);
    Decomposition dec = extract_dense_regions(inst);

    // partition check
    size_t assigned = 0;
    for (const auto& gap : dec.gaps) assigned += gap.jobs.size();
    std::vector<char> in_dense(static_cast<size_t>(n) + 1, 0);
    for (const auto& run : dec.dense_runs) in_dense[static_cast<size_t>(run.job)] = 1;
    size_t dense_jobs = 0;
    for (int k = 1; k <= n; ++k) dense_jobs += in_dense[static_cast<size_t>(k)];
    CHECK(assigned + dense_jobs == static_cast<size_t>(n));

    const double sstar = inst.model().critical_speed;
    for (const auto& run : dec.dense_runs) CHECK(run.speed >= sstar * (1 - 1e-9));
    for (const auto& gap : dec.gaps) {
      for (size_t a = 0; a < gap.jobs.size(); ++a)
        for (size_t b = a; b < gap.jobs.size(); ++b) {
          const double t0 = gap.jobs[a].release;
          const double t1 = gap.jobs[b].deadline;
          if (t0 < t1) CHECK(density(gap.jobs, t0, t1) < sstar);
        }
    }
  }
}
