#include <doctest.h>

#include "helpers.hpp"
#include "sspd/oracle.hpp"

#include <cmath>

using namespace sspd;
using test::make_instance;

TEST_CASE("[oracle] from-scratch Y on empty and infeasible pairs") {
  Instance inst = make_instance(2, 1, 1, {{0, 3, 1}, {1, 3, 1}, {4, 9, 1}});
  Subinstance whole = make_subinstance(inst, 1, 3);
  // empty pair: dissipation over [d_2, r_3) = [3, 4)
  CHECK(yds_from_scratch_Y(inst.model(), whole, 3, 2) == doctest::Approx(1.0));
  CHECK(std::isinf(yds_from_scratch_Y(inst.model(), whole, 2, 2))); // d_1 == d_2
}

TEST_CASE("[oracle] exhaustive recursion matches the solver on the worked instance") {
  Instance inst = make_instance(2, 10, 1, {{0, 2, 1}});
  CHECK(naive_dp(inst) == doctest::Approx(22.0));
  CHECK(solve(inst).total == doctest::Approx(22.0));
}

TEST_CASE("[oracle] exhaustive recursion equals the solver on random instances") {
  for (uint64_t seed = 1; seed <= 120; ++seed) {
    Instance inst = random_agreeable_instance(seed, 1 + static_cast<int>(seed % 9));
    const double fast = solve(inst).total;
    const double slow = naive_dp(inst);
    INFO("seed ", seed);
    CHECK(fast == doctest::Approx(slow).epsilon(1e-9));
  }
}

TEST_CASE("[oracle] grid search brackets the worked instance") {
  Instance inst = make_instance(2, 10, 1, {{0, 2, 1}});
  auto v = grid_oracle(inst, 0.05);
  REQUIRE(v.has_value());
  CHECK(*v >= 22.0 - 1e-9);
  CHECK(*v <= 22.0 * 1.02);
}

TEST_CASE("[oracle] refining the grid never hurts") {
  for (uint64_t seed = 40; seed < 52; ++seed) {
    Instance inst = random_agreeable_instance(seed, 1 + static_cast<int>(seed % 4));
    double delta = default_grid_delta(inst);
    double prev = std::numeric_limits<double>::infinity();
    for (int ref = 0; ref < 3; ++ref, delta /= 2) {
      auto v = grid_oracle(inst, delta);
      if (!v) continue;
      CHECK(*v <= prev + 1e-12);
      prev = *v;
    }
  }
}

TEST_CASE("[oracle] grid value stays above the solver") {
  for (uint64_t seed = 60; seed < 80; ++seed) {
    Instance inst = random_agreeable_instance(seed, 1 + static_cast<int>(seed % 5));
    const double opt = solve(inst).total;
    double delta = default_grid_delta(inst);
    for (int ref = 0; ref < 3; ++ref, delta /= 2) {
      auto v = grid_oracle(inst, delta);
      if (!v) continue;
      INFO("seed ", seed, " ref ", ref);
      CHECK(*v >= opt - 1e-9 * std::max(1.0, opt));
    }
  }
}

TEST_CASE("[oracle] too-coarse grids are reported, refining fixes them") {
  // two jobs sharing one window need an interior grid point
  Instance inst = make_instance(2, 1, 1, {{0, 1, 0.3}, {0, 1, 0.3}});
  const double span = inst.jobs().back().deadline - inst.jobs().front().release;
  CHECK(!grid_oracle(inst, 2 * span).has_value());
  CHECK(grid_oracle(inst, span / 2).has_value());
}

TEST_CASE("[oracle] perturbations never beat solver output") {
  for (uint64_t seed = 90; seed < 110; ++seed) {
    Instance inst = random_agreeable_instance(seed, 2 + static_cast<int>(seed % 10));
    SolveResult res = solve(inst);
    const auto rep = perturbation_sampler(inst, res.schedule, 400, seed);
    INFO("seed ", seed, " worst delta ", rep.worst_delta);
    CHECK(rep.worst_delta >= -1e-9 * std::max(1.0, res.total));
    CHECK(rep.applied > 0);
  }
}

TEST_CASE("[oracle] compressing a critical-speed run strictly costs energy") {
  // single job with plenty of slack runs at s* in the optimum; squeezing it
  // shorter must increase the cost
  Instance inst = make_instance(2, 0.5, 1, {{0, 10, 2}});
  SolveResult res = solve(inst);
  bool found = false;
  for (const Segment& seg : res.schedule.segments)
    if (seg.job == 1) {
      found = true;
      CHECK(seg.speed == doctest::Approx(1.0));
    }
  CHECK(found);
  const auto rep = perturbation_sampler(inst, res.schedule, 2000, 7);
  CHECK(rep.worst_delta >= 0.0 - 1e-12);
}

TEST_CASE("[oracle] generator yields valid, varied instances") {
  int with_ties = 0;
  for (uint64_t seed = 1; seed <= 60; ++seed) {
    Instance inst = random_agreeable_instance(seed, 1 + static_cast<int>(seed % 12));
    CHECK(is_agreeable(inst.jobs()));
    for (int k = 2; k <= inst.size(); ++k)
      if (inst.job(k).release == inst.job(k - 1).release ||
          inst.job(k).deadline == inst.job(k - 1).deadline)
        ++with_ties;
  }
  CHECK(with_ties > 0); // exact ties do occur
}
