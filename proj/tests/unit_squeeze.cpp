#include <doctest.h>

#include "helpers.hpp"
#include "sspd/oracle.hpp"
#include "sspd/squeeze.hpp"

#include <cmath>
#include <limits>

using namespace sspd;
using test::make_instance;

namespace {

// elementwise comparison against the from-scratch peeling
void check_table(const Instance& inst) {
  Subinstance whole = make_subinstance(inst, 1, inst.size());
  SqueezeStats stats;
  YTable y = build_y_table(inst.model(), whole, &stats);
  const int m = inst.size();
  for (int i = 1; i <= m + 1; ++i) {
    for (int j = i - 1; j <= m; ++j) {
      const double a = y.get(i, j);
      const double b = yds_from_scratch_Y(inst.model(), whole, i, j);
      INFO("pair (", i, ",", j, ")");
      if (std::isinf(b)) {
        CHECK(std::isinf(a));
      } else {
        CHECK(a == doctest::Approx(b).epsilon(1e-9));
      }
    }
  }
  CHECK(stats.row_bound_ok);
  CHECK(stats.split_fallbacks == 0);
}

} // namespace

TEST_CASE("[squeeze] split speed formula") {
  Instance inst = make_instance(2, 1, 1, {{0, 6, 1}, {3, 7, 2}});
  GapView g = make_gap_view(inst.model(), make_subinstance(inst, 1, 2));
  // d_1 = 6, w_2 = 2, u = 10
  CHECK(split_speed(g, 1, 2, 10.0) == doctest::Approx(0.5));

  Instance inst2 = make_instance(2, 1, 1, {{0, 2, 1}, {0, 3, 1}, {0, 4, 1}});
  GapView g2 = make_gap_view(inst2.model(), make_subinstance(inst2, 1, 3));
  CHECK(split_speed(g2, 1, 3, 4.0) == doctest::Approx(1.0));
  CHECK(split_speed(g2, 1, 3, 4.0) > 0);
  CHECK_THROWS_AS(split_speed(g2, 1, 3, 1.0), InternalError); // u before d_1
}

TEST_CASE("[squeeze] empty pair value is the idle dissipation") {
  Instance inst = make_instance(2, 1, 1, {{0, 2, 1}, {5, 6, 1}});
  Subinstance whole = make_subinstance(inst, 1, 2);
  YTable y = build_y_table(inst.model(), whole);
  CHECK(y.get(3, 2) == doctest::Approx(inst.sentinel_right() - 6.0));
  CHECK(y.get(2, 1) == doctest::Approx(5.0 - 2.0)); // gap of 3 at g = 1
}

TEST_CASE("[squeeze] single-job table matches the oracle") {
  Instance inst = make_instance(2, 10, 1, {{0, 2, 1}});
  check_table(inst);
  Subinstance whole = make_subinstance(inst, 1, 1);
  YTable y = build_y_table(inst.model(), whole);
  // speed 0.5 over [0,2) plus dissipation over [-10, 12)
  CHECK(y.get(1, 1) == doctest::Approx(0.5 + 22.0));
}

TEST_CASE("[squeeze] equal-speed abutting seed blocks act as one block") {
  Instance inst = make_instance(2, 1, 1, {{0, 2, 1}, {0, 2, 1}});
  Subinstance whole = make_subinstance(inst, 1, 2);
  GapView g = make_gap_view(inst.model(), whole);
  YTable y(2);
  for (int i = 1; i <= 3; ++i) y.set(i, i - 1, 0);
  // hand-built seed: two abutting blocks at the same speed
  std::vector<SqueezeBlock> seed = {{1, 1, 0, 1, 1.0, 1.0}, {2, 2, 1, 2, 1.0, 1.0}};
  squeeze_row(g, 2, seed, y);
  CHECK(y.get(1, 2) == doctest::Approx(yds_from_scratch_Y(inst.model(), whole, 1, 2)));
  CHECK(y.get(2, 2) == doctest::Approx(yds_from_scratch_Y(inst.model(), whole, 2, 2)));
}

TEST_CASE("[squeeze] a faster abutting block merges during the squeeze") {
  // two-block schedule where the second block is faster and released later
  Instance inst = make_instance(2, 1, 1, {{0, 10, 1}, {6, 10, 8}});
  check_table(inst); // exercises the merge path
  Subinstance whole = make_subinstance(inst, 1, 2);
  auto s = yds_schedule(inst.model(), whole.jobs, whole.left, whole.right);
  REQUIRE(s.has_value());
  auto blocks = schedule_to_blocks(whole, *s);
  REQUIRE(blocks.size() == 2);
  CHECK(blocks[0].s < blocks[1].s);
  CHECK(blocks[0].u == blocks[1].t);
}

TEST_CASE("[squeeze] infeasible pairs from release and deadline ties") {
  Instance inst = make_instance(2, 1, 1, {{0, 3, 1}, {1, 3, 1}, {1, 8, 2}});
  // d_1 == d_2 makes (2, j) infeasible; r_2 == r_3 makes (i, 2) infeasible
  Subinstance whole = make_subinstance(inst, 1, 3);
  YTable y = build_y_table(inst.model(), whole);
  CHECK(std::isinf(y.get(2, 2)));
  CHECK(std::isinf(y.get(2, 3)));
  CHECK(std::isinf(y.get(1, 2)));
  CHECK(!std::isinf(y.get(1, 1)));
  CHECK(!std::isinf(y.get(3, 3)));
  check_table(inst);
}

TEST_CASE("[squeeze] random tables match the from-scratch oracle") {
  for (uint64_t seed = 1; seed <= 40; ++seed) {
    Instance inst = random_agreeable_instance(seed, 1 + static_cast<int>(seed % 10));
    check_table(inst);
  }
}

TEST_CASE("[squeeze] table transposes under time reversal") {
  for (uint64_t seed = 50; seed < 62; ++seed) {
    Instance inst = random_agreeable_instance(seed, 2 + static_cast<int>(seed % 7));
    Instance rev = reverse_instance(inst);
    const int n = inst.size();
    YTable y = build_y_table(inst.model(), make_subinstance(inst, 1, n));
    YTable yr = build_y_table(rev.model(), make_subinstance(rev, 1, n));
    for (int i = 1; i <= n + 1; ++i) {
      for (int j = i - 1; j <= n; ++j) {
        const double a = y.get(i, j);
        const double b = yr.get(n + 1 - j, n - i + 1);
        INFO("pair (", i, ",", j, ") seed ", seed);
        if (std::isinf(a)) {
          CHECK(std::isinf(b));
        } else {
          CHECK(a == doctest::Approx(b).epsilon(1e-9));
        }
      }
    }
  }
}

TEST_CASE("[squeeze] per-row event counts stay within three per job") {
  SqueezeStats stats;
  for (uint64_t seed = 100; seed < 130; ++seed) {
    Instance inst = random_agreeable_instance(seed, 2 + static_cast<int>(seed % 12));
    build_y_table(inst.model(), make_subinstance(inst, 1, inst.size()), &stats);
  }
  CHECK(stats.row_bound_ok);
  CHECK(stats.split_fallbacks == 0);
}
