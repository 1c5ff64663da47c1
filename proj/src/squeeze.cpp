#include "sspd/squeeze.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace sspd {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double coord_tol(double x) { return 1e-9 * std::max(1.0, std::abs(x)); }
} // namespace

GapView make_gap_view(const EnergyModel& m, const Subinstance& gap) {
  GapView g;
  g.model = &m;
  g.m = gap.size();
  const size_t n = static_cast<size_t>(g.m);
  g.R.assign(n + 2, 0.0);
  g.D.assign(n + 1, 0.0);
  g.Wp.assign(n + 1, 0.0);
  g.D[0] = gap.left;
  g.R[n + 1] = gap.right;
  for (size_t k = 0; k < n; ++k) {
    g.R[k + 1] = gap.jobs[k].release;
    g.D[k + 1] = gap.jobs[k].deadline;
    g.Wp[k + 1] = g.Wp[k] + gap.jobs[k].workload;
  }
  return g;
}

YTable::YTable(int m) : m_(m) {
  v_.assign(static_cast<size_t>(m + 1) * static_cast<size_t>(m + 1), kInf);
}

size_t YTable::idx(int i, int j) const {
  if (i < 1 || i > m_ + 1 || j < i - 1 || j > m_)
    throw InternalError("YTable: index out of range");
  return static_cast<size_t>(i - 1) * static_cast<size_t>(m_ + 1) + static_cast<size_t>(j);
}

double split_speed(const GapView& g, int k, int b, double u) {
  if (!(k >= 1 && k < b && b <= g.m)) throw InternalError("split_speed: bad indices");
  if (!(u > g.d(k))) throw InternalError("split_speed: block end not past the deadline");
  return g.wsum(k + 1, b) / (u - g.d(k));
}

SplitSpeedIndex::SplitSpeedIndex(const GapView& g, int j) : j_(j) {
  const size_t nj = static_cast<size_t>(j);
  off_.assign(nj + 2, 0);
  for (size_t b = 1; b <= nj; ++b) off_[b + 1] = off_[b] + (b - 1);
  const size_t total = off_[nj + 1];
  const double rbound = g.r(j + 1);
  for (int slot = 0; slot < 2; ++slot) {
    uval_[slot].assign(nj + 1, kInf);
    val_[slot].assign(total, kInf);
    arg_[slot].assign(total, -1);
  }
  for (int b = 1; b <= j; ++b) {
    uval_[0][static_cast<size_t>(b)] = std::min(g.d(b), rbound);
    uval_[1][static_cast<size_t>(b)] = (b < j) ? g.r(b + 1) : rbound;
    for (int slot = 0; slot < 2; ++slot) {
      const double u = uval_[slot][static_cast<size_t>(b)];
      double best = kInf;
      int besta = -1;
      for (int k = b - 1; k >= 1; --k) {
        if (g.d(k) < u) {
          const double v = g.wsum(k + 1, b) / (u - g.d(k));
          if (v <= best) {
            best = v;
            besta = k;
          }
        }
        val_[slot][off_[static_cast<size_t>(b)] + static_cast<size_t>(k - 1)] = best;
        arg_[slot][off_[static_cast<size_t>(b)] + static_cast<size_t>(k - 1)] = besta;
      }
    }
  }
}

std::pair<double, int> SplitSpeedIndex::min_from(const GapView& g, int i, int b, double u) const {
  if (i >= b) return {kInf, -1};
  for (int slot = 0; slot < 2; ++slot) {
    if (b <= j_ && uval_[slot][static_cast<size_t>(b)] == u) {
      const size_t at = off_[static_cast<size_t>(b)] + static_cast<size_t>(i - 1);
      return {val_[slot][at], arg_[slot][at]};
    }
  }
  ++fallbacks_;
  double best = kInf;
  int besta = -1;
  for (int k = i; k < b; ++k) {
    if (g.d(k) >= u) continue;
    const double v = g.wsum(k + 1, b) / (u - g.d(k));
    if (v < best) {
      best = v;
      besta = k;
    }
  }
  return {best, besta};
}

std::vector<SqueezeBlock> schedule_to_blocks(const Subinstance& gap, const YdsSchedule& s) {
  std::vector<SqueezeBlock> blocks;
  int prev_local = 0;
  for (const YdsRun& run : s.runs) {
    const int local = run.job - gap.lo + 1;
    if (local != prev_local + 1)
      throw InternalError("schedule_to_blocks: runs not one per job in index order");
    prev_local = local;
    const double w = gap.jobs[static_cast<size_t>(local - 1)].workload;
    if (!blocks.empty() && blocks.back().u == run.start && blocks.back().s == run.speed) {
      blocks.back().b = local;
      blocks.back().u = run.end;
      blocks.back().W += w;
    } else {
      blocks.push_back({local, local, run.start, run.end, run.speed, w});
    }
  }
  // snap block ends to the coordinates that pin them, keeping abutments exact
  for (size_t k = 0; k < blocks.size(); ++k) {
    SqueezeBlock& blk = blocks[k];
    const bool abutted = (k + 1 < blocks.size()) &&
                         std::abs(blocks[k + 1].t - blk.u) <= coord_tol(blk.u);
    const double dpin = std::min(gap.jobs[static_cast<size_t>(blk.b - 1)].deadline, gap.right);
    const double rpin = (blk.b < gap.size()) ? gap.jobs[static_cast<size_t>(blk.b)].release : gap.right;
    if (std::abs(blk.u - dpin) <= coord_tol(dpin))
      blk.u = dpin;
    else if (std::abs(blk.u - rpin) <= coord_tol(rpin))
      blk.u = rpin;
    if (abutted) blocks[k + 1].t = blk.u;
  }
  return blocks;
}

namespace {

std::deque<SqueezeBlock> coalesce(const std::vector<SqueezeBlock>& seed) {
  std::deque<SqueezeBlock> blocks;
  for (const SqueezeBlock& blk : seed) {
    if (!blocks.empty() && blocks.back().u == blk.t && blocks.back().s == blk.s) {
      blocks.back().b = blk.b;
      blocks.back().u = blk.u;
      blocks.back().W += blk.W;
    } else {
      blocks.push_back(blk);
    }
  }
  return blocks;
}

} // namespace

void squeeze_row(const GapView& g, int j, std::vector<SqueezeBlock> seed, YTable& y,
                 SqueezeStats* stats) {
  const double alpha = g.model->alpha;
  const double diss = g.model->dissipation;
  const double rbound = g.r(j + 1);
  SplitSpeedIndex ssi(g, j);

  std::deque<SqueezeBlock> blocks = coalesce(seed);
  if (blocks.empty()) throw InternalError("squeeze_row: empty seed");

  double static_cost = 0;
  for (size_t k = 1; k < blocks.size(); ++k)
    static_cost += blocks[k].W * std::pow(blocks[k].s, alpha - 1.0);
  SqueezeBlock first = blocks.front();
  blocks.pop_front();
  double s_cur = first.s;
  long events = 0;
  int i = 1;

  auto advance_front = [&]() {
    // drop job i from the running block, keeping the current speed
    if (first.a != i) throw InternalError("squeeze_row: front job out of sync");
    first.W -= g.w(i);
    first.a = i + 1;
    if (first.a > first.b && !blocks.empty()) {
      first = blocks.front();
      blocks.pop_front();
      static_cost -= first.W * std::pow(first.s, alpha - 1.0);
      s_cur = first.s;
    }
  };

  while (i <= j) {
    if (g.pair_infeasible(i, j)) {
      y.set(i, j, kInf);
      advance_front();
      ++i;
      ++events;
      continue;
    }
    const double dprev = g.d(i - 1);
    const double s_dead = (first.u > dprev) ? first.W / (first.u - dprev) : kInf;
    auto [s_split, split_k] = ssi.min_from(g, i, first.b, first.u);
    double s_merge = kInf;
    if (!blocks.empty() && blocks.front().t == first.u && blocks.front().s > s_cur)
      s_merge = blocks.front().s;
    if (s_dead == kInf && s_split == kInf && s_merge == kInf)
      throw InternalError("squeeze_row: stalled event loop");

    if (s_dead <= s_split && s_dead <= s_merge) {
      s_cur = std::max(s_cur, s_dead);
      y.set(i, j, static_cost + first.W * std::pow(s_cur, alpha - 1.0) +
                      diss * (rbound - dprev));
      advance_front();
      ++i;
    } else if (s_split <= s_merge) {
      s_cur = std::max(s_cur, s_split);
      const int k = split_k;
      SqueezeBlock rest;
      rest.a = k + 1;
      rest.b = first.b;
      rest.t = g.d(k);
      rest.u = first.u;
      rest.s = s_cur;
      rest.W = g.wsum(k + 1, first.b);
      blocks.push_front(rest);
      static_cost += rest.W * std::pow(s_cur, alpha - 1.0);
      first.b = k;
      first.u = rest.t;
      first.W -= rest.W;
    } else {
      SqueezeBlock second = blocks.front();
      blocks.pop_front();
      static_cost -= second.W * std::pow(second.s, alpha - 1.0);
      s_cur = second.s;
      first.b = second.b;
      first.u = second.u;
      first.W += second.W;
    }
    ++events;
  }

  if (stats) {
    stats->events += events;
    stats->rows += 1;
    stats->max_row_events = std::max(stats->max_row_events, events);
    stats->split_fallbacks += ssi.fallbacks();
    if (events > 3L * j) stats->row_bound_ok = false;
  }
}

std::vector<std::optional<std::vector<SqueezeBlock>>> squeeze_seeds(
    const GapView& g, std::vector<SqueezeBlock> seed_full, SqueezeStats* stats) {
  const int m = g.m;
  std::vector<std::optional<std::vector<SqueezeBlock>>> seeds(static_cast<size_t>(m) + 1);
  std::deque<SqueezeBlock> blocks = coalesce(seed_full);
  if (blocks.empty()) throw InternalError("squeeze_seeds: empty seed");
  seeds[static_cast<size_t>(m)] =
      std::vector<SqueezeBlock>(blocks.begin(), blocks.end());

  SqueezeBlock last = blocks.back();
  blocks.pop_back();
  double s_cur = last.s;
  long events = 0;

  auto drop_back = [&](int job) {
    if (last.b != job) throw InternalError("squeeze_seeds: back job out of sync");
    last.W -= g.w(job);
    last.u -= g.w(job) / s_cur;
    last.b = job - 1;
    if (last.b < last.a && !blocks.empty()) {
      last = blocks.back();
      blocks.pop_back();
      s_cur = last.s;
    }
  };

  for (int j = m - 1; j >= 1; --j) {
    drop_back(j + 1);
    if (g.pair_infeasible(1, j)) continue; // seeds[j] stays empty
    const double rbound = g.r(j + 1);
    for (;;) {
      const double s_rel = (rbound > last.t) ? last.W / (rbound - last.t) : kInf;
      double s_split = kInf;
      int split_k = -1;
      for (int k = last.a + 1; k <= last.b; ++k) {
        if (g.r(k) <= last.t) continue;
        const double v = g.wsum(last.a, k - 1) / (g.r(k) - last.t);
        if (v <= s_split) { // ties pick the largest k
          s_split = v;
          split_k = k;
        }
      }
      double s_merge = kInf;
      if (!blocks.empty() && blocks.back().u == last.t && blocks.back().s > s_cur)
        s_merge = blocks.back().s;
      if (s_rel == kInf && s_split == kInf && s_merge == kInf)
        throw InternalError("squeeze_seeds: stalled event loop");

      if (s_rel <= s_split && s_rel <= s_merge) {
        // the maintained block never ends left of the boundary except by
        // rounding noise, so a genuinely earlier end means it is pinned
        if (s_rel >= s_cur || rbound - last.u <= coord_tol(rbound)) {
          s_cur = std::max(s_cur, s_rel);
          last.u = rbound;
          last.s = last.W / (rbound - last.t);
        } else {
          last.s = last.W / (last.u - last.t);
          s_cur = std::max(s_cur, last.s);
        }
        std::vector<SqueezeBlock> snap(blocks.begin(), blocks.end());
        snap.push_back(last);
        seeds[static_cast<size_t>(j)] = std::move(snap);
        ++events;
        break;
      } else if (s_split <= s_merge) {
        s_cur = std::max(s_cur, s_split);
        SqueezeBlock head;
        head.a = last.a;
        head.b = split_k - 1;
        head.t = last.t;
        head.u = g.r(split_k);
        head.s = s_cur;
        head.W = g.wsum(head.a, head.b);
        blocks.push_back(head);
        last.a = split_k;
        last.t = head.u;
        last.W -= head.W;
        ++events;
      } else {
        SqueezeBlock prev = blocks.back();
        blocks.pop_back();
        s_cur = prev.s;
        last.a = prev.a;
        last.t = prev.t;
        last.W += prev.W;
        ++events;
      }
    }
  }
  if (stats) stats->events += events;
  return seeds;
}

YTable build_y_table(const EnergyModel& m, const Subinstance& gap, SqueezeStats* stats) {
  GapView g = make_gap_view(m, gap);
  YTable y(g.m);
  for (int i = 1; i <= g.m + 1; ++i)
    y.set(i, i - 1, m.dissipation * (g.r(i) - g.d(i - 1)));
  if (g.m == 0) return y;

  auto yds = yds_schedule(m, gap.jobs, gap.left, gap.right);
  if (!yds) throw InternalError("build_y_table: gap with an empty restricted window");
  auto blocks = schedule_to_blocks(gap, *yds);
  auto seeds = squeeze_seeds(g, blocks, stats);
  for (int j = 1; j <= g.m; ++j) {
    if (!seeds[static_cast<size_t>(j)]) {
      for (int i = 1; i <= j; ++i) y.set(i, j, kInf);
      continue;
    }
    squeeze_row(g, j, *seeds[static_cast<size_t>(j)], y, stats);
  }
  return y;
}

} // namespace sspd
