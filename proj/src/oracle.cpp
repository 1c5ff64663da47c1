#include "sspd/oracle.hpp"

#include "sspd/yds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace sspd {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double rel_tol(double x) { return 1e-9 * std::max(1.0, std::abs(x)); }
} // namespace

double yds_from_scratch_Y(const EnergyModel& m, const Subinstance& gap, int i, int j) {
  GapView g = make_gap_view(m, gap);
  if (j == i - 1) return m.dissipation * (g.r(i) - g.d(i - 1));
  if (g.pair_infeasible(i, j)) return kInf;
  std::vector<Job> jobs(gap.jobs.begin() + (i - 1), gap.jobs.begin() + j);
  auto s = yds_schedule(m, jobs, g.d(i - 1), g.r(j + 1));
  if (!s) return kInf;
  return s->speed_cost + m.dissipation * (g.r(j + 1) - g.d(i - 1));
}

namespace {

// Exhaustive optimal cost of one sparse gap, by increasing pair span.
double naive_gap_value(const EnergyModel& m, const Subinstance& gap) {
  const int n = gap.size();
  GapView g = make_gap_view(m, gap);
  const double L = m.wake_cost;
  const double gstar = m.g_star;
  const double diss = m.dissipation;
  const double sstar = m.critical_speed;

  std::vector<std::vector<double>> Y(static_cast<size_t>(n) + 2,
                                     std::vector<double>(static_cast<size_t>(n) + 1, kInf));
  for (int i = 1; i <= n + 1; ++i)
    for (int j = i - 1; j <= n; ++j)
      Y[static_cast<size_t>(i)][static_cast<size_t>(j)] = yds_from_scratch_Y(m, gap, i, j);

  std::vector<std::vector<double>> O(static_cast<size_t>(n) + 2,
                                     std::vector<double>(static_cast<size_t>(n) + 1, kInf));
  for (int i = 1; i <= n + 1; ++i)
    O[static_cast<size_t>(i)][static_cast<size_t>(i - 1)] =
        std::min(L, diss * (g.r(i) - g.d(i - 1)));
  if (n == 0) return O[1][0];

  std::vector<double> rr(static_cast<size_t>(n) + 1), dd(static_cast<size_t>(n) + 1);
  // chain_s[a][b]: jobs a..b pack from rr[a] at critical speed without
  // waiting; chain_p[k][c]: jobs k..c pack backwards from dd[c] meeting
  // every intermediate deadline
  std::vector<std::vector<char>> chain_s(static_cast<size_t>(n) + 1,
                                         std::vector<char>(static_cast<size_t>(n) + 1, 0));
  std::vector<std::vector<char>> chain_p = chain_s;

  for (int j = 1; j <= n; ++j) {
    for (int i = j; i >= 1; --i) {
      if (g.pair_infeasible(i, j)) continue;
      for (int k = i; k <= j; ++k) {
        rr[static_cast<size_t>(k)] = std::max(g.r(k), g.d(i - 1));
        dd[static_cast<size_t>(k)] = std::min(g.d(k), g.r(j + 1));
      }
      for (int a = i; a <= j; ++a) {
        chain_s[static_cast<size_t>(a)][static_cast<size_t>(a)] = 1;
        for (int b = a + 1; b <= j; ++b)
          chain_s[static_cast<size_t>(a)][static_cast<size_t>(b)] =
              chain_s[static_cast<size_t>(a)][static_cast<size_t>(b - 1)] &&
              (rr[static_cast<size_t>(a)] + g.wsum(a, b - 1) / sstar >=
               rr[static_cast<size_t>(b)]);
      }
      for (int c = i; c <= j; ++c) {
        chain_p[static_cast<size_t>(c)][static_cast<size_t>(c)] = 1;
        for (int k = c - 1; k >= i; --k)
          chain_p[static_cast<size_t>(k)][static_cast<size_t>(c)] =
              chain_p[static_cast<size_t>(k + 1)][static_cast<size_t>(c)] &&
              (dd[static_cast<size_t>(c)] - g.wsum(k + 1, c) / sstar <=
               dd[static_cast<size_t>(k)]);
      }
      auto minimal_a = [&](int a, int b) {
        for (int a2 = i; a2 < a; ++a2)
          if (chain_s[static_cast<size_t>(a2)][static_cast<size_t>(b)]) return false;
        return true;
      };
      auto y_before = [&](int a) {
        return (a == i) ? diss * (rr[static_cast<size_t>(i)] - g.d(i - 1))
                        : Y[static_cast<size_t>(i)][static_cast<size_t>(a - 1)];
      };

      double best = Y[static_cast<size_t>(i)][static_cast<size_t>(j)];
      // leading shutdown then a deadline-anchored prefix (i..c)
      for (int c = i; c <= j; ++c) {
        if (!chain_p[static_cast<size_t>(i)][static_cast<size_t>(c)]) continue;
        const double u = dd[static_cast<size_t>(c)] - g.wsum(i, c) / sstar;
        if (u < g.d(i - 1)) continue;
        best = std::min(best, L + gstar * g.wsum(i, c) +
                                  O[static_cast<size_t>(c + 1)][static_cast<size_t>(j)]);
      }
      // release-anchored suffix (a..j) then trailing shutdown
      for (int a = i; a <= j; ++a) {
        if (!chain_s[static_cast<size_t>(a)][static_cast<size_t>(j)] || !minimal_a(a, j))
          continue;
        const double t = rr[static_cast<size_t>(a)] + g.wsum(a, j) / sstar;
        if (t > g.r(j + 1)) continue;
        best = std::min(best, y_before(a) + gstar * g.wsum(a, j) + L);
      }
      // interior shutdown between a suffix (a..b) and a prefix (b+1..c)
      for (int a = i; a <= j; ++a) {
        for (int b = a; b < j; ++b) {
          if (!chain_s[static_cast<size_t>(a)][static_cast<size_t>(b)] || !minimal_a(a, b))
            continue;
          for (int c = b + 1; c <= j; ++c) {
            if (!chain_p[static_cast<size_t>(b + 1)][static_cast<size_t>(c)]) continue;
            if (rr[static_cast<size_t>(a)] + g.wsum(a, c) / sstar >
                dd[static_cast<size_t>(c)])
              continue;
            best = std::min(best, y_before(a) + gstar * g.wsum(a, c) + L +
                                      O[static_cast<size_t>(c + 1)][static_cast<size_t>(j)]);
          }
        }
      }
      O[static_cast<size_t>(i)][static_cast<size_t>(j)] = best;
    }
  }
  return O[1][static_cast<size_t>(n)];
}

} // namespace

double naive_dp(const Instance& inst) {
  const EnergyModel& m = inst.model();
  Decomposition dec = extract_dense_regions(inst);
  double total = 0;
  for (const auto& run : dec.dense_runs)
    total += std::pow(run.speed, m.alpha) * (run.end - run.start);
  for (const auto& [a, b] : dec.dense_regions) total += m.dissipation * (b - a);
  for (const Subinstance& gap : dec.gaps) {
    if (gap.empty()) {
      const double span = gap.right - gap.left;
      if (span > 0) total += std::min(m.wake_cost, m.dissipation * span);
    } else {
      total += naive_gap_value(m, gap);
    }
  }
  return total;
}

double default_grid_delta(const Instance& inst) {
  const double lo = inst.jobs().front().release;
  const double hi = inst.jobs().back().deadline;
  return (hi - lo) / 64.0;
}

std::optional<double> grid_oracle(const Instance& inst, double delta) {
  const EnergyModel& m = inst.model();
  const int n = inst.size();
  const double d0 = inst.sentinel_left();
  const double rEnd = inst.sentinel_right();

  std::vector<double> pts;
  pts.push_back(d0);
  pts.push_back(rEnd);
  for (const Job& j : inst.jobs()) {
    pts.push_back(j.release);
    pts.push_back(j.deadline);
  }
  const double lo = inst.jobs().front().release;
  const double hi = inst.jobs().back().deadline;
  for (long k = 0;; ++k) {
    const double x = lo + static_cast<double>(k) * delta;
    if (x > hi) break;
    pts.push_back(x);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const size_t P = pts.size();

  // next[p]: best cost of the remaining timeline when the previous run (or
  // the horizon start) ended at pts[p]
  std::vector<double> next(P), cur(P);
  for (size_t p = 0; p < P; ++p) {
    const double gapspan = rEnd - pts[p];
    next[p] = (gapspan < 0) ? kInf : std::min(m.wake_cost, m.dissipation * gapspan);
  }
  std::vector<double> bestfrom(P);
  for (int j = n; j >= 1; --j) {
    const Job& job = inst.job(j);
    // bestfrom[s]: run of job j starting at pts[s], best over grid ends
    for (size_t s = 0; s < P; ++s) {
      double best = kInf;
      if (pts[s] >= job.release && pts[s] < job.deadline) {
        for (size_t e = s + 1; e < P && pts[e] <= job.deadline; ++e) {
          if (next[e] == kInf) continue;
          const double len = pts[e] - pts[s];
          const double run = std::pow(job.workload / len, m.alpha) * len +
                             m.dissipation * len;
          best = std::min(best, run + next[e]);
        }
      }
      bestfrom[s] = best;
    }
    for (size_t p = 0; p < P; ++p) {
      double best = kInf;
      for (size_t s = p; s < P; ++s) {
        if (bestfrom[s] == kInf) continue;
        const double gapspan = pts[s] - pts[p];
        best = std::min(best, std::min(m.wake_cost, m.dissipation * gapspan) + bestfrom[s]);
      }
      cur[p] = best;
    }
    next.swap(cur);
  }
  const size_t p0 = static_cast<size_t>(std::lower_bound(pts.begin(), pts.end(), d0) - pts.begin());
  if (next[p0] == kInf) return std::nullopt;
  return next[p0];
}

namespace {

struct Run {
  int job = 0;
  double start = 0, end = 0, speed = 0;
};

// rebuilds a full segment list from runs, choosing each gap's mode: interior
// gaps take the cheaper of idle and shutdown, horizon-border gaps shut down
std::vector<Segment> complete_runs(const EnergyModel& m, const std::vector<Run>& runs,
                                   double h0, double h1) {
  std::vector<Segment> segs;
  double cur = h0;
  for (size_t k = 0; k < runs.size(); ++k) {
    const Run& run = runs[k];
    if (run.start > cur) {
      const double len = run.start - cur;
      const bool border = (cur == h0);
      const bool off = border || m.wake_cost <= m.dissipation * len;
      segs.push_back({cur, run.start, off ? Mode::Off : Mode::On, 0.0, 0});
    }
    segs.push_back({run.start, run.end, Mode::On, run.speed, run.job});
    cur = run.end;
  }
  if (cur < h1) segs.push_back({cur, h1, Mode::Off, 0.0, 0});
  return segs;
}

} // namespace

PerturbationReport perturbation_sampler(const Instance& inst, const Schedule& s,
                                        int trials, uint64_t seed) {
  const EnergyModel& m = inst.model();
  PerturbationReport rep;
  rep.trials = trials;

  // collect one run per job (consecutive equal-job segments merged)
  std::vector<Run> runs;
  for (const Segment& seg : s.segments) {
    if (seg.job == 0) continue;
    if (!runs.empty() && runs.back().job == seg.job && runs.back().end == seg.start &&
        runs.back().speed == seg.speed) {
      runs.back().end = seg.end;
    } else {
      runs.push_back({seg.job, seg.start, seg.end, seg.speed});
    }
  }
  const double base = cost_of_segments(m, s.segments, Boundary::InfiniteHorizon).total;
  double worst = kInf;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // gaps of the original schedule, for mode toggles
  std::vector<size_t> gapidx;
  for (size_t k = 0; k < s.segments.size(); ++k)
    if (s.segments[k].job == 0) gapidx.push_back(k);

  for (int t = 0; t < trials; ++t) {
    const int kind = static_cast<int>(rng() % 3);
    if (kind == 0 && !gapidx.empty()) {
      // toggle one idle/off region
      std::vector<Segment> segs = s.segments;
      Segment& seg = segs[gapidx[rng() % gapidx.size()]];
      seg.mode = (seg.mode == Mode::On) ? Mode::Off : Mode::On;
      const double val = cost_of_segments(m, segs, Boundary::InfiniteHorizon).total;
      worst = std::min(worst, val - base);
      ++rep.applied;
      continue;
    }
    if (runs.empty()) continue;
    const size_t ri = rng() % runs.size();
    const Run& run = runs[ri];
    const Job& job = inst.job(run.job);
    const double lo = std::max(job.release, (ri == 0) ? s.horizon_start : runs[ri - 1].end);
    const double hi = std::min(job.deadline, (ri + 1 == runs.size()) ? s.horizon_end
                                                                     : runs[ri + 1].start);
    if (!(lo < hi)) continue;
    std::vector<Run> edited = runs;
    if (kind == 1) {
      // re-pick both endpoints, keeping the workload
      double a = lo + (hi - lo) * unit(rng);
      double b = lo + (hi - lo) * unit(rng);
      if (a > b) std::swap(a, b);
      if (b - a < 1e-6 * (hi - lo)) continue;
      edited[ri].start = a;
      edited[ri].end = b;
      edited[ri].speed = job.workload / (b - a);
    } else {
      // rigid shift within the slack
      const double len = run.end - run.start;
      if (hi - lo <= len) continue;
      const double start = lo + (hi - lo - len) * unit(rng);
      edited[ri].start = start;
      edited[ri].end = start + len;
    }
    const auto segs = complete_runs(m, edited, s.horizon_start, s.horizon_end);
    const double val = cost_of_segments(m, segs, Boundary::InfiniteHorizon).total;
    worst = std::min(worst, val - base);
    ++rep.applied;
  }
  rep.worst_delta = (rep.applied > 0) ? worst : 0.0;
  return rep;
}

Instance random_agreeable_instance(uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const double alphas[] = {2.0, 2.5, 3.0};
  const double alpha = alphas[rng() % 3];
  const double gs[] = {0.5, 1.0, 4.0};
  const double g = gs[rng() % 3];
  const double Ls[] = {0.05, 1.0, 8.0, 60.0};
  const double L = Ls[rng() % 4];
  EnergyModel model(alpha, L, g);
  const double sstar = model.critical_speed;

  const double span = 4.0 * n;
  std::vector<double> rel(static_cast<size_t>(n));
  for (double& x : rel) x = span * unit(rng);
  std::sort(rel.begin(), rel.end());
  // occasional exact release ties
  for (size_t k = 1; k < rel.size(); ++k)
    if (unit(rng) < 0.10) rel[k] = rel[k - 1];

  std::vector<Job> jobs(static_cast<size_t>(n));
  double dprev = -kInf;
  for (size_t k = 0; k < jobs.size(); ++k) {
    double slack = 0.3 + 5.0 * unit(rng);
    double d = rel[k] + slack;
    if (unit(rng) < 0.10 && dprev > rel[k]) d = dprev; // deadline tie
    d = std::max(d, dprev);
    if (!(d > rel[k])) d = rel[k] + slack;
    dprev = d;
    jobs[k].release = rel[k];
    jobs[k].deadline = d;
    // workloads straddling the critical speed
    const double f = (unit(rng) < 0.30) ? (1.0 + 0.6 * unit(rng)) : (0.05 + 0.85 * unit(rng));
    jobs[k].workload = f * sstar * (d - rel[k]);
  }
  return Instance(model, std::move(jobs));
}

std::vector<std::string> structural_report(const Instance& inst, const SolveResult& res) {
  std::vector<std::string> out;
  const EnergyModel& m = inst.model();
  const double sstar = m.critical_speed;

  auto bad = [&](const std::string& s) { out.push_back(s); };

  for (const Violation& v : validate_schedule(inst, res.schedule))
    bad("validator: " + v.detail);

  // earliest deadline first along the timeline, one speed per job
  int last_job = 0;
  std::vector<double> jobspeed(static_cast<size_t>(inst.size()) + 1, -1.0);
  for (const Segment& seg : res.schedule.segments) {
    if (seg.job == 0) continue;
    if (seg.job < last_job) bad("edf: job " + std::to_string(seg.job) + " after " +
                                std::to_string(last_job));
    last_job = std::max(last_job, seg.job);
    double& sp = jobspeed[static_cast<size_t>(seg.job)];
    if (sp < 0)
      sp = seg.speed;
    else if (std::abs(sp - seg.speed) > rel_tol(sp))
      bad("job span: job " + std::to_string(seg.job) + " runs at two speeds");
  }

  // dense runs at or above the critical speed
  for (const YdsRun& run : res.decomp.dense_runs)
    if (run.speed < sstar * (1.0 - 1e-9))
      bad("dense run of job " + std::to_string(run.job) + " below critical speed");

  // per-gap checks
  for (const Subinstance& gap : res.decomp.gaps) {
    if (gap.empty()) continue;
    // segments of this gap
    std::vector<Segment> segs;
    for (const Segment& seg : res.schedule.segments)
      if (seg.start >= gap.left - rel_tol(gap.left) && seg.end <= gap.right + rel_tol(gap.right))
        segs.push_back(seg);
    auto dclip = [&](int id) {
      return std::min(inst.job(id).deadline, gap.right);
    };
    auto rclip = [&](int id) { return std::max(inst.job(id).release, gap.left); };

    for (const Segment& seg : segs)
      if (seg.job != 0 && seg.speed > sstar + 1e-9)
        bad("sparse speed above critical: job " + std::to_string(seg.job));

    // interior shutdowns flanked by pinned critical-speed groups
    for (size_t k = 0; k < segs.size(); ++k) {
      const Segment& off = segs[k];
      if (off.mode != Mode::Off) continue;
      const bool interior = off.start > gap.left + rel_tol(gap.left) &&
                            off.end < gap.right - rel_tol(gap.right);
      if (!interior) continue;
      // left flank: contiguous run group ending at off.start
      {
        size_t e = k;
        while (e > 0 && segs[e - 1].job != 0) --e;
        if (e == k) {
          bad("interior off at t=" + std::to_string(off.start) + " not preceded by a run");
        } else {
          const int a = segs[e].job, b = segs[k - 1].job;
          bool speeds_ok = true;
          for (size_t q = e; q < k; ++q)
            if (std::abs(segs[q].speed - sstar) > 1e-9 * std::max(1.0, sstar))
              speeds_ok = false;
          double wsum = 0;
          for (int id = a; id <= b; ++id) wsum += inst.job(id).workload;
          const double t = off.start;
          const double g0 = segs[e].start;
          const bool suffix_form = std::abs(g0 - rclip(a)) <= rel_tol(t) &&
                                   std::abs(t - (rclip(a) + wsum / sstar)) <= rel_tol(t);
          const bool packed_form = std::abs(t - dclip(b)) <= rel_tol(t);
          const bool anchored = std::abs(t - (g0 + wsum / sstar)) <= rel_tol(t);
          if (!speeds_ok || !(suffix_form || packed_form || anchored))
            bad("interior off at t=" + std::to_string(t) + " has an unpinned left flank");
        }
      }
      // right flank: deadline-anchored prefix starting at off.end
      {
        const size_t e = k + 1;
        if (e >= segs.size() || segs[e].job == 0) {
          bad("interior off ending at u=" + std::to_string(off.end) +
              " not followed by a run");
        } else {
          size_t q = e;
          while (q + 1 < segs.size() && segs[q + 1].job != 0) ++q;
          const int c1 = segs[e].job, c2 = segs[q].job;
          bool speeds_ok = true;
          for (size_t x = e; x <= q; ++x)
            if (std::abs(segs[x].speed - sstar) > 1e-9 * std::max(1.0, sstar))
              speeds_ok = false;
          double wsum = 0;
          for (int id = c1; id <= c2; ++id) wsum += inst.job(id).workload;
          const double u = off.end;
          const bool prefix_form =
              std::abs(u - (dclip(c2) - wsum / sstar)) <= rel_tol(u);
          if (!speeds_ok || !prefix_form)
            bad("interior off ending at u=" + std::to_string(u) +
                " has an unpinned right flank");
        }
      }
    }
  }
  return out;
}

} // namespace sspd
