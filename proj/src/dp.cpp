#include "sspd/dp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace sspd {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void compute_f(const GapView& g, int i, int j, std::vector<std::pair<int, int>>& chains) {
  chains.clear();
  const double sstar = g.model->critical_speed;
  int ell = i;
  double t = std::max(g.r(i), g.d(i - 1));
  for (int k = i; k <= j; ++k) {
    if (t < g.r(k)) {
      chains.emplace_back(ell, k - 1);
      ell = k;
      t = g.r(k);
    }
    t += g.w(k) / sstar;
  }
  chains.emplace_back(ell, j);
}

void compute_h(const GapView& g, int i, int j, std::vector<int>& h) {
  const double sstar = g.model->critical_speed;
  const double rbound = g.r(j + 1);
  if (static_cast<int>(h.size()) < j + 1) h.resize(static_cast<size_t>(j + 1));
  int ell = j;
  double t = std::min(g.d(j), rbound);
  for (int k = j; k >= i; --k) {
    const double dk = std::min(g.d(k), rbound);
    if (t > dk) {
      ell = k;
      t = dk;
    }
    h[static_cast<size_t>(k)] = ell;
    t -= g.w(k) / sstar;
  }
}

OTable::OTable(int m) : m_(m) {
  const size_t n = static_cast<size_t>(m + 1) * static_cast<size_t>(m + 1);
  v_.assign(n, kInf);
  c_.assign(n, Choice{});
}

size_t OTable::idx(int i, int j) const {
  if (i < 1 || i > m_ + 1 || j < i - 1 || j > m_)
    throw InternalError("OTable: index out of range");
  return static_cast<size_t>(i - 1) * static_cast<size_t>(m_ + 1) + static_cast<size_t>(j);
}

OTable dp_solve(const EnergyModel& m, const Subinstance& gap, const YTable& y,
                bool border_left, bool border_right) {
  GapView g = make_gap_view(m, gap);
  OTable o(g.m);
  const double L = m.wake_cost;
  const double gstar = m.g_star;
  const double diss = m.dissipation;

  for (int i = 1; i <= g.m + 1; ++i)
    o.set(i, i - 1, std::min(L, diss * (g.r(i) - g.d(i - 1))), OTable::Choice{0, 0});
  if (g.m == 0) return o;

  std::vector<std::pair<int, int>> chains;
  std::vector<int> h;
  for (int j = 1; j <= g.m; ++j) {
    for (int i = j; i >= 1; --i) {
      if (g.pair_infeasible(i, j)) {
        o.set(i, j, kInf, OTable::Choice{0, 0});
        continue;
      }
      compute_f(g, i, j, chains);
      compute_h(g, i, j, h);

      // idle-on lead when a chain starts at i itself
      auto y_before = [&](int a) {
        return (a == i) ? diss * std::max(0.0, g.r(i) - g.d(i - 1)) : y.get(i, a - 1);
      };

      double best = kInf;
      OTable::Choice bc{1, 0};
      const int hi = h[static_cast<size_t>(i)];
      const double v2 = L + gstar * g.wsum(i, hi) + o.get(hi + 1, j);
      if (v2 < best) {
        best = v2;
        bc = {2, hi};
      }
      const int k3 = chains.back().first;
      const double v3 = y_before(k3) + gstar * g.wsum(k3, j) + L;
      if (v3 < best) {
        best = v3;
        bc = {3, k3};
      }
      for (const auto& [a, b] : chains) {
        if (b >= j) continue;
        const int c = h[static_cast<size_t>(b + 1)];
        const double v4 = y_before(a) + gstar * g.wsum(a, c) + L + o.get(c + 1, j);
        if (v4 < best) {
          best = v4;
          bc = {4, a};
        }
      }
      // Never-off case. At a sentinel border it loses ties so the emitted
      // schedule keeps that border shut down.
      const bool exposed = (border_left && i == 1) || (border_right && j == g.m);
      const double v1 = y.get(i, j);
      if (exposed ? (v1 < best) : (v1 <= best)) {
        best = v1;
        bc = {1, 0};
      }
      o.set(i, j, best, bc);
    }
  }
  return o;
}

namespace {

// Reconstruction context for one gap.
struct Emitter {
  const EnergyModel& m;
  const Subinstance& gap;
  const GapView& g;
  const OTable& o;
  const YTable& y;
  ScheduleBuilder& sb;
  bool border_left;
  bool border_right;
  std::vector<std::string>* trace;

  int orig(int local) const { return gap.lo + local - 1; }

  void note(int i, int j, const char* what, int aux) {
    if (!trace) return;
    std::ostringstream os;
    os << "(" << orig(i) << "," << orig(j) << ") " << what;
    if (aux) os << " " << orig(aux);
    trace->push_back(os.str());
  }

  // Jobs i..jend on-throughout over [left, right); empty ranges idle.
  // Sentinel borders are emitted as shutdowns of equal cost.
  void emit_y_region(int i, int jend, double left, double right) {
    double cur = left;
    if (border_left && left == gap.left) {
      const double r1 = g.r(1);
      if (r1 > cur) {
        sb.off(cur, r1);
        cur = r1;
      }
    }
    double tail = right;
    const bool snap_tail = border_right && right == gap.right && g.d(g.m) > cur;
    if (snap_tail) tail = std::min(right, g.d(g.m));

    if (i > jend) {
      if (cur < tail) sb.idle(cur, tail);
    } else {
      std::vector<Job> clipped;
      clipped.reserve(static_cast<size_t>(jend - i + 1));
      for (int k = i; k <= jend; ++k) {
        Job jk = gap.jobs[static_cast<size_t>(k - 1)];
        jk.release = std::max(jk.release, cur);
        jk.deadline = std::min(jk.deadline, right);
        clipped.push_back(jk);
      }
      auto s = yds_schedule(m, clipped, cur, right);
      if (!s) throw InternalError("reconstruct: infeasible never-off region");
      for (const YdsRun& run : s->runs) {
        if (run.start > cur) sb.idle(cur, run.start);
        sb.run(run.job, std::max(run.start, cur), run.end, run.speed);
        cur = run.end;
      }
      if (cur < tail) sb.idle(cur, tail);
    }
    cur = std::max(cur, tail);
    if (cur < right) sb.off(cur, right);
  }

  void run_packed(int a, int b, double anchor) {
    // jobs a..b back to back at critical speed starting at anchor
    const double sstar = m.critical_speed;
    for (int k = a; k <= b; ++k) {
      const double s0 = anchor + g.wsum(a, k - 1) / sstar;
      const double s1 = anchor + g.wsum(a, k) / sstar;
      sb.run(orig_id(k), s0, s1, sstar);
    }
  }

  void run_packed_to(int a, int b, double endpos) {
    const double sstar = m.critical_speed;
    for (int k = a; k <= b; ++k) {
      const double s0 = endpos - g.wsum(k, b) / sstar;
      const double s1 = endpos - g.wsum(k + 1, b) / sstar;
      sb.run(orig_id(k), s0, s1, sstar);
    }
  }

  int orig_id(int local) const { return gap.jobs[static_cast<size_t>(local - 1)].id; }

  void emit_pair(int i, int j) {
    const double L = m.wake_cost;
    const double diss = m.dissipation;
    const double sstar = m.critical_speed;
    if (i > j) {
      const double left = g.d(i - 1);
      const double right = g.r(i);
      if (right > left) {
        if (L <= diss * (right - left))
          sb.off(left, right);
        else
          sb.idle(left, right);
      }
      note(i, j, "gap", 0);
      return;
    }
    const OTable::Choice ch = o.choice(i, j);
    switch (ch.kase) {
      case 1: {
        note(i, j, "never-off", 0);
        emit_y_region(i, j, g.d(i - 1), g.r(j + 1));
        return;
      }
      case 2: {
        const int hi = ch.aux;
        const double dend = std::min(g.d(hi), g.r(j + 1));
        const double u = dend - g.wsum(i, hi) / sstar;
        note(i, j, "lead-off prefix to", hi);
        sb.off(g.d(i - 1), u);
        run_packed_to(i, hi, dend);
        emit_pair(hi + 1, j);
        return;
      }
      case 3: {
        const int k = ch.aux;
        const double anchor = std::max(g.r(k), g.d(i - 1));
        note(i, j, "suffix from", k);
        emit_y_region(i, k - 1, g.d(i - 1), anchor);
        run_packed(k, j, anchor);
        sb.off(anchor + g.wsum(k, j) / sstar, g.r(j + 1));
        return;
      }
      case 4: {
        const int a = ch.aux;
        std::vector<std::pair<int, int>> chains;
        std::vector<int> h;
        compute_f(g, i, j, chains);
        compute_h(g, i, j, h);
        int b = -1;
        for (const auto& [ca, cb] : chains)
          if (ca == a) b = cb;
        if (b < 0 || b >= j) throw InternalError("reconstruct: stale suffix pointer");
        const int c = h[static_cast<size_t>(b + 1)];
        note(i, j, "island from", a);
        const double anchor = std::max(g.r(a), g.d(i - 1));
        emit_y_region(i, a - 1, g.d(i - 1), anchor);
        run_packed(a, b, anchor);
        const double t = anchor + g.wsum(a, b) / sstar;
        const double dend = std::min(g.d(c), g.r(j + 1));
        const double u = dend - g.wsum(b + 1, c) / sstar;
        sb.off(t, u);
        run_packed_to(b + 1, c, dend);
        emit_pair(c + 1, j);
        return;
      }
      default:
        throw InternalError("reconstruct: no stored choice for a feasible pair");
    }
  }
};

} // namespace

GapSolution reconstruct(const EnergyModel& m, const Subinstance& gap, const OTable& o,
                        const YTable& y, bool border_left, bool border_right) {
  GapView g = make_gap_view(m, gap);
  GapSolution sol;
  ScheduleBuilder sb(gap.left);
  Emitter em{m, gap, g, o, y, sb, border_left, border_right, &sol.trace};
  em.emit_pair(1, g.m);
  Schedule s = sb.finish(gap.right);
  sol.segments = std::move(s.segments);
  sol.value = o.get(1, g.m);

  const CostBreakdown c = cost_of_segments(m, sol.segments, Boundary::OnAtBothEnds);
  const double tol = 1e-9 * std::max(1.0, std::abs(sol.value));
  if (std::abs(c.total - sol.value) > tol)
    throw InternalError("reconstruct: emitted cost " + std::to_string(c.total) +
                        " disagrees with table value " + std::to_string(sol.value));
  return sol;
}

SolveResult solve(const Instance& inst) {
  const EnergyModel& m = inst.model();
  SolveResult res;
  res.decomp = extract_dense_regions(inst);

  ScheduleBuilder sb(inst.sentinel_left());
  double total = 0;
  size_t run_idx = 0;
  const auto& regions = res.decomp.dense_regions;
  const auto& runs = res.decomp.dense_runs;

  for (size_t t = 0; t < res.decomp.gaps.size(); ++t) {
    const Subinstance& gap = res.decomp.gaps[t];
    const bool bl = (t == 0);
    const bool br = (t + 1 == res.decomp.gaps.size());
    if (gap.empty()) {
      res.gap_table_index.push_back(-1);
      const double span = gap.right - gap.left;
      if (span > 0) {
        const double v = std::min(m.wake_cost, m.dissipation * span);
        total += v;
        if (m.wake_cost <= m.dissipation * span)
          sb.off(gap.left, gap.right);
        else
          sb.idle(gap.left, gap.right);
      }
    } else {
      YTable y = build_y_table(m, gap, &res.stats);
      OTable o = dp_solve(m, gap, y, bl, br);
      GapSolution sol = reconstruct(m, gap, o, y, bl, br);
      total += sol.value;
      for (const Segment& seg : sol.segments) {
        if (seg.mode == Mode::Off)
          sb.off(seg.start, seg.end);
        else if (seg.job == 0)
          sb.idle(seg.start, seg.end);
        else
          sb.run(seg.job, seg.start, seg.end, seg.speed);
      }
      res.gap_table_index.push_back(static_cast<int>(res.ytables.size()));
      res.ytables.push_back(std::move(y));
      res.otables.push_back(std::move(o));
      for (auto& line : sol.trace) res.trace.push_back(std::move(line));
    }
    if (t < regions.size()) {
      const auto& [a, b] = regions[t];
      total += m.dissipation * (b - a);
      while (run_idx < runs.size() && runs[run_idx].start < b) {
        const YdsRun& run = runs[run_idx];
        sb.run(run.job, run.start, run.end, run.speed);
        total += std::pow(run.speed, m.alpha) * (run.end - run.start);
        ++run_idx;
      }
    }
  }
  if (run_idx != runs.size()) throw InternalError("solve: dense runs left over");

  res.schedule = sb.finish(inst.sentinel_right());
  res.cost = evaluate_cost(inst, res.schedule, Boundary::InfiniteHorizon);
  res.total = total;
  const double tol = 1e-9 * std::max(1.0, std::abs(total));
  if (std::abs(res.cost.total - total) > tol)
    throw InternalError("solve: composed cost disagrees with table total");
  return res;
}

} // namespace sspd
