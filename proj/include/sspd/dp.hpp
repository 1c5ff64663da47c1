#ifndef SSPD_DP_HPP
#define SSPD_DP_HPP

#include "sspd/model.hpp"
#include "sspd/schedule.hpp"
#include "sspd/squeeze.hpp"
#include "sspd/yds.hpp"

#include <string>
#include <vector>

namespace sspd {

// Left-to-right scan for pair (i, j): partitions [i..j] into maximal chains
// of jobs that pack back-to-back at critical speed from the chain starter's
// release. Each (starter, end) pair is one chain; f(starter) = end.
void compute_f(const GapView& g, int i, int j, std::vector<std::pair<int, int>>& chains);

// Right-to-left scan for pair (i, j): h[k] = last job of the longest
// deadline-anchored critical-speed prefix starting at k.
void compute_h(const GapView& g, int i, int j, std::vector<int>& h);

class OTable {
public:
  struct Choice {
    int kase = 0; // 0 empty/infeasible, 1..4 recursion cases
    int aux = 0;  // case 2: h(i); case 3: suffix starter; case 4: a
  };
  explicit OTable(int m);
  double get(int i, int j) const { return v_[idx(i, j)]; }
  Choice choice(int i, int j) const { return c_[idx(i, j)]; }
  void set(int i, int j, double val, Choice ch) {
    v_[idx(i, j)] = val;
    c_[idx(i, j)] = ch;
  }
  int size() const { return m_; }

private:
  size_t idx(int i, int j) const;
  int m_;
  std::vector<double> v_;
  std::vector<Choice> c_;
};

// Optimal total cost of every pair of the gap, by increasing span, taking the
// best of: never power down; leading shutdown + prefix; suffix + trailing
// shutdown; interior shutdown flanked by a suffix and a prefix.
// border_* mark gap edges that sit on the instance sentinels; there ties are
// broken away from the never-off case so emitted schedules keep those borders
// shut down.
OTable dp_solve(const EnergyModel& m, const Subinstance& gap, const YTable& y,
                bool border_left = false, bool border_right = false);

struct GapSolution {
  std::vector<Segment> segments; // covering [gap.left, gap.right)
  double value = 0;
  std::vector<std::string> trace; // chosen case per visited pair
};

// Emits a schedule achieving o(1, m); throws InternalError when the emitted
// cost disagrees with the table value.
GapSolution reconstruct(const EnergyModel& m, const Subinstance& gap, const OTable& o,
                        const YTable& y, bool border_left = false,
                        bool border_right = false);

struct SolveResult {
  Schedule schedule; // over [d_0, r_{n+1})
  CostBreakdown cost; // infinite-horizon accounting of `schedule`
  double total = 0;
  Decomposition decomp;
  std::vector<YTable> ytables;      // per non-empty gap, in gap order
  std::vector<OTable> otables;
  std::vector<int> gap_table_index; // per gap; -1 for empty gaps
  std::vector<std::string> trace;
  SqueezeStats stats;
};

SolveResult solve(const Instance& inst);

} // namespace sspd

#endif
