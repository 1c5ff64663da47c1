#ifndef SSPD_SQUEEZE_HPP
#define SSPD_SQUEEZE_HPP

#include "sspd/model.hpp"
#include "sspd/yds.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace sspd {

// Local view of a gap subinstance: jobs indexed 1..m, boundary coordinates
// D[0] (left) and R[m+1] (right), workload prefix sums.
struct GapView {
  const EnergyModel* model = nullptr;
  int m = 0;
  std::vector<double> R; // R[1..m] releases, R[m+1] = right boundary
  std::vector<double> D; // D[0] = left boundary, D[1..m] deadlines
  std::vector<double> Wp; // Wp[k] = w_1 + ... + w_k

  double w(int k) const { return Wp[static_cast<size_t>(k)] - Wp[static_cast<size_t>(k - 1)]; }
  double wsum(int a, int b) const {
    return Wp[static_cast<size_t>(b)] - Wp[static_cast<size_t>(a - 1)];
  }
  double r(int k) const { return R[static_cast<size_t>(k)]; }
  double d(int k) const { return D[static_cast<size_t>(k)]; }
  // pair (i,j) infeasible: some restricted window or the span is empty
  bool pair_infeasible(int i, int j) const {
    return d(i - 1) >= r(j + 1) || d(i - 1) >= d(i) || r(j) >= r(j + 1);
  }
};

GapView make_gap_view(const EnergyModel& m, const Subinstance& gap);

// Y values for all pairs of a gap: minimal speed cost of (i,j) plus
// dissipation over the whole pair interval. +inf marks infeasible pairs.
class YTable {
public:
  explicit YTable(int m);
  double get(int i, int j) const { return v_[idx(i, j)]; }
  void set(int i, int j, double val) { v_[idx(i, j)] = val; }
  int size() const { return m_; }

private:
  size_t idx(int i, int j) const;
  int m_;
  std::vector<double> v_;
};

// speed at which job k finishes exactly at its deadline inside a block of
// jobs ending at u: (w_{k+1}+...+w_b) / (u - d_k)
double split_speed(const GapView& g, int k, int b, double u);

// One block of a maintained speed-optimal schedule: jobs a..b run back to
// back at speed s over [t, u).
struct SqueezeBlock {
  int a = 0, b = 0;
  double t = 0, u = 0;
  double s = 0;
  double W = 0;
};

struct SqueezeStats {
  long events = 0;
  long max_row_events = 0;
  long rows = 0;
  long split_fallbacks = 0; // split lookups that missed the precomputed slots
  bool row_bound_ok = true; // events per row <= 3j
};

// Precomputed suffix minima of split speeds for every block-end job b and the
// block-end positions that can occur in row j.
class SplitSpeedIndex {
public:
  SplitSpeedIndex(const GapView& g, int j);
  // argmin of split_speed(k, b, u) over k in [i, b); {+inf, -1} when empty
  std::pair<double, int> min_from(const GapView& g, int i, int b, double u) const;
  long fallbacks() const { return fallbacks_; }

private:
  int j_;
  std::vector<double> uval_[2];
  std::vector<double> val_[2];
  std::vector<int> arg_[2];
  std::vector<size_t> off_;
  mutable long fallbacks_ = 0;
};

// Converts a speed-optimal schedule of a gap into its block list; requires
// one contiguous run per job in index order (always true for agreeable gaps).
std::vector<SqueezeBlock> schedule_to_blocks(const Subinstance& gap, const YdsSchedule& s);

// Left-to-right scan: from the speed-optimal schedule of (1, j), fills
// Y(i, j) for i = 1..j by squeezing the first block.
void squeeze_row(const GapView& g, int j, std::vector<SqueezeBlock> seed, YTable& y,
                 SqueezeStats* stats = nullptr);

// Right-to-left scan: from the speed-optimal schedule of (1, m), emits the
// speed-optimal schedule of (1, j) for every j < m (nullopt when (1, j) is
// infeasible).
std::vector<std::optional<std::vector<SqueezeBlock>>> squeeze_seeds(
    const GapView& g, std::vector<SqueezeBlock> seed_full, SqueezeStats* stats = nullptr);

// Full table: one yds run for (1, m), the right-to-left scan, then one
// left-to-right scan per row.
YTable build_y_table(const EnergyModel& m, const Subinstance& gap,
                     SqueezeStats* stats = nullptr);

} // namespace sspd

#endif
