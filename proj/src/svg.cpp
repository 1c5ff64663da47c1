#include "sspd/io.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace sspd {

namespace {

std::string num(double x) {
  std::ostringstream os;
  os << std::setprecision(8) << x;
  return os.str();
}

} // namespace

void render_svg(std::ostream& out, const Instance& inst, const Schedule& s) {
  const EnergyModel& m = inst.model();
  const double sstar = m.critical_speed;

  const double t0 = s.horizon_start;
  const double t1 = s.horizon_end;
  double smax = sstar;
  for (const Segment& seg : s.segments) smax = std::max(smax, seg.speed);

  const double width = 900.0, chart_h = 220.0;
  const double mleft = 40.0, mtop = 20.0;
  const double row_h = 14.0;
  const double bars_top = mtop + chart_h + 30.0;
  const double height = bars_top + row_h * inst.size() + 30.0;
  const double xs = width / (t1 - t0);
  const double ys = chart_h / (smax * 1.1);
  auto X = [&](double t) { return mleft + (t - t0) * xs; };
  auto Y = [&](double sp) { return mtop + chart_h - sp * ys; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width + mleft + 20)
      << "\" height=\"" << num(height) << "\">\n";
  out << "<style>text{font-family:sans-serif;font-size:10px;}</style>\n";

  // axis
  out << "<line x1=\"" << num(X(t0)) << "\" y1=\"" << num(Y(0)) << "\" x2=\"" << num(X(t1))
      << "\" y2=\"" << num(Y(0)) << "\" stroke=\"#999\"/>\n";
  // critical speed marker
  out << "<line x1=\"" << num(X(t0)) << "\" y1=\"" << num(Y(sstar)) << "\" x2=\"" << num(X(t1))
      << "\" y2=\"" << num(Y(sstar))
      << "\" stroke=\"#bbb\" stroke-dasharray=\"4 3\"/>\n";

  const double tol = 1e-9 * std::max(1.0, sstar);
  for (const Segment& seg : s.segments) {
    if (seg.job == 0) continue;
    const char* color = "#6baed6"; // below critical speed
    if (std::abs(seg.speed - sstar) <= tol)
      color = "#74c476"; // at critical speed
    else if (seg.speed > sstar)
      color = "#fb6a4a"; // above
    out << "<rect x=\"" << num(X(seg.start)) << "\" y=\"" << num(Y(seg.speed)) << "\" width=\""
        << num((seg.end - seg.start) * xs) << "\" height=\"" << num(seg.speed * ys)
        << "\" fill=\"" << color << "\" stroke=\"#333\" stroke-width=\"0.5\"/>\n";
    out << "<text x=\"" << num(X(seg.start) + 2) << "\" y=\"" << num(Y(seg.speed) - 2) << "\">"
        << seg.job << "</text>\n";
  }

  // mode bar: thick where the machine is on
  const double mode_y = Y(0) + 10;
  for (const Segment& seg : s.segments) {
    if (seg.mode != Mode::On) continue;
    out << "<line x1=\"" << num(X(seg.start)) << "\" y1=\"" << num(mode_y) << "\" x2=\""
        << num(X(seg.end)) << "\" y2=\"" << num(mode_y)
        << "\" stroke=\"#000\" stroke-width=\"4\"/>\n";
  }

  // release/deadline window per job
  for (const Job& j : inst.jobs()) {
    const double y = bars_top + row_h * (j.id - 1);
    out << "<line x1=\"" << num(X(j.release)) << "\" y1=\"" << num(y) << "\" x2=\""
        << num(X(j.deadline)) << "\" y2=\"" << num(y) << "\" stroke=\"#555\"/>\n";
    out << "<line x1=\"" << num(X(j.release)) << "\" y1=\"" << num(y - 3) << "\" x2=\""
        << num(X(j.release)) << "\" y2=\"" << num(y + 3) << "\" stroke=\"#555\"/>\n";
    out << "<line x1=\"" << num(X(j.deadline)) << "\" y1=\"" << num(y - 3) << "\" x2=\""
        << num(X(j.deadline)) << "\" y2=\"" << num(y + 3) << "\" stroke=\"#555\"/>\n";
    out << "<text x=\"" << num(X(j.release) + 3) << "\" y=\"" << num(y - 2) << "\">w" << j.id
        << "=" << num(j.workload) << "</text>\n";
  }
  out << "</svg>\n";
}

} // namespace sspd
