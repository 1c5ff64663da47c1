#include "sspd/io.hpp"

#include "sspd/oracle.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace sspd {

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace {

double parse_num(const std::string& tok, int line) {
  double v = 0;
  const char* b = tok.data();
  const char* e = tok.data() + tok.size();
  auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc() || res.ptr != e)
    throw ParseError("line " + std::to_string(line) + ": bad number '" + tok + "'");
  return v;
}

Instance build_instance(double alpha, double L, double g, std::vector<Job> jobs,
                        bool strict_alpha) {
  if (jobs.empty()) throw ParseError("no jobs");
  EnergyModel model(alpha, L, g, strict_alpha);
  for (const Job& j : jobs)
    if (!(j.workload > 0)) throw ParseError("non-positive workload");
  return Instance(model, std::move(jobs));
}

} // namespace

Instance parse_instance_text(std::istream& in, bool strict_alpha) {
  std::string line;
  int lineno = 0;
  bool have_header = false;
  double alpha = 0, L = 0, g = 0;
  std::vector<Job> jobs;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string tok;
    while (ls >> tok) toks.push_back(tok);
    if (toks.empty()) continue;
    if (toks.size() != 3)
      throw ParseError("line " + std::to_string(lineno) + ": expected three fields");
    if (!have_header) {
      alpha = parse_num(toks[0], lineno);
      L = parse_num(toks[1], lineno);
      g = parse_num(toks[2], lineno);
      have_header = true;
    } else {
      Job j;
      j.release = parse_num(toks[0], lineno);
      j.deadline = parse_num(toks[1], lineno);
      j.workload = parse_num(toks[2], lineno);
      jobs.push_back(j);
    }
  }
  if (!have_header) throw ParseError("empty instance file");
  return build_instance(alpha, L, g, std::move(jobs), strict_alpha);
}

Instance parse_instance_json(std::istream& in, bool strict_alpha) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("json: ") + e.what());
  }
  try {
    std::vector<Job> jobs;
    for (const auto& ji : doc.at("jobs")) {
      Job j;
      j.release = ji.at("r").get<double>();
      j.deadline = ji.at("d").get<double>();
      j.workload = ji.at("w").get<double>();
      jobs.push_back(j);
    }
    return build_instance(doc.at("alpha").get<double>(), doc.at("wake_cost").get<double>(),
                          doc.at("dissipation").get<double>(), std::move(jobs), strict_alpha);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("json: ") + e.what());
  }
}

Instance parse_instance(const std::string& text, bool strict_alpha) {
  std::istringstream in(text);
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c == '{') return parse_instance_json(in, strict_alpha);
    break;
  }
  return parse_instance_text(in, strict_alpha);
}

Instance load_instance(const std::string& path, bool strict_alpha) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str(), strict_alpha);
}

std::string emit_instance_text(const Instance& inst) {
  std::ostringstream os;
  const EnergyModel& m = inst.model();
  os << format_double(m.alpha) << ' ' << format_double(m.wake_cost) << ' '
     << format_double(m.dissipation) << '\n';
  for (const Job& j : inst.jobs())
    os << format_double(j.release) << ' ' << format_double(j.deadline) << ' '
       << format_double(j.workload) << '\n';
  return os.str();
}

std::string emit_instance_json(const Instance& inst) {
  nlohmann::json doc;
  doc["alpha"] = inst.model().alpha;
  doc["wake_cost"] = inst.model().wake_cost;
  doc["dissipation"] = inst.model().dissipation;
  auto& arr = doc["jobs"] = nlohmann::json::array();
  for (const Job& j : inst.jobs())
    arr.push_back({{"r", j.release}, {"d", j.deadline}, {"w", j.workload}});
  return doc.dump(2) + "\n";
}

void write_schedule(std::ostream& out, const Instance& inst, const SolveResult& res) {
  out << "# start end mode speed job\n";
  for (const Segment& seg : res.schedule.segments) {
    out << format_double(seg.start) << ' ' << format_double(seg.end) << ' '
        << (seg.mode == Mode::On ? "on" : "off") << ' ' << format_double(seg.speed) << ' ';
    if (seg.job == 0)
      out << '-';
    else
      out << seg.job;
    out << '\n';
  }
  out << "# speed_cost " << format_double(res.cost.speed_cost) << '\n';
  out << "# mode_cost " << format_double(res.cost.mode_cost) << '\n';
  out << "# wakeups " << res.cost.wakeups << '\n';
  out << "# on_duration " << format_double(res.cost.on_duration) << '\n';
  out << "# total " << format_double(res.cost.total) << '\n';
  out << "# critical_speed " << format_double(inst.model().critical_speed) << '\n';
  if (!res.decomp.dense_regions.empty()) {
    out << "# dense:";
    for (const auto& [a, b] : res.decomp.dense_regions)
      out << " [" << format_double(a) << "," << format_double(b) << ")";
    out << '\n';
  }
  for (const std::string& line : res.trace) out << "# trace " << line << '\n';
}

Schedule parse_schedule(std::istream& in, double horizon_start, double horizon_end) {
  Schedule s;
  s.horizon_start = horizon_start;
  s.horizon_end = horizon_end;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string a, b, mode, speed, job;
    if (!(ls >> a)) continue;
    if (!(ls >> b >> mode >> speed >> job))
      throw ParseError("schedule line " + std::to_string(lineno) + ": expected five fields");
    Segment seg;
    seg.start = parse_num(a, lineno);
    seg.end = parse_num(b, lineno);
    if (mode == "on")
      seg.mode = Mode::On;
    else if (mode == "off")
      seg.mode = Mode::Off;
    else
      throw ParseError("schedule line " + std::to_string(lineno) + ": bad mode");
    seg.speed = parse_num(speed, lineno);
    seg.job = (job == "-") ? 0 : static_cast<int>(parse_num(job, lineno));
    s.segments.push_back(seg);
  }
  return s;
}

namespace {

void write_tables(std::ostream& out, const SolveResult& res, bool want_o) {
  for (size_t t = 0; t < res.decomp.gaps.size(); ++t) {
    const int ti = res.gap_table_index[t];
    if (ti < 0) continue;
    const Subinstance& gap = res.decomp.gaps[t];
    out << "# gap jobs " << gap.lo << ".." << gap.hi << " over ["
        << format_double(gap.left) << "," << format_double(gap.right) << ")\n";
    const int m = res.ytables[static_cast<size_t>(ti)].size();
    for (int i = 1; i <= m + 1; ++i) {
      for (int j = i - 1; j <= m; ++j) {
        const double v = want_o ? res.otables[static_cast<size_t>(ti)].get(i, j)
                                : res.ytables[static_cast<size_t>(ti)].get(i, j);
        out << (want_o ? 'O' : 'Y') << '[' << gap.lo + i - 1 << "][" << gap.lo + j - 1
            << "] = " << (std::isinf(v) ? "inf" : format_double(v)) << '\n';
      }
    }
  }
}

} // namespace

void write_y_tables(std::ostream& out, const SolveResult& res) { write_tables(out, res, false); }
void write_o_tables(std::ostream& out, const SolveResult& res) { write_tables(out, res, true); }

void write_fh_tables(std::ostream& out, const EnergyModel& m, const SolveResult& res) {
  std::vector<std::pair<int, int>> chains;
  std::vector<int> h;
  for (size_t t = 0; t < res.decomp.gaps.size(); ++t) {
    const Subinstance& gap = res.decomp.gaps[t];
    if (gap.empty()) continue;
    GapView g = make_gap_view(m, gap);
    compute_f(g, 1, g.m, chains);
    compute_h(g, 1, g.m, h);
    out << "# gap jobs " << gap.lo << ".." << gap.hi << '\n';
    for (const auto& [a, b] : chains)
      out << "f[" << gap.lo + a - 1 << "] = " << gap.lo + b - 1 << '\n';
    for (int k = 1; k <= g.m; ++k)
      out << "h[" << gap.lo + k - 1 << "] = " << gap.lo + h[static_cast<size_t>(k)] - 1
          << '\n';
  }
}

} // namespace sspd
