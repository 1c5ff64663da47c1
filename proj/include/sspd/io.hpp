#ifndef SSPD_IO_HPP
#define SSPD_IO_HPP

#include "sspd/dp.hpp"
#include "sspd/model.hpp"

#include <iosfwd>
#include <string>

namespace sspd {

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// shortest round-trip decimal form
std::string format_double(double x);

// text format: first line "alpha L g", one "r d w" line per job, '#' comments
Instance parse_instance_text(std::istream& in, bool strict_alpha = false);
// structured form: {"alpha":..,"wake_cost":..,"dissipation":..,"jobs":[{"r":..,"d":..,"w":..}]}
Instance parse_instance_json(std::istream& in, bool strict_alpha = false);
// dispatches on a leading '{'
Instance load_instance(const std::string& path, bool strict_alpha = false);
Instance parse_instance(const std::string& text, bool strict_alpha = false);

std::string emit_instance_text(const Instance& inst);
std::string emit_instance_json(const Instance& inst);

// records "start end mode speed job" plus a trailing comment block with the
// cost breakdown and the reconstruction trace
void write_schedule(std::ostream& out, const Instance& inst, const SolveResult& res);

// schedule records as written by write_schedule (comments ignored)
Schedule parse_schedule(std::istream& in, double horizon_start, double horizon_end);

void write_y_tables(std::ostream& out, const SolveResult& res);
void write_o_tables(std::ostream& out, const SolveResult& res);
void write_fh_tables(std::ostream& out, const EnergyModel& m, const SolveResult& res);

// Figure-style rendering: one box per run (height = speed, area = workload),
// colored by speed vs critical speed, a mode bar, and per-job window bars.
void render_svg(std::ostream& out, const Instance& inst, const Schedule& s);

} // namespace sspd

#endif
