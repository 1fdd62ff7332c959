#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

// Per-iteration solver records and their CSV form. The CSV carries 17
// significant digits, enough for doubles to round-trip exactly; columns a
// run does not record stay empty. Header:
//
//   k,norm_dx,obj,a_k,t_k,alpha_k,r_k,time_s

namespace fista {

struct TraceRow {
  long k = 0;
  double norm_dx = 0.0;
  std::optional<double> obj;
  std::optional<double> a;
  std::optional<double> t;
  std::optional<double> alpha;
  std::optional<double> r;
  double time_s = 0.0;
};

using Trace = std::vector<TraceRow>;

void write_trace_csv(std::ostream& out, const Trace& trace);
void write_trace_csv(const std::filesystem::path& path, const Trace& trace);

// Rejects malformed headers, rows with the wrong field count, and values
// that do not parse; a read-back of write_trace_csv is field-for-field
// identical to the source trace.
Trace read_trace_csv(std::istream& in);
Trace read_trace_csv(const std::filesystem::path& path);

}  // namespace fista
