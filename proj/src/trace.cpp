#include "fista/trace.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fista {
namespace {

constexpr std::string_view kHeader = "k,norm_dx,obj,a_k,t_k,alpha_k,r_k,time_s";

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt(const std::optional<double>& v) {
  return v ? fmt(*v) : std::string();
}

double parse_double(std::string_view field, long line_no) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.begin(), field.end(), v);
  if (ec != std::errc{} || ptr != field.end())
    throw std::runtime_error("trace csv: bad numeric field at line " +
                             std::to_string(line_no));
  return v;
}

std::optional<double> parse_optional(std::string_view field, long line_no) {
  if (field.empty()) return std::nullopt;
  return parse_double(field, line_no);
}

}  // namespace

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << kHeader << '\n';
  for (const TraceRow& row : trace) {
    out << row.k << ',' << fmt(row.norm_dx) << ',' << fmt(row.obj) << ','
        << fmt(row.a) << ',' << fmt(row.t) << ',' << fmt(row.alpha) << ','
        << fmt(row.r) << ',' << fmt(row.time_s) << '\n';
  }
}

void write_trace_csv(const std::filesystem::path& path, const Trace& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  write_trace_csv(out, trace);
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

Trace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kHeader)
    throw std::runtime_error("trace csv: unexpected header");
  Trace trace;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::string_view rest(line);
    std::string_view fields[8];
    std::size_t count = 0;
    while (true) {
      const std::size_t comma = rest.find(',');
      if (count == 8)
        throw std::runtime_error("trace csv: too many fields at line " +
                                 std::to_string(line_no));
      if (comma == std::string_view::npos) {
        fields[count++] = rest;
        break;
      }
      fields[count++] = rest.substr(0, comma);
      rest.remove_prefix(comma + 1);
    }
    if (count != 8)
      throw std::runtime_error("trace csv: expected 8 fields at line " +
                               std::to_string(line_no));
    TraceRow row;
    {
      const auto [ptr, ec] =
          std::from_chars(fields[0].begin(), fields[0].end(), row.k);
      if (ec != std::errc{} || ptr != fields[0].end())
        throw std::runtime_error("trace csv: bad iteration index at line " +
                                 std::to_string(line_no));
    }
    row.norm_dx = parse_double(fields[1], line_no);
    row.obj = parse_optional(fields[2], line_no);
    row.a = parse_optional(fields[3], line_no);
    row.t = parse_optional(fields[4], line_no);
    row.alpha = parse_optional(fields[5], line_no);
    row.r = parse_optional(fields[6], line_no);
    row.time_s = parse_double(fields[7], line_no);
    trace.push_back(std::move(row));
  }
  return trace;
}

Trace read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_trace_csv(in);
}

}  // namespace fista
