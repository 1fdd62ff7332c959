#include "fista/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "fista/errors.hpp"
#include "fista/trace.hpp"

namespace fista {
namespace {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint64_t parse_u64(const std::string& s, const std::string& key) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::runtime_error("instance spec: bad value for " + key);
  return v;
}

double parse_f64(const std::string& s, const std::string& key) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::runtime_error("instance spec: bad value for " + key);
  return v;
}

// "key=b,key2=c" tails of scheme texts.
std::map<std::string, double> parse_kv_list(const std::string& text,
                                            const std::string& what) {
  std::map<std::string, double> kv;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size())
      throw std::invalid_argument(what + ": expected key=value, got '" + item +
                                  "'");
    kv[item.substr(0, eq)] = parse_f64(item.substr(eq + 1), item);
  }
  return kv;
}

long median_of(std::vector<long> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

}  // namespace

SignalKind parse_kind(const std::string& name) {
  if (name == "sparse") return SignalKind::Sparse;
  if (name == "group") return SignalKind::Group;
  if (name == "saturated") return SignalKind::Saturated;
  throw std::invalid_argument("unknown instance kind '" + name + "'");
}

std::string kind_name(SignalKind kind) {
  switch (kind) {
    case SignalKind::Sparse:
      return "sparse";
    case SignalKind::Group:
      return "group";
    case SignalKind::Saturated:
      return "saturated";
  }
  return "sparse";
}

InstanceSpec read_instance_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  InstanceSpec spec;
  bool saw_kind = false, saw_m = false, saw_n = false, saw_structure = false;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("instance spec: expected key=value at line " +
                               std::to_string(line_no));
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "kind") {
      parse_kind(value);  // validates
      spec.kind = value;
      saw_kind = true;
    } else if (key == "m") {
      spec.m = parse_u64(value, key);
      saw_m = true;
    } else if (key == "n") {
      spec.n = parse_u64(value, key);
      saw_n = true;
    } else if (key == "structure") {
      spec.structure = parse_u64(value, key);
      saw_structure = true;
    } else if (key == "seed") {
      spec.seed = parse_u64(value, key);
    } else if (key == "noise_level") {
      spec.noise_level = parse_f64(value, key);
    } else if (key == "lambda") {
      spec.lambda = parse_f64(value, key);
    } else if (key == "block_size") {
      spec.block_size = parse_u64(value, key);
    } else {
      throw std::runtime_error("instance spec: unknown key '" + key + "'");
    }
  }
  if (!saw_kind || !saw_m || !saw_n || !saw_structure)
    throw std::runtime_error(
        "instance spec: kind, m, n and structure are required");
  return spec;
}

void write_instance_spec(const std::filesystem::path& path,
                         const InstanceSpec& spec) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "kind=" << spec.kind << '\n'
      << "m=" << spec.m << '\n'
      << "n=" << spec.n << '\n'
      << "structure=" << spec.structure << '\n'
      << "seed=" << spec.seed << '\n'
      << "noise_level=" << fmt17(spec.noise_level) << '\n';
  if (spec.lambda) out << "lambda=" << fmt17(*spec.lambda) << '\n';
  out << "block_size=" << spec.block_size << '\n';
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

InstanceSpec scaled_down(InstanceSpec spec, std::size_t factor) {
  if (factor == 0) throw std::invalid_argument("factor must be positive");
  spec.m = std::max<std::size_t>(spec.m / factor, 1);
  spec.n = std::max<std::size_t>(spec.n / factor, 1);
  spec.structure = std::max<std::size_t>(spec.structure / factor, 1);
  return spec;
}

LinearInverseInstance build_instance(const InstanceSpec& spec,
                                     std::optional<std::uint64_t> seed_override) {
  return gen_linear_inverse(parse_kind(spec.kind), spec.m, spec.n,
                            spec.structure, seed_override.value_or(spec.seed),
                            spec.noise_level, spec.lambda, spec.block_size);
}

SchemeSpec parse_scheme(const std::string& text) {
  SchemeSpec scheme;
  scheme.label = text;
  const std::size_t colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string tail =
      colon == std::string::npos ? std::string() : text.substr(colon + 1);

  if (head == "fbs") {
    if (!tail.empty()) throw std::invalid_argument("fbs takes no parameters");
    scheme.kind = SchemeSpec::Kind::Fbs;
    return scheme;
  }
  if (head == "bt") {
    if (!tail.empty()) throw std::invalid_argument("bt takes no parameters");
    scheme.params = MomentumParams::bt();
    return scheme;
  }
  if (head == "lazy") {
    if (!tail.empty()) throw std::invalid_argument("lazy takes no parameters");
    scheme.params = MomentumParams::lazy();
    return scheme;
  }
  if (head == "cd") {
    const auto kv = parse_kv_list(tail, "cd scheme");
    if (kv.size() != 1 || !kv.count("d"))
      throw std::invalid_argument("cd scheme wants exactly d=<val>");
    scheme.params = MomentumParams::cd(kv.at("d"));
    return scheme;
  }
  if (head == "mod") {
    auto kv = parse_kv_list(tail, "mod scheme");
    const double r = kv.count("r") ? kv.at("r") : 4.0;
    kv.erase("r");
    if (kv.size() != 2 || !kv.count("p") || !kv.count("q"))
      throw std::invalid_argument("mod scheme wants p=<val>,q=<val>[,r=<val>]");
    scheme.params = MomentumParams::mod(kv.at("p"), kv.at("q"), r);
    return scheme;
  }
  if (head == "ada") {
    scheme.kind = SchemeSpec::Kind::Ada;
    if (!tail.empty()) {
      const auto kv = parse_kv_list(tail, "ada scheme");
      if (kv.size() != 1 || !kv.count("kappa"))
        throw std::invalid_argument("ada scheme accepts only kappa=<val>");
      scheme.kappa = static_cast<long>(kv.at("kappa"));
      if (scheme.kappa < 1) throw std::invalid_argument("kappa must be >= 1");
    }
    return scheme;
  }
  throw std::invalid_argument("unknown scheme '" + text + "'");
}

std::vector<SchemeSpec> default_schemes() {
  std::vector<SchemeSpec> schemes;
  for (const char* text :
       {"bt", "cd:d=2", "cd:d=50", "cd:d=75", "lazy", "ada"})
    schemes.push_back(parse_scheme(text));
  return schemes;
}

SolverResult run_scheme(const Problem& problem, const SchemeSpec& scheme,
                        SolverConfig config, std::span<const double> x0) {
  if (config.schedule)
    throw std::invalid_argument("scheme and config.schedule both set");
  switch (scheme.kind) {
    case SchemeSpec::Kind::Fbs:
      return solve_fbs(problem, config, x0);
    case SchemeSpec::Kind::Fista:
      config.schedule = scheme.params;
      return solve_fista(problem, config, x0);
    case SchemeSpec::Kind::Ada: {
      AdaConfig ada;
      ada.kappa = scheme.kappa;
      return solve_ada_fista(problem, config, ada, x0);
    }
  }
  throw std::logic_error("unreachable scheme kind");
}

ReferenceSolution reference_solution(const Problem& problem, double precision,
                                     long max_iters) {
  if (!(precision > 0)) throw std::invalid_argument("precision must be positive");
  SolverConfig config;
  config.tol = precision;
  config.max_iters = max_iters;
  config.schedule = MomentumParams::lazy();
  const SolverResult res = solve_fista(problem, config);
  ReferenceSolution ref;
  ref.x_star = res.x;
  ref.phi_star = problem.objective(ref.x_star);
  ref.converged = res.reason == TerminationReason::Tolerance;
  ref.iterations = res.iterations;
  return ref;
}

std::string trace_filename(const SchemeSpec& scheme, std::uint64_t seed) {
  std::string label = scheme.label;
  for (char& c : label)
    if (c == ':' || c == ',' || c == '=') c = '-';
  return label + "_seed" + std::to_string(seed) + ".csv";
}

ComparisonReport run_comparison(const InstanceSpec& spec,
                                const std::vector<SchemeSpec>& schemes,
                                double tol, long max_iters,
                                const std::vector<std::uint64_t>& seeds,
                                const std::filesystem::path& trace_dir,
                                bool record_objective) {
  if (schemes.empty()) throw std::invalid_argument("no schemes given");
  if (seeds.empty()) throw std::invalid_argument("no seeds given");
  if (!trace_dir.empty()) std::filesystem::create_directories(trace_dir);

  ComparisonReport report;
  report.spec = spec;
  report.seeds = seeds;
  report.tol = tol;
  report.max_iters = max_iters;

  for (const std::uint64_t seed : seeds) {
    const LinearInverseInstance inst = build_instance(spec, seed);
    const LinearInverseProblem problem(inst);
    for (const SchemeSpec& scheme : schemes) {
      RunOutcome outcome;
      outcome.scheme = scheme.label;
      outcome.seed = seed;
      SolverConfig config;
      config.tol = tol;
      config.max_iters = max_iters;
      config.record_objective = record_objective;
      try {
        const SolverResult res = run_scheme(problem, scheme, config);
        outcome.iterations = res.iterations;
        outcome.reached = res.reason == TerminationReason::Tolerance;
        if (!res.trace.empty()) {
          outcome.final_norm_dx = res.trace.back().norm_dx;
          outcome.time_s = res.trace.back().time_s;
        }
        if (!trace_dir.empty())
          write_trace_csv(trace_dir / trace_filename(scheme, seed), res.trace);
      } catch (const NumericalFailure& e) {
        outcome.failed = true;
        outcome.error = e.what();
        outcome.iterations = e.iteration;
      }
      report.runs.push_back(std::move(outcome));
    }
  }

  long first_median = 0;
  for (const SchemeSpec& scheme : schemes) {
    std::vector<long> iters;
    std::vector<char> reached_flags;
    for (const RunOutcome& run : report.runs) {
      if (run.scheme != scheme.label || run.failed) continue;
      iters.push_back(run.reached ? run.iterations : max_iters);
      reached_flags.push_back(run.reached ? 1 : 0);
    }
    SchemeSummary summary;
    summary.scheme = scheme.label;
    if (!iters.empty()) {
      summary.median_iterations = median_of(iters);
      // The median element is "reached" when at least half the runs reached
      // tolerance at or below that count.
      long reached_at_or_below = 0;
      for (std::size_t i = 0; i < iters.size(); ++i)
        if (reached_flags[i] && iters[i] <= summary.median_iterations)
          ++reached_at_or_below;
      summary.median_reached =
          2 * reached_at_or_below >= static_cast<long>(iters.size());
    } else {
      summary.median_iterations = max_iters;
    }
    if (summary.scheme == schemes.front().label)
      first_median = summary.median_iterations;
    summary.speedup_vs_first =
        static_cast<double>(first_median) /
        static_cast<double>(std::max<long>(summary.median_iterations, 1));
    report.summary.push_back(std::move(summary));
  }
  return report;
}

void print_report(std::ostream& out, const ComparisonReport& report) {
  out << "instance: kind=" << report.spec.kind << " m=" << report.spec.m
      << " n=" << report.spec.n << " structure=" << report.spec.structure
      << " noise_level=" << report.spec.noise_level;
  if (report.spec.lambda) out << " lambda=" << *report.spec.lambda;
  out << "\nseeds:";
  for (const auto seed : report.seeds) out << ' ' << seed;
  out << "\ntol=" << report.tol << " max_iters=" << report.max_iters << "\n\n";

  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-16s %16s %14s\n", "scheme",
                "median iters", "speedup");
  out << buf;
  for (const SchemeSummary& s : report.summary) {
    char iters[32];
    if (s.median_reached)
      std::snprintf(iters, sizeof(iters), "%ld", s.median_iterations);
    else
      std::snprintf(iters, sizeof(iters), ">= %ld", s.median_iterations);
    std::snprintf(buf, sizeof(buf), "%-16s %16s %13.2fx\n", s.scheme.c_str(),
                  iters, s.speedup_vs_first);
    out << buf;
  }

  bool any_detail = false;
  for (const RunOutcome& run : report.runs) {
    if (!run.failed && run.reached) continue;
    if (!any_detail) {
      out << "\nincomplete runs:\n";
      any_detail = true;
    }
    out << "  " << run.scheme << " seed " << run.seed << ": "
        << (run.failed ? "numerical failure: " + run.error
                       : "tolerance not reached within budget")
        << '\n';
  }

  out << "\nper-seed iterations:\n";
  for (const RunOutcome& run : report.runs) {
    std::snprintf(buf, sizeof(buf), "  %-16s seed %-6llu %8ld%s  time %.3fs\n",
                  run.scheme.c_str(),
                  static_cast<unsigned long long>(run.seed), run.iterations,
                  run.failed ? " (failed)" : (run.reached ? "" : " (budget)"),
                  run.time_s);
    out << buf;
  }
}

}  // namespace fista
