#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fista/problems.hpp"
#include "fista/solvers.hpp"

// Experiment runner: instance specs on disk, scheme parsing, reference
// solutions, and the multi-seed comparison that produces the speedup tables.

namespace fista {

// On-disk description of a linear inverse instance; matrices are always
// regenerated from this, never stored. Serialized as key=value lines.
struct InstanceSpec {
  std::string kind = "sparse";  // sparse | group | saturated
  std::size_t m = 0, n = 0, structure = 0;
  std::uint64_t seed = 1;
  double noise_level = 0.01;
  std::optional<double> lambda;  // unset = generator default
  std::size_t block_size = 8;
};

SignalKind parse_kind(const std::string& name);
std::string kind_name(SignalKind kind);

InstanceSpec read_instance_spec(const std::filesystem::path& path);
void write_instance_spec(const std::filesystem::path& path,
                         const InstanceSpec& spec);

// Divides m, n, structure by `factor` (at least 1 each); block size is kept.
InstanceSpec scaled_down(InstanceSpec spec, std::size_t factor = 4);

// Regenerates the instance, optionally under a different seed.
LinearInverseInstance build_instance(
    const InstanceSpec& spec,
    std::optional<std::uint64_t> seed_override = std::nullopt);

// A named solver choice. Accepted texts:
//   fbs | bt | lazy | cd:d=<val> | mod:p=<val>,q=<val>[,r=<val>]
//   ada[:kappa=<val>]
struct SchemeSpec {
  enum class Kind { Fbs, Fista, Ada };
  std::string label;
  Kind kind = Kind::Fista;
  MomentumParams params = MomentumParams::bt();
  long kappa = 30;
};

SchemeSpec parse_scheme(const std::string& text);
std::vector<SchemeSpec> default_schemes();  // bt, cd d=2/50/75, lazy, ada

// Dispatches to the solver matching the scheme; config.schedule must be
// unset (the scheme provides it).
SolverResult run_scheme(const Problem& problem, const SchemeSpec& scheme,
                        SolverConfig config, std::span<const double> x0 = {});

struct ReferenceSolution {
  std::vector<double> x_star;
  double phi_star = 0.0;
  bool converged = false;
  long iterations = 0;
};

// High-precision solve with the slow-momentum schedule; downstream bound
// checks skip when converged is false.
ReferenceSolution reference_solution(const Problem& problem,
                                     double precision = 1e-13,
                                     long max_iters = 1000000);

struct RunOutcome {
  std::string scheme;
  std::uint64_t seed = 0;
  long iterations = 0;   // max_iters when the tolerance was never reached
  bool reached = false;
  bool failed = false;   // numerical failure; iterations then holds the index
  std::string error;
  double final_norm_dx = 0.0;
  double time_s = 0.0;
};

struct SchemeSummary {
  std::string scheme;
  long median_iterations = 0;
  bool median_reached = false;
  // speedup(first scheme, this) = median_iterations(first) / this one's.
  double speedup_vs_first = 0.0;
};

struct ComparisonReport {
  InstanceSpec spec;
  std::vector<std::uint64_t> seeds;
  double tol = 0.0;
  long max_iters = 0;
  std::vector<RunOutcome> runs;
  std::vector<SchemeSummary> summary;
};

// Runs every scheme on every seed from x0 = 0, one trace CSV per
// (scheme, seed) when trace_dir is nonempty. A numerical failure marks its
// run and the sweep continues.
ComparisonReport run_comparison(const InstanceSpec& spec,
                                const std::vector<SchemeSpec>& schemes,
                                double tol, long max_iters,
                                const std::vector<std::uint64_t>& seeds,
                                const std::filesystem::path& trace_dir = {},
                                bool record_objective = false);

void print_report(std::ostream& out, const ComparisonReport& report);

// "<label with [:,=] mapped to ->_seed<seed>.csv"
std::string trace_filename(const SchemeSpec& scheme, std::uint64_t seed);

}  // namespace fista
