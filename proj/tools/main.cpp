// fista-lab: generate instances, run solvers, compare schemes, inspect
// momentum schedules, and run the verification suites.
//
// Exit codes: 0 success, 1 check failure or solver failure, 2 usage error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fista/errors.hpp"
#include "fista/harness.hpp"
#include "fista/kernels.hpp"
#include "fista/momentum.hpp"
#include "fista/trace.hpp"
#include "fista/verify.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

struct GenArgs {
  std::string kind = "sparse";
  std::size_t m = 0, n = 0, structure = 0, block_size = 8;
  std::uint64_t seed = 1;
  double noise_level = 0.01;
  double lambda = 0.0;  // 0 = generator default
  std::string out;
};

struct SolveArgs {
  std::string spec_path;
  std::string scheme = "bt";
  double tol = 1e-9;
  long max_iters = 100000;
  double gamma = 0.0;
  bool force_gamma = false;
  bool record_objective = false;
  std::uint64_t seed = 0;  // 0 = spec seed
  std::string trace_path;
  bool small = false;
};

struct CompareArgs {
  std::string spec_path;
  std::vector<std::string> schemes;
  double tol = 1e-9;
  long max_iters = 200000;
  std::vector<std::uint64_t> seeds;
  std::string trace_dir;
  bool small = false;
  bool record_objective = false;
};

struct ScheduleArgs {
  std::string scheme = "mod";
  double p = 1.0, q = 1.0, r = 4.0, d = 2.0;
  long kmax = 100;
  std::string out;
};

struct VerifyArgs {
  std::string suite = "all";
};

int run_gen(const GenArgs& args) {
  fista::InstanceSpec spec;
  spec.kind = args.kind;
  spec.m = args.m;
  spec.n = args.n;
  spec.structure = args.structure;
  spec.seed = args.seed;
  spec.noise_level = args.noise_level;
  if (args.lambda > 0) spec.lambda = args.lambda;
  spec.block_size = args.block_size;
  // Reject invalid combinations up front; report the resolved parameters.
  const fista::LinearInverseInstance inst = fista::build_instance(spec);
  fista::write_instance_spec(args.out, spec);
  std::cout << "wrote " << args.out << '\n';
  std::printf("lambda %.17g\n", inst.lambda);
  std::printf("lipschitz %.17g\n", inst.lipschitz);
  return kOk;
}

int run_solve(const SolveArgs& args) {
  fista::InstanceSpec spec = fista::read_instance_spec(args.spec_path);
  if (args.small) spec = fista::scaled_down(spec);
  const fista::SchemeSpec scheme = fista::parse_scheme(args.scheme);
  const fista::LinearInverseInstance inst = fista::build_instance(
      spec, args.seed ? std::optional<std::uint64_t>(args.seed) : std::nullopt);
  const fista::LinearInverseProblem problem(inst);

  fista::SolverConfig config;
  config.tol = args.tol;
  config.max_iters = args.max_iters;
  config.gamma = args.gamma;
  config.allow_gamma_override = args.force_gamma;
  config.record_objective = args.record_objective;

  const fista::SolverResult res = fista::run_scheme(problem, scheme, config);
  if (!args.trace_path.empty())
    fista::write_trace_csv(args.trace_path, res.trace);

  std::cout << "scheme " << scheme.label << " on " << spec.kind << " m="
            << spec.m << " n=" << spec.n << '\n'
            << "iterations " << res.iterations << " ("
            << (res.reason == fista::TerminationReason::Tolerance
                    ? "tolerance reached"
                    : "iteration budget exhausted")
            << ")\n";
  if (!res.trace.empty()) {
    std::printf("final norm_dx %.17g\n", res.trace.back().norm_dx);
    std::printf("objective %.17g\n", problem.objective(res.x));
    std::printf("wall time %.3fs\n", res.trace.back().time_s);
  }
  return kOk;
}

int run_compare(const CompareArgs& args) {
  fista::InstanceSpec spec = fista::read_instance_spec(args.spec_path);
  if (args.small) spec = fista::scaled_down(spec);
  std::vector<fista::SchemeSpec> schemes;
  if (args.schemes.empty()) {
    schemes = fista::default_schemes();
  } else {
    for (const std::string& text : args.schemes)
      schemes.push_back(fista::parse_scheme(text));
  }
  std::vector<std::uint64_t> seeds = args.seeds;
  if (seeds.empty()) seeds = {1, 2, 3, 4, 5};

  const fista::ComparisonReport report =
      fista::run_comparison(spec, schemes, args.tol, args.max_iters, seeds,
                            args.trace_dir, args.record_objective);
  fista::print_report(std::cout, report);
  for (const fista::RunOutcome& run : report.runs)
    if (run.failed) return kCheckFailed;
  return kOk;
}

int run_schedule(const ScheduleArgs& args) {
  fista::MomentumParams params = fista::MomentumParams::bt();
  if (args.scheme == "bt") {
    params = fista::MomentumParams::bt();
  } else if (args.scheme == "lazy") {
    params = fista::MomentumParams::lazy();
  } else if (args.scheme == "cd") {
    params = fista::MomentumParams::cd(args.d);
  } else if (args.scheme == "mod") {
    params = fista::MomentumParams::mod(args.p, args.q, args.r);
  } else {
    throw CLI::ValidationError("--scheme must be bt, cd, mod or lazy");
  }

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!args.out.empty()) {
    file.open(args.out);
    if (!file) throw std::runtime_error("cannot open " + args.out);
    out = &file;
  }

  *out << "k,t_k,a_k\n";
  fista::MomentumState state;
  char buf[96];
  for (long k = 1; k <= args.kmax; ++k) {
    const fista::MomentumStep step = fista::momentum_step(params, state);
    std::snprintf(buf, sizeof(buf), "%ld,%.17g,%.17g\n", k, step.t, step.a);
    *out << buf;
    state = step.next;
  }
  return kOk;
}

int run_verify(const VerifyArgs& args) {
  std::vector<fista::verify::Suite> suites;
  if (args.suite == "all") {
    suites = fista::verify::all_suites();
  } else if (args.suite == "key-inequality") {
    suites.push_back(fista::verify::key_inequality_suite());
  } else if (args.suite == "limits") {
    suites.push_back(fista::verify::limit_suite());
  } else if (args.suite == "prox") {
    suites.push_back(fista::verify::prox_suite());
  } else {
    throw CLI::ValidationError(
        "--suite must be all, key-inequality, limits or prox");
  }
  bool ok = true;
  for (const auto& suite : suites) {
    fista::verify::print(std::cout, suite);
    ok = ok && suite.ok();
  }
  std::cout << (ok ? "all checks passed\n" : "checks FAILED\n");
  return ok ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("FISTA_LAB_THREADS")) {
    const int n = std::atoi(threads);
    if (n > 0) fista::kernels::set_threads(n);
  }

  CLI::App app{"proximal first-order solver lab"};
  app.require_subcommand(1);

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "write an instance spec file");
  gen_cmd->add_option("--kind", gen.kind, "sparse | group | saturated")
      ->check(CLI::IsMember({"sparse", "group", "saturated"}));
  gen_cmd->add_option("--m", gen.m, "rows")->required();
  gen_cmd->add_option("--n", gen.n, "columns")->required();
  gen_cmd->add_option("--structure", gen.structure,
                      "nonzeros / active blocks / saturated entries")
      ->required();
  gen_cmd->add_option("--seed", gen.seed, "generator seed (default 1)");
  gen_cmd->add_option("--noise", gen.noise_level,
                      "relative noise level (default 0.01)");
  gen_cmd->add_option("--lambda", gen.lambda,
                      "penalty weight (default: derived from the instance)");
  gen_cmd->add_option("--block-size", gen.block_size,
                      "group block width (default 8)");
  gen_cmd->add_option("--out", gen.out, "output path")->required();

  SolveArgs solve;
  CLI::App* solve_cmd =
      app.add_subcommand("solve", "run one scheme on one instance");
  solve_cmd->add_option("--spec", solve.spec_path, "instance spec file")
      ->required();
  solve_cmd->add_option("--scheme", solve.scheme,
                        "fbs | bt | lazy | cd:d=.. | mod:p=..,q=..[,r=..] | "
                        "ada[:kappa=..]");
  solve_cmd->add_option("--tol", solve.tol, "stop on ||dx|| <= tol");
  solve_cmd->add_option("--max-iters", solve.max_iters, "iteration budget");
  solve_cmd->add_option("--gamma", solve.gamma,
                        "step size (default 1/L; needs --force-gamma for "
                        "accelerated schemes)");
  solve_cmd->add_flag("--force-gamma", solve.force_gamma,
                      "accept a non-1/L step size for accelerated schemes");
  solve_cmd->add_flag("--record-objective", solve.record_objective,
                      "evaluate the objective each iteration");
  solve_cmd->add_option("--seed", solve.seed, "override the spec seed");
  solve_cmd->add_option("--trace", solve.trace_path, "trace CSV output path");
  solve_cmd->add_flag("--small", solve.small, "scale dimensions down by 4");

  CompareArgs compare;
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "run several schemes over several seeds");
  compare_cmd->add_option("--spec", compare.spec_path, "instance spec file")
      ->required();
  compare_cmd
      ->add_option("--schemes", compare.schemes,
                   "scheme list (default: bt cd:d=2 cd:d=50 cd:d=75 "
                   "lazy ada)")
      ->delimiter(',');
  compare_cmd->add_option("--tol", compare.tol, "stop on ||dx|| <= tol");
  compare_cmd->add_option("--max-iters", compare.max_iters,
                          "iteration budget");
  compare_cmd->add_option("--seeds", compare.seeds, "seed list (default: 1 2 3 4 5)")
      ->delimiter(',');
  compare_cmd->add_option("--trace-dir", compare.trace_dir,
                          "write one trace CSV per (scheme, seed)");
  compare_cmd->add_flag("--small", compare.small,
                        "scale dimensions down by 4");
  compare_cmd->add_flag("--record-objective", compare.record_objective,
                        "evaluate the objective each iteration");

  ScheduleArgs schedule;
  CLI::App* schedule_cmd = app.add_subcommand(
      "check-schedule", "emit a momentum schedule as CSV (k,t_k,a_k)");
  schedule_cmd->add_option("--scheme", schedule.scheme, "bt | cd | mod | lazy");
  schedule_cmd->add_option("--p", schedule.p, "mod parameter p");
  schedule_cmd->add_option("--q", schedule.q, "mod parameter q");
  schedule_cmd->add_option("--r", schedule.r, "mod parameter r");
  schedule_cmd->add_option("--d", schedule.d, "cd parameter d");
  schedule_cmd->add_option("--kmax", schedule.kmax, "steps to emit");
  schedule_cmd->add_option("--out", schedule.out,
                           "output path (default stdout)");

  VerifyArgs verify;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "run the self-check suites");
  verify_cmd->add_option("--suite", verify.suite,
                         "all | key-inequality | limits | prox");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kUsage;
  }

  try {
    if (gen_cmd->parsed()) return run_gen(gen);
    if (solve_cmd->parsed()) return run_solve(solve);
    if (compare_cmd->parsed()) return run_compare(compare);
    if (schedule_cmd->parsed()) return run_schedule(schedule);
    if (verify_cmd->parsed()) return run_verify(verify);
  } catch (const fista::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kCheckFailed;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
