// pcadc: PCA and robust kernel PCA through difference-of-convex duality.
//
// Subcommands:
//   solve      run one solver on a CSV data matrix
//   bench      run a timing suite from a key=value experiment file
//   summarize  aggregate a raw run CSV to mean/std rows
//   oos        score new points with a saved out-of-sample projector

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pcadc/bench.hpp"
#include "pcadc/io.hpp"
#include "pcadc/kernel.hpp"
#include "pcadc/robust.hpp"
#include "pcadc/solvers.hpp"

namespace {

using namespace pcadc;

// CLI formulation names to harness method ids.
std::string method_id_for(const std::string& formulation) {
  if (formulation == "l") return "dca-variance-primal";
  if (formulation == "m") return "kdual-m";
  if (formulation == "n") return "kdual-n";
  if (formulation == "o") return "kdual-o";
  if (formulation == "p") return "kdual-p";
  if (formulation == "q") return "kdual-q";
  if (formulation == "holder-primal") return "dca-holder-primal";
  if (formulation == "holder-dual") return "dca-holder-dual";
  if (formulation == "robust-primal") return "robust-primal";
  if (formulation == "robust-dual") return "robust-dual";
  if (formulation == "robust-irls") return "robust-irls";
  if (formulation == "simiter") return "simiter";
  if (formulation == "dense") return "dense";
  throw InvalidInput("unknown formulation: " + formulation);
}

const char* termination_name(Termination t) {
  return t == Termination::Converged ? "Converged" : "MaxIters";
}

struct SolveArgs {
  std::string formulation, input, out, model_out;
  int components = 1;
  double tol = 1e-8;
  int max_iters = 500;
  std::uint64_t seed = 0;
  std::string kernel = "linear";
  double gamma = 1.0;
  double epsilon = -1.0;
  double stepsize = 1.0;
  bool center = false;
};

int run_solve(const SolveArgs& args) {
  Matrix x = read_matrix_csv(args.input);
  if (args.center) x = center_columns(x);

  const std::string method = method_id_for(args.formulation);
  const KernelSpec spec =
      args.kernel == "rbf" ? KernelSpec::rbf(args.gamma) : KernelSpec::linear();
  const Matrix k = method_uses_kernel(method) ? kernel_matrix(x, spec) : Matrix();

  SolverConfig cfg;
  cfg.components = args.components;
  cfg.tol = args.tol;
  cfg.max_iters = args.max_iters;
  cfg.seed = args.seed;
  cfg.stepsize = args.stepsize;
  cfg.stopping = Stopping::RelObjChange;
  std::optional<double> epsilon;
  if (args.epsilon >= 0.0) epsilon = args.epsilon;

  const SolverReport report = dispatch_method(method, x, k, cfg, epsilon);
  write_matrix_csv(args.out, report.variable);

  if (!args.model_out.empty()) {
    if (!method_uses_kernel(method)) {
      throw InvalidInput("--model-out needs a kernel-side formulation (m|n|o|p|q|holder-dual|robust-dual)");
    }
    const OosProjector projector =
        build_oos_projector(report.variable, k, nuclear_mu_rule, spec, x);
    save_oos_projector(args.model_out, projector);
  }

  std::printf("formulation=%s objective=%.12g iterations=%d wall_s=%.4f status=%s\n",
              args.formulation.c_str(), report.final_objective(), report.iterations,
              report.wall_time_s, termination_name(report.termination));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PCA and robust kernel PCA solvers built on difference-of-convex duality"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Run one solver on a CSV data matrix");
  solve
      ->add_option("--formulation", solve_args.formulation,
                   "l|m|n|o|p|q|holder-primal|holder-dual|robust-primal|robust-dual|robust-irls|"
                   "simiter|dense")
      ->required()
      ->check(CLI::IsMember({"l", "m", "n", "o", "p", "q", "holder-primal", "holder-dual",
                             "robust-primal", "robust-dual", "robust-irls", "simiter", "dense"}));
  solve->add_option("--input", solve_args.input, "Input matrix CSV (no header, one sample per row)")
      ->required();
  solve->add_option("--components", solve_args.components, "Number of components s")->required();
  solve->add_option("--tol", solve_args.tol, "Stopping tolerance");
  solve->add_option("--max-iters", solve_args.max_iters, "Iteration cap");
  solve->add_option("--seed", solve_args.seed, "Initialization seed");
  solve->add_option("--kernel", solve_args.kernel, "linear|rbf (kernel-side formulations)")
      ->check(CLI::IsMember({"linear", "rbf"}));
  solve->add_option("--gamma", solve_args.gamma, "RBF length-scale parameter");
  solve->add_option("--epsilon", solve_args.epsilon, "Robust denominator regularizer");
  solve->add_option("--stepsize", solve_args.stepsize, "Proximal gradient stepsize");
  solve->add_option("--out", solve_args.out, "Output CSV for the converged variable")->required();
  solve->add_option("--model-out", solve_args.model_out,
                    "Also save an out-of-sample projector (kernel-side formulations)");
  solve->add_flag("--center", solve_args.center, "Subtract per-column means first");

  std::string bench_config, bench_out;
  auto* bench = app.add_subcommand("bench", "Run a timing suite");
  bench->add_option("--config", bench_config, "Experiment file (flat key=value sections)")
      ->required();
  bench->add_option("--out", bench_out, "Output CSV")->required();

  std::string summarize_in, summarize_out;
  auto* summarize = app.add_subcommand("summarize", "Aggregate a raw run CSV");
  summarize->add_option("--in", summarize_in, "Raw run CSV")->required();
  summarize->add_option("--out", summarize_out, "Summary CSV")->required();

  std::string oos_model, oos_points, oos_out;
  auto* oos = app.add_subcommand("oos", "Score new points with a saved projector");
  oos->add_option("--model", oos_model, "Projector file from solve --model-out")->required();
  oos->add_option("--points", oos_points, "CSV of new points, one per row")->required();
  oos->add_option("--out", oos_out, "Output CSV of scores, one row per point")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage errors exit with 2
  }

  try {
    if (solve->parsed()) return run_solve(solve_args);
    if (bench->parsed()) {
      run_suite(parse_bench_config(bench_config), bench_out, &std::cerr);
      return 0;
    }
    if (summarize->parsed()) {
      summarize_runs(summarize_in, summarize_out);
      return 0;
    }
    if (oos->parsed()) {
      const OosProjector projector = load_oos_projector(oos_model);
      const Matrix points = read_matrix_csv(oos_points);
      write_matrix_csv(oos_out, project_rows(projector, points));
      return 0;
    }
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
