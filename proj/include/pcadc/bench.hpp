#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pcadc/generators.hpp"
#include "pcadc/kernel.hpp"
#include "pcadc/robust.hpp"
#include "pcadc/solvers.hpp"

namespace pcadc {

enum class GeneratorKind { Gaussian, FixedSpectrum, Contaminated };

/// One benchmark problem instance description.
struct ProblemSpec {
  GeneratorKind generator = GeneratorKind::Gaussian;
  Index n_samples = 0;
  Index n_features = 0;
  int components = 1;
  double tol = 1e-3;
  std::uint64_t seed = 0;
  Vector spectrum;                                   // FixedSpectrum / Contaminated base
  GeneratorKind base = GeneratorKind::Gaussian;      // Contaminated base generator
  double fraction = 0.0;
  double noise_sigma = 0.0;

  std::string generator_name() const;
  DataMatrix build() const;
};

/// One experiment section: a problem crossed with a method list.
struct Experiment {
  std::string name;
  ProblemSpec problem;
  std::vector<std::string> methods;
  int reps = 5;
  int warmup = 1;
  double budget_ms = 5000.0;
  int max_iters = 2000;
  double stepsize = 1.0;
  std::string stopping = "relerr";  // relerr | relobj | angle
  KernelSpec kernel_spec;
  std::optional<double> epsilon;
};

/// One raw CSV row. Missing fields stay empty in the file; Skipped and Error
/// rows never carry objective values.
struct RunRecord {
  std::string method;
  std::string generator;
  Index n = 0, d = 0;
  int s = 1;
  double tol = 0.0;
  std::uint64_t seed = 0;
  int rep = 0;
  std::optional<double> ms;
  std::optional<double> objective;
  std::optional<int> iterations;
  std::string status;  // Converged | MaxIters | Skipped | Error
};

/// Aggregated record behind the timing tables: mean and std of the
/// milliseconds over repetitions.
struct BenchRecord {
  std::string method;
  std::string generator;
  Index n = 0, d = 0;
  int s = 1;
  double tol = 0.0;
  int runs = 0;
  double ms_mean = 0.0;
  double ms_std = 0.0;
  double objective_mean = 0.0;
  double iterations_mean = 0.0;
};

/// Every solver id the harness can dispatch.
const std::vector<std::string>& all_method_ids();
bool method_uses_kernel(const std::string& id);
bool method_has_reference(const std::string& id);

/// Closed-form optimum of the objective the method descends, from the top-s
/// spectrum of the data. Throws for methods without one (the robust family).
double method_reference(const std::string& id, const Matrix& x, int components);

/// Runs one named method on prebuilt data. The kernel matrix is only touched
/// by kernel-side methods.
SolverReport dispatch_method(const std::string& id, const Matrix& x, const Matrix& k,
                             const SolverConfig& cfg, const std::optional<double>& epsilon);

/// Parses the flat key=value experiment file (one [section] per experiment).
/// Malformed content raises InvalidInput with line and column.
std::vector<Experiment> parse_bench_config(const std::string& path);

/// Runs every experiment; appends one row per (method, repetition) to the
/// output CSV, flushing after each row. Timing wraps the solve call only.
void run_suite(const std::vector<Experiment>& experiments, const std::string& out_csv,
               std::ostream* log = nullptr);

std::vector<RunRecord> read_run_csv(const std::string& path);
void write_run_header(std::ostream& out);
void write_run_record(std::ostream& out, const RunRecord& row);

/// Groups raw rows by (method, generator, N, d, s, tol) and writes mean/std
/// aggregates; raw data is never modified.
void summarize_runs(const std::string& in_csv, const std::string& out_csv);

}  // namespace pcadc
