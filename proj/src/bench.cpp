#include "pcadc/bench.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace pcadc {

namespace {

constexpr const char* kHeader = "method,generator,N,d,s,tol,seed,rep,ms,objective,iterations,status";

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double now_ms_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

Stopping parse_stopping(const std::string& s) {
  if (s == "relobj") return Stopping::RelObjChange;
  if (s == "angle") return Stopping::SubspaceAngle;
  if (s == "relerr") return Stopping::RelErrToReference;
  throw InvalidInput("unknown stopping criterion: " + s);
}

}  // namespace

std::string ProblemSpec::generator_name() const {
  switch (generator) {
    case GeneratorKind::Gaussian: return "gaussian";
    case GeneratorKind::FixedSpectrum: return "fixed-spectrum";
    case GeneratorKind::Contaminated: return "contaminated";
  }
  return "?";
}

DataMatrix ProblemSpec::build() const {
  switch (generator) {
    case GeneratorKind::Gaussian:
      return gen_gaussian(n_samples, n_features, seed);
    case GeneratorKind::FixedSpectrum:
      return gen_fixed_spectrum(n_samples, n_features, spectrum, seed);
    case GeneratorKind::Contaminated: {
      DataMatrix base_data = base == GeneratorKind::Gaussian
                                 ? gen_gaussian(n_samples, n_features, seed)
                                 : gen_fixed_spectrum(n_samples, n_features, spectrum, seed);
      return contaminate(base_data, fraction, noise_sigma, seed + 1).first;
    }
  }
  throw InvalidInput("ProblemSpec: unknown generator");
}

const std::vector<std::string>& all_method_ids() {
  static const std::vector<std::string> ids = {
      "dca-variance-primal", "dca-variance-dual", "dca-holder-primal", "dca-holder-dual",
      "kdual-l", "kdual-m", "kdual-n", "kdual-o", "kdual-p", "kdual-q",
      "pg-l", "pg-n", "pg-o", "pg-q",
      "simiter", "dense",
      "robust-primal", "robust-dual", "robust-irls"};
  return ids;
}

bool method_uses_kernel(const std::string& id) {
  return id == "dca-variance-dual" || id == "dca-holder-dual" || id.rfind("kdual-", 0) == 0 ||
         id == "robust-dual";
}

bool method_has_reference(const std::string& id) {
  return id.rfind("robust-", 0) != 0;
}

double method_reference(const std::string& id, const Matrix& x, int components) {
  if (!method_has_reference(id)) {
    throw InvalidInput("method_reference: no closed-form optimum for " + id);
  }
  if (id == "kdual-n" || id == "kdual-o" || id == "pg-n" || id == "pg-o") {
    return formulation_optimum(Formulation::N, x, components);
  }
  if (id == "dca-holder-primal" || id == "dca-holder-dual") {
    return formulation_optimum(Formulation::HolderPrimal, x, components);
  }
  return formulation_optimum(Formulation::L, x, components);
}

SolverReport dispatch_method(const std::string& id, const Matrix& x, const Matrix& k,
                             const SolverConfig& cfg, const std::optional<double>& epsilon) {
  if (id == "dca-variance-primal") return solve_dca_variance_primal(x, cfg);
  if (id == "dca-variance-dual") return solve_dca_variance_dual(k, cfg);
  if (id == "dca-holder-primal") return solve_dca_holder_primal(x, cfg);
  if (id == "dca-holder-dual") return solve_dca_holder_dual(k, cfg);
  if (id.rfind("kdual-", 0) == 0 && id.size() == 7) {
    const char which = id.back();
    const Formulation form = which == 'l'   ? Formulation::L
                             : which == 'm' ? Formulation::M
                             : which == 'n' ? Formulation::N
                             : which == 'o' ? Formulation::O
                             : which == 'p' ? Formulation::P
                                            : Formulation::Q;
    if (which < 'l' || which > 'q') throw InvalidInput("unknown method: " + id);
    return kernel_dual_iteration(form, k, cfg);
  }
  if (id == "pg-l") return proximal_gradient(Formulation::L, x, cfg);
  if (id == "pg-n") return proximal_gradient(Formulation::N, x, cfg);
  if (id == "pg-o") return proximal_gradient(Formulation::O, x, cfg);
  if (id == "pg-q") return proximal_gradient(Formulation::Q, x, cfg);
  if (id == "simiter") {
    const Matrix c = x.transpose() * x;
    return simultaneous_iteration([&c](const Matrix& w) { return c * w; }, x.cols(), cfg);
  }
  if (id == "dense") {
    const auto t0 = std::chrono::steady_clock::now();
    DensePcaSolution sol = dense_pca_oracle(x, cfg.components);
    SolverReport rep;
    rep.variable = std::move(sol.basis);
    rep.objective_trace = {-0.5 * sol.values.sum()};
    rep.iterations = 1;
    rep.termination = Termination::Converged;
    rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
  }
  if (id.rfind("robust-", 0) == 0) {
    RobustConfig rcfg;
    static_cast<SolverConfig&>(rcfg) = cfg;
    rcfg.stopping = Stopping::RelObjChange;  // no closed-form reference exists
    rcfg.epsilon = epsilon;
    if (id == "robust-primal") return solve_robust_primal(x, rcfg);
    if (id == "robust-dual") return solve_robust_dual(k, rcfg);
    if (id == "robust-irls") return solve_robust_irls(x, rcfg);
  }
  throw InvalidInput("unknown method: " + id);
}

// -- Config parsing --------------------------------------------------------

namespace {

[[noreturn]] void config_error(Index line, Index col, const std::string& message) {
  throw InvalidInput("config parse error at line " + std::to_string(line) + ", column " +
                     std::to_string(col) + ": " + message);
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t next = s.find(sep, pos);
    parts.push_back(trim(s.substr(pos, next == std::string::npos ? std::string::npos : next - pos)));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return parts;
}

double to_double(const std::string& v, Index line) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) config_error(line, 1, "bad number '" + v + "'");
    return x;
  } catch (const InvalidInput&) {
    throw;
  } catch (const std::exception&) {
    config_error(line, 1, "bad number '" + v + "'");
  }
}

long long to_int(const std::string& v, Index line) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size()) config_error(line, 1, "bad integer '" + v + "'");
    return x;
  } catch (const InvalidInput&) {
    throw;
  } catch (const std::exception&) {
    config_error(line, 1, "bad integer '" + v + "'");
  }
}

// Spectrum forms: "exp:c:r" (sigma_i = c * r^i), "lin:a:b" (linear from a to
// b), "vals:v1,v2,..." (explicit, padded with the last value).
Vector parse_spectrum(const std::string& v, Index n, Index d, Index line) {
  const Index len = std::min(n, d);
  const auto parts = split(v, ':');
  if (parts.size() < 2) config_error(line, 1, "spectrum needs a form prefix (exp:, lin:, vals:)");
  Vector spec(len);
  if (parts[0] == "exp") {
    if (parts.size() != 3) config_error(line, 1, "spectrum exp:c:r needs two parameters");
    const double c = to_double(parts[1], line), r = to_double(parts[2], line);
    for (Index i = 0; i < len; ++i) spec(i) = c * std::pow(r, static_cast<double>(i + 1));
  } else if (parts[0] == "lin") {
    if (parts.size() != 3) config_error(line, 1, "spectrum lin:a:b needs two parameters");
    const double a = to_double(parts[1], line), b = to_double(parts[2], line);
    for (Index i = 0; i < len; ++i) {
      spec(i) = len == 1 ? a : a - static_cast<double>(i) * (a - b) / static_cast<double>(len - 1);
    }
  } else if (parts[0] == "vals") {
    const auto vals = split(parts[1], ',');
    if (vals.empty()) config_error(line, 1, "spectrum vals: needs at least one value");
    for (Index i = 0; i < len; ++i) {
      const std::size_t idx = std::min(static_cast<std::size_t>(i), vals.size() - 1);
      spec(i) = to_double(vals[idx], line);
    }
  } else {
    config_error(line, 1, "unknown spectrum form '" + parts[0] + "'");
  }
  return spec;
}

}  // namespace

std::vector<Experiment> parse_bench_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("parse_bench_config: cannot open " + path);

  std::vector<Experiment> experiments;
  std::map<std::string, std::pair<std::string, Index>> pending;  // key -> (value, line)
  std::string section_name;
  bool in_section = false;
  Index section_line = 0;

  const auto finalize = [&]() {
    if (!in_section) return;
    const auto take = [&](const std::string& key) -> std::optional<std::pair<std::string, Index>> {
      auto it = pending.find(key);
      if (it == pending.end()) return std::nullopt;
      auto out = it->second;
      pending.erase(it);
      return out;
    };
    const auto require = [&](const std::string& key) {
      auto v = take(key);
      if (!v) config_error(section_line, 1, "section [" + section_name + "] is missing '" + key + "'");
      return *v;
    };

    Experiment exp;
    exp.name = section_name;
    exp.problem.n_samples = to_int(require("N").first, section_line);
    exp.problem.n_features = to_int(require("d").first, section_line);
    exp.problem.components = static_cast<int>(to_int(require("s").first, section_line));
    exp.problem.tol = to_double(require("tol").first, section_line);
    exp.problem.seed = static_cast<std::uint64_t>(to_int(require("seed").first, section_line));

    const auto gen = require("generator");
    if (gen.first == "gaussian") {
      exp.problem.generator = GeneratorKind::Gaussian;
    } else if (gen.first == "fixed-spectrum") {
      exp.problem.generator = GeneratorKind::FixedSpectrum;
    } else if (gen.first == "contaminated") {
      exp.problem.generator = GeneratorKind::Contaminated;
    } else {
      config_error(gen.second, 1, "unknown generator '" + gen.first + "'");
    }

    if (auto v = take("spectrum")) {
      exp.problem.spectrum =
          parse_spectrum(v->first, exp.problem.n_samples, exp.problem.n_features, v->second);
    } else if (exp.problem.generator == GeneratorKind::FixedSpectrum) {
      config_error(section_line, 1, "fixed-spectrum generator needs 'spectrum'");
    }
    if (auto v = take("base")) {
      if (v->first == "gaussian") {
        exp.problem.base = GeneratorKind::Gaussian;
      } else if (v->first == "fixed-spectrum") {
        exp.problem.base = GeneratorKind::FixedSpectrum;
      } else {
        config_error(v->second, 1, "unknown base generator '" + v->first + "'");
      }
    }
    if (auto v = take("fraction")) exp.problem.fraction = to_double(v->first, v->second);
    if (auto v = take("noise_sigma")) exp.problem.noise_sigma = to_double(v->first, v->second);
    if (exp.problem.generator == GeneratorKind::Contaminated && exp.problem.noise_sigma <= 0.0) {
      config_error(section_line, 1, "contaminated generator needs a positive 'noise_sigma'");
    }

    const auto methods_kv = require("methods");
    if (methods_kv.first == "all") {
      exp.methods = all_method_ids();
    } else {
      exp.methods = split(methods_kv.first, ',');
      for (const auto& m : exp.methods) {
        if (std::find(all_method_ids().begin(), all_method_ids().end(), m) ==
            all_method_ids().end()) {
          config_error(methods_kv.second, 1, "unknown method '" + m + "'");
        }
      }
    }

    if (auto v = take("reps")) exp.reps = static_cast<int>(to_int(v->first, v->second));
    if (auto v = take("warmup")) exp.warmup = static_cast<int>(to_int(v->first, v->second));
    if (auto v = take("budget_ms")) exp.budget_ms = to_double(v->first, v->second);
    if (auto v = take("max_iters")) exp.max_iters = static_cast<int>(to_int(v->first, v->second));
    if (auto v = take("stepsize")) exp.stepsize = to_double(v->first, v->second);
    if (auto v = take("stopping")) {
      parse_stopping(v->first);  // validates
      exp.stopping = v->first;
    }
    if (auto v = take("epsilon")) exp.epsilon = to_double(v->first, v->second);
    if (auto v = take("kernel")) {
      if (v->first == "linear") {
        exp.kernel_spec = KernelSpec::linear();
      } else if (v->first == "rbf") {
        auto g = take("gamma");
        if (!g) config_error(v->second, 1, "rbf kernel needs 'gamma'");
        exp.kernel_spec = KernelSpec::rbf(to_double(g->first, g->second));
      } else {
        config_error(v->second, 1, "unknown kernel '" + v->first + "'");
      }
    }

    if (!pending.empty()) {
      config_error(pending.begin()->second.second, 1,
                   "unknown key '" + pending.begin()->first + "'");
    }
    if (exp.reps < 1 || exp.warmup < 0) {
      config_error(section_line, 1, "reps must be >= 1 and warmup >= 0");
    }
    experiments.push_back(std::move(exp));
    pending.clear();
  };

  std::string raw;
  Index line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        config_error(line_no, static_cast<Index>(raw.size()), "missing closing ']'");
      }
      finalize();
      section_name = trim(line.substr(1, line.size() - 2));
      if (section_name.empty()) config_error(line_no, 2, "empty section name");
      in_section = true;
      section_line = line_no;
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      config_error(line_no, static_cast<Index>(raw.find(line[0]) + 1), "expected 'key = value'");
    }
    if (!in_section) config_error(line_no, 1, "key outside any [section]");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) config_error(line_no, 1, "empty key");
    if (value.empty()) config_error(line_no, static_cast<Index>(eq + 2), "empty value");
    if (pending.count(key) != 0) config_error(line_no, 1, "duplicate key '" + key + "'");
    pending[key] = {value, line_no};
  }
  finalize();
  if (experiments.empty()) throw InvalidInput("parse_bench_config: no experiments in " + path);
  return experiments;
}

// -- Suite execution --------------------------------------------------------

void write_run_header(std::ostream& out) { out << kHeader << '\n' << std::flush; }

void write_run_record(std::ostream& out, const RunRecord& row) {
  out << row.method << ',' << row.generator << ',' << row.n << ',' << row.d << ',' << row.s << ','
      << format_double(row.tol) << ',' << row.seed << ',' << row.rep << ',';
  if (row.ms) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3f", *row.ms);
    out << buf;
  }
  out << ',';
  if (row.objective) out << format_double(*row.objective);
  out << ',';
  if (row.iterations) out << *row.iterations;
  out << ',' << row.status << '\n' << std::flush;
}

void run_suite(const std::vector<Experiment>& experiments, const std::string& out_csv,
               std::ostream* log) {
  std::ofstream out(out_csv);
  if (!out) throw InvalidInput("run_suite: cannot open " + out_csv);
  write_run_header(out);

  for (const auto& exp : experiments) {
    const DataMatrix data = exp.problem.build();
    const Matrix& x = data.values;
    const bool need_kernel = std::any_of(exp.methods.begin(), exp.methods.end(),
                                         [](const std::string& m) { return method_uses_kernel(m); });
    const Matrix k = need_kernel ? kernel_matrix(x, exp.kernel_spec) : Matrix();

    for (const auto& method : exp.methods) {
      RunRecord base;
      base.method = method;
      base.generator = exp.problem.generator_name();
      base.n = exp.problem.n_samples;
      base.d = exp.problem.n_features;
      base.s = exp.problem.components;
      base.tol = exp.problem.tol;
      base.seed = exp.problem.seed;

      SolverConfig cfg;
      cfg.components = exp.problem.components;
      cfg.tol = exp.problem.tol;
      cfg.max_iters = exp.max_iters;
      cfg.seed = exp.problem.seed;
      cfg.stepsize = exp.stepsize;
      cfg.stopping = parse_stopping(exp.stopping);
      if (cfg.stopping == Stopping::RelErrToReference) {
        if (method_has_reference(method)) {
          cfg.reference = method_reference(method, x, cfg.components);
        } else {
          cfg.stopping = Stopping::RelObjChange;
        }
      }

      const auto emit_all = [&](const std::string& status) {
        for (int rep = 0; rep < exp.reps; ++rep) {
          RunRecord row = base;
          row.rep = rep;
          row.status = status;
          write_run_record(out, row);
        }
      };

      // Warmup runs are unrecorded but enforce the time budget.
      bool over_budget = false, errored = false;
      for (int w = 0; w < exp.warmup && !over_budget && !errored; ++w) {
        const auto t0 = std::chrono::steady_clock::now();
        try {
          dispatch_method(method, x, k, cfg, exp.epsilon);
        } catch (const std::exception& e) {
          if (log) *log << exp.name << "/" << method << ": " << e.what() << '\n';
          errored = true;
        }
        if (now_ms_since(t0) > exp.budget_ms) over_budget = true;
      }
      if (errored) {
        emit_all("Error");
        continue;
      }
      if (over_budget) {
        emit_all("Skipped");
        continue;
      }

      for (int rep = 0; rep < exp.reps; ++rep) {
        RunRecord row = base;
        row.rep = rep;
        const auto t0 = std::chrono::steady_clock::now();
        try {
          const SolverReport rep_result = dispatch_method(method, x, k, cfg, exp.epsilon);
          const double ms = now_ms_since(t0);
          if (ms > exp.budget_ms) {
            row.status = "Skipped";
          } else {
            row.ms = ms;
            row.objective = rep_result.final_objective();
            row.iterations = rep_result.iterations;
            row.status =
                rep_result.termination == Termination::Converged ? "Converged" : "MaxIters";
          }
        } catch (const std::exception& e) {
          if (log) *log << exp.name << "/" << method << ": " << e.what() << '\n';
          row.status = "Error";
        }
        write_run_record(out, row);
      }
    }
  }
}

std::vector<RunRecord> read_run_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("read_run_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("read_run_csv: " + path + " is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) throw InvalidInput("read_run_csv: unexpected header in " + path);

  std::vector<RunRecord> rows;
  Index line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 12) {
      throw InvalidInput("read_run_csv: wrong column count at line " + std::to_string(line_no));
    }
    RunRecord row;
    row.method = cells[0];
    row.generator = cells[1];
    row.n = to_int(cells[2], line_no);
    row.d = to_int(cells[3], line_no);
    row.s = static_cast<int>(to_int(cells[4], line_no));
    row.tol = to_double(cells[5], line_no);
    row.seed = static_cast<std::uint64_t>(to_int(cells[6], line_no));
    row.rep = static_cast<int>(to_int(cells[7], line_no));
    if (!cells[8].empty()) row.ms = to_double(cells[8], line_no);
    if (!cells[9].empty()) row.objective = to_double(cells[9], line_no);
    if (!cells[10].empty()) row.iterations = static_cast<int>(to_int(cells[10], line_no));
    row.status = cells[11];
    rows.push_back(std::move(row));
  }
  return rows;
}

void summarize_runs(const std::string& in_csv, const std::string& out_csv) {
  const auto rows = read_run_csv(in_csv);
  std::ofstream out(out_csv);
  if (!out) throw InvalidInput("summarize_runs: cannot open " + out_csv);
  out << "method,generator,N,d,s,tol,runs,ms_mean,ms_std,objective_mean,iterations_mean\n";

  std::vector<std::string> order;
  std::map<std::string, std::vector<const RunRecord*>> groups;
  for (const auto& row : rows) {
    std::ostringstream key;
    key << row.method << ',' << row.generator << ',' << row.n << ',' << row.d << ',' << row.s
        << ',' << format_double(row.tol);
    if (groups.find(key.str()) == groups.end()) order.push_back(key.str());
    groups[key.str()].push_back(&row);
  }

  for (const auto& key : order) {
    const auto& members = groups[key];
    double ms_sum = 0.0, obj_sum = 0.0, it_sum = 0.0;
    int timed = 0, with_obj = 0;
    for (const auto* row : members) {
      if (row->ms) {
        ms_sum += *row->ms;
        ++timed;
      }
      if (row->objective) {
        obj_sum += *row->objective;
        it_sum += row->iterations.value_or(0);
        ++with_obj;
      }
    }
    const double ms_mean = timed > 0 ? ms_sum / timed : 0.0;
    double ms_var = 0.0;
    for (const auto* row : members) {
      if (row->ms) ms_var += (*row->ms - ms_mean) * (*row->ms - ms_mean);
    }
    const double ms_std = timed > 1 ? std::sqrt(ms_var / (timed - 1)) : 0.0;

    out << key << ',' << timed << ',';
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3f,%.3f", ms_mean, ms_std);
    out << buf << ',';
    if (with_obj > 0) out << format_double(obj_sum / with_obj);
    out << ',';
    if (with_obj > 0) {
      std::snprintf(buf, sizeof(buf), "%.2f", it_sum / with_obj);
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace pcadc
