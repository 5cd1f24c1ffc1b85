#include "pcadc/bench.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "oracles.hpp"
#include "pcadc/io.hpp"

using namespace pcadc;

namespace {

std::string temp_path(const std::string& name) { return ::testing::TempDir() + name; }

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST(GenGaussian, DeterministicPerSeed) {
  const DataMatrix a = gen_gaussian(20, 10, 42);
  const DataMatrix b = gen_gaussian(20, 10, 42);
  const DataMatrix c = gen_gaussian(20, 10, 43);
  EXPECT_EQ((a.values - b.values).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_GT((a.values - c.values).norm(), 0.0);
}

TEST(GenGaussian, SampleMeanIsUnbiased) {
  const DataMatrix a = gen_gaussian(1000, 1000, 7);
  // four standard errors of the mean of 10^6 standard normals
  EXPECT_LE(std::abs(a.values.mean()), 4.0 / 1000.0);
}

TEST(GenFixedSpectrum, OneByOneIsSignedScalar) {
  Vector spectrum(1);
  spectrum << 1.0;
  const DataMatrix a = gen_fixed_spectrum(1, 1, spectrum, 3);
  EXPECT_NEAR(std::abs(a.values(0, 0)), 1.0, 1e-14);
}

TEST(GenFixedSpectrum, SvdRecoversTheSpectrum) {
  Vector spectrum(5);
  for (Index i = 0; i < 5; ++i) spectrum(i) = 100.0 * std::pow(0.9, static_cast<double>(i + 1));
  EXPECT_NEAR(spectrum(0), 90.0, 1e-12);  // sigma_1 = 100 * 0.9
  const DataMatrix a = gen_fixed_spectrum(8, 5, spectrum, 4);
  const oracle::SvdResult ref = oracle::jacobi_svd(a.values);
  for (Index i = 0; i < 5; ++i) {
    EXPECT_NEAR(ref.sigma(i), spectrum(i), 1e-8 * spectrum(i));
  }
}

TEST(GenFixedSpectrum, RejectsBadSpectra) {
  Vector increasing(2);
  increasing << 1.0, 2.0;
  EXPECT_THROW(gen_fixed_spectrum(4, 4, increasing, 0), InvalidInput);
  Vector negative(1);
  negative << -1.0;
  EXPECT_THROW(gen_fixed_spectrum(4, 4, negative, 0), InvalidInput);
}

TEST(Contaminate, FractionZeroIsIdentity) {
  const DataMatrix x = gen_gaussian(10, 4, 5);
  const auto [y, mask] = contaminate(x, 0.0, 15.0, 6);
  EXPECT_EQ((x.values - y.values).cwiseAbs().maxCoeff(), 0.0);
  for (const bool flagged : mask) EXPECT_FALSE(flagged);
}

TEST(Contaminate, FullFractionFlagsEveryRow) {
  const DataMatrix x = gen_gaussian(10, 4, 7);
  const auto [y, mask] = contaminate(x, 1.0, 15.0, 8);
  for (const bool flagged : mask) EXPECT_TRUE(flagged);
}

TEST(Contaminate, FlagCountMatchesFloor) {
  const DataMatrix x = gen_gaussian(200, 3, 9);
  const auto [y, mask] = contaminate(x, 0.15, 15.0, 10);
  int count = 0;
  for (const bool flagged : mask) count += flagged ? 1 : 0;
  EXPECT_EQ(count, 30);
  // untouched rows are bitwise identical
  for (Index i = 0; i < 200; ++i) {
    if (!mask[static_cast<std::size_t>(i)]) {
      EXPECT_EQ((x.values.row(i) - y.values.row(i)).cwiseAbs().maxCoeff(), 0.0);
    }
  }
}

TEST(ConfigParser, ParsesAFullSection) {
  const std::string path = temp_path("config_ok.txt");
  write_file(path,
             "# timing grid\n"
             "[small]\n"
             "methods = dca-variance-primal, pg-n\n"
             "generator = gaussian\n"
             "N = 40\n"
             "d = 20\n"
             "s = 3\n"
             "tol = 1e-3\n"
             "seed = 11\n"
             "reps = 2\n"
             "warmup = 1\n");
  const auto experiments = parse_bench_config(path);
  ASSERT_EQ(experiments.size(), 1u);
  EXPECT_EQ(experiments[0].name, "small");
  EXPECT_EQ(experiments[0].methods.size(), 2u);
  EXPECT_EQ(experiments[0].problem.n_samples, 40);
  EXPECT_EQ(experiments[0].reps, 2);
  std::remove(path.c_str());
}

TEST(ConfigParser, ReportsLineAndColumn) {
  const std::string path = temp_path("config_bad.txt");
  write_file(path, "[a]\nmethods = dense\ngenerator = gaussian\nN 40\n");
  try {
    parse_bench_config(path);
    FAIL() << "expected a parse error";
  } catch (const InvalidInput& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("line 4"), std::string::npos) << what;
    EXPECT_NE(what.find("column"), std::string::npos) << what;
  }
  std::remove(path.c_str());
}

TEST(ConfigParser, RejectsUnknownKeysAndMethods) {
  const std::string path = temp_path("config_unknown.txt");
  write_file(path,
             "[a]\nmethods = dense\ngenerator = gaussian\nN = 4\nd = 4\ns = 1\ntol = 1e-3\n"
             "seed = 1\nbogus = 1\n");
  EXPECT_THROW(parse_bench_config(path), InvalidInput);
  write_file(path,
             "[a]\nmethods = no-such-method\ngenerator = gaussian\nN = 4\nd = 4\ns = 1\n"
             "tol = 1e-3\nseed = 1\n");
  EXPECT_THROW(parse_bench_config(path), InvalidInput);
  std::remove(path.c_str());
}

TEST(RunSuite, OneMethodThreeRepsGivesThreeRows) {
  const std::string config = temp_path("suite_single.txt");
  const std::string out = temp_path("suite_single.csv");
  write_file(config,
             "[one]\nmethods = dense\ngenerator = gaussian\nN = 30\nd = 10\ns = 2\n"
             "tol = 1e-6\nseed = 3\nreps = 3\n");
  run_suite(parse_bench_config(config), out);
  const auto rows = read_run_csv(out);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& row : rows) {
    EXPECT_EQ(row.method, "dense");
    EXPECT_EQ(row.status, "Converged");
    EXPECT_TRUE(row.objective.has_value());
  }
  std::remove(config.c_str());
  std::remove(out.c_str());
}

TEST(RunSuite, ConvergedObjectivesMatchTheMappedOptimum) {
  const std::string config = temp_path("suite_opt.txt");
  const std::string out = temp_path("suite_opt.csv");
  write_file(config,
             "[grid]\n"
             "methods = dca-variance-primal, dca-variance-dual, kdual-n, pg-n\n"
             "generator = gaussian\nN = 200\nd = 100\ns = 5\ntol = 1e-3\nseed = 12\n"
             "reps = 1\nwarmup = 0\nmax_iters = 4000\n");
  run_suite(parse_bench_config(config), out);

  const Matrix x = gen_gaussian(200, 100, 12).values;
  for (const auto& row : read_run_csv(out)) {
    ASSERT_EQ(row.status, "Converged") << row.method;
    const double opt = method_reference(row.method, x, 5);
    EXPECT_NEAR(*row.objective, opt, 1e-3 * std::abs(opt)) << row.method;
  }
  std::remove(config.c_str());
  std::remove(out.c_str());
}

TEST(RunSuite, DeterministicUpToTimingColumn) {
  const std::string config = temp_path("suite_det.txt");
  const std::string out_a = temp_path("suite_det_a.csv");
  const std::string out_b = temp_path("suite_det_b.csv");
  write_file(config,
             "[det]\nmethods = dca-variance-primal, robust-irls\ngenerator = gaussian\n"
             "N = 25\nd = 10\ns = 2\ntol = 1e-8\nseed = 21\nreps = 2\n");
  const auto experiments = parse_bench_config(config);
  run_suite(experiments, out_a);
  run_suite(experiments, out_b);

  const auto rows_a = read_run_csv(out_a);
  const auto rows_b = read_run_csv(out_b);
  ASSERT_EQ(rows_a.size(), rows_b.size());
  for (std::size_t i = 0; i < rows_a.size(); ++i) {
    EXPECT_EQ(rows_a[i].method, rows_b[i].method);
    EXPECT_EQ(rows_a[i].seed, rows_b[i].seed);
    EXPECT_EQ(rows_a[i].rep, rows_b[i].rep);
    EXPECT_EQ(rows_a[i].status, rows_b[i].status);
    EXPECT_EQ(rows_a[i].objective.has_value(), rows_b[i].objective.has_value());
    if (rows_a[i].objective) EXPECT_EQ(*rows_a[i].objective, *rows_b[i].objective);
    EXPECT_EQ(rows_a[i].iterations.value_or(-1), rows_b[i].iterations.value_or(-1));
  }
  std::remove(config.c_str());
  std::remove(out_a.c_str());
  std::remove(out_b.c_str());
}

TEST(RunSuite, ZeroBudgetSkipsWithoutObjectives) {
  const std::string config = temp_path("suite_skip.txt");
  const std::string out = temp_path("suite_skip.csv");
  write_file(config,
             "[skip]\nmethods = dca-variance-primal\ngenerator = gaussian\nN = 30\nd = 10\n"
             "s = 2\ntol = 1e-8\nseed = 5\nreps = 2\nbudget_ms = 0\n");
  run_suite(parse_bench_config(config), out);
  const auto rows = read_run_csv(out);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& row : rows) {
    EXPECT_EQ(row.status, "Skipped");
    EXPECT_FALSE(row.objective.has_value());
    EXPECT_FALSE(row.ms.has_value());
    EXPECT_FALSE(row.iterations.has_value());
  }
  std::remove(config.c_str());
  std::remove(out.c_str());
}

TEST(Summarize, AggregatesGroups) {
  const std::string config = temp_path("suite_sum.txt");
  const std::string out = temp_path("suite_sum.csv");
  const std::string summary = temp_path("summary.csv");
  write_file(config,
             "[sum]\nmethods = dense, simiter\ngenerator = gaussian\nN = 30\nd = 12\ns = 2\n"
             "tol = 1e-8\nseed = 9\nreps = 3\n");
  run_suite(parse_bench_config(config), out);
  summarize_runs(out, summary);

  const std::string text = slurp(summary);
  EXPECT_NE(text.find("method,generator,N,d,s,tol,runs,ms_mean,ms_std"), std::string::npos);
  EXPECT_NE(text.find("dense,gaussian,30,12,2"), std::string::npos);
  EXPECT_NE(text.find("simiter,gaussian,30,12,2"), std::string::npos);
  std::remove(config.c_str());
  std::remove(out.c_str());
  std::remove(summary.c_str());
}

TEST(RunSuite, ContaminatedGeneratorRunsRobustMethods) {
  const std::string config = temp_path("suite_cont.txt");
  const std::string out = temp_path("suite_cont.csv");
  write_file(config,
             "[cont]\nmethods = dense, robust-irls\ngenerator = contaminated\n"
             "N = 60\nd = 8\ns = 2\ntol = 1e-8\nseed = 13\nreps = 1\n"
             "fraction = 0.15\nnoise_sigma = 15\n");
  run_suite(parse_bench_config(config), out);
  const auto rows = read_run_csv(out);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& row : rows) {
    EXPECT_EQ(row.generator, "contaminated");
    EXPECT_TRUE(row.objective.has_value());
  }
  std::remove(config.c_str());
  std::remove(out.c_str());
}

TEST(MatrixCsv, RoundTripsThroughTheReader) {
  const std::string path = temp_path("matrix.csv");
  const Matrix m = oracle::random_matrix(7, 3, 30);
  write_matrix_csv(path, m);
  const Matrix back = read_matrix_csv(path);
  EXPECT_EQ((m - back).cwiseAbs().maxCoeff(), 0.0);
  std::remove(path.c_str());
}

TEST(MatrixCsv, ParseErrorsCarryLocation) {
  const std::string path = temp_path("matrix_bad.csv");
  write_file(path, "1.0,2.0\n3.0,oops\n");
  try {
    read_matrix_csv(path);
    FAIL() << "expected a parse error";
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  std::remove(path.c_str());
}
