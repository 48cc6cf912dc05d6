#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gsfpca/experiments.hpp"
#include "gsfpca/gsfpca.hpp"
#include "gsfpca/io.hpp"
#include "gsfpca/simulate.hpp"

using namespace gsfpca;

namespace {
namespace fs = std::filesystem;

std::string scratch(const std::string& leaf) {
  const auto d = fs::temp_directory_path() / "gsfpca_exp_test" / leaf;
  fs::remove_all(d);
  fs::create_directories(d);
  return d.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace

TEST_CASE("fig3 run writes per-method and summary CSVs, byte-identical on rerun") {
  ExperimentConfig cfg;
  cfg.scenario = Scenario::kFig3;
  cfg.p = 64;
  cfg.q = 12;
  cfg.n = 32;
  cfg.repetitions = 2;
  cfg.methods = {Method::kGs, Method::kGsfpcaLs};
  cfg.output_dir = scratch("a");
  REQUIRE(run_experiment(cfg) == 0);
  CHECK(fs::exists(cfg.output_dir + "/errors_gs.csv"));
  CHECK(fs::exists(cfg.output_dir + "/errors_gsfpca_ls.csv"));
  CHECK(fs::exists(cfg.output_dir + "/summary.csv"));

  ExperimentConfig cfg2 = cfg;
  cfg2.output_dir = scratch("b");
  REQUIRE(run_experiment(cfg2) == 0);
  CHECK(slurp(cfg.output_dir + "/summary.csv") == slurp(cfg2.output_dir + "/summary.csv"));
  CHECK(slurp(cfg.output_dir + "/errors_gs.csv") == slurp(cfg2.output_dir + "/errors_gs.csv"));
}

TEST_CASE("reconstruct_once matches the in-process pipeline") {
  const std::string dir = scratch("once");
  const Grid g = make_grid(1, 1024);
  const GenerativeModel1D model = make_model_1d(g);
  const BasisSpec rec = wavelet_spec(64, 1, 4);
  const BasisSpec samp = fourier_spec(12, 1);

  NoiseSpec noise;
  noise.sigma = 0.01;
  noise.sigma_tilde = 0.01;
  noise.seed = 77;
  const TrainingSet training = make_training_set(
      [&](std::mt19937_64& rng) { return draw_1d(model, rng); }, 64, rec, g, noise);
  const EigenModel em = fit_eigenmodel(training, 10);
  save_eigenmodel(dir + "/model", em);

  auto rng_f = substream(123456, 0);
  const FieldSample truth = draw_1d(model, rng_f);
  auto rng_w = substream(123456, 1);
  const MeasurementSet meas = measure(truth, samp, noise, rng_w);
  write_matrix(dir + "/meas.bin", meas.values);
  write_field(dir + "/truth.bin", truth);

  ReconstructOnceArgs args;
  args.measurements_path = dir + "/meas.bin";
  args.model_base = dir + "/model";
  args.output_dir = dir + "/out";
  args.rec_spec = rec;
  args.samp_spec = samp;
  args.resolution = g.resolution;
  args.truth_path = dir + "/truth.bin";
  REQUIRE(reconstruct_once(args) == 0);

  // library-path comparison
  const CrossGram A = cross_gram_fast(rec, samp, g);
  SolverConfig sc;
  const auto res = reconstruct(A, em, meas, sc, rec, g);
  const FieldSample written = read_field(dir + "/out/field.bin");
  CHECK((written.values - res.field.values).cwiseAbs().maxCoeff() < 1e-12);

  // diagnostics carry the error vs the provided truth
  const std::string diag = slurp(dir + "/out/diagnostics.txt");
  CHECK(diag.find("relative_error") != std::string::npos);
  const double lib_err = relative_error(res.field, truth);
  std::ostringstream expect;
  expect << format_double(lib_err);
  CHECK(diag.find(expect.str().substr(0, 10)) != std::string::npos);
}

TEST_CASE("reconstruct_once reports usage errors with exit code 2") {
  ReconstructOnceArgs args;
  args.measurements_path = "/nonexistent/meas.bin";
  args.model_base = "/nonexistent/model";
  args.output_dir = scratch("err");
  args.rec_spec = wavelet_spec(64, 1, 4);
  args.samp_spec = fourier_spec(12, 1);
  args.resolution = 1024;
  CHECK(reconstruct_once(args) == 2);

  // existing measurements but missing model
  const std::string dir = scratch("err2");
  write_matrix(dir + "/meas.bin", CVec::Ones(12));
  args.measurements_path = dir + "/meas.bin";
  CHECK(reconstruct_once(args) == 2);
}

TEST_CASE("every named method runs in a small fig3 configuration") {
  ExperimentConfig cfg;
  cfg.scenario = Scenario::kFig3;
  cfg.p = 64;
  cfg.q = 16;
  cfg.n = 32;
  cfg.k = 16;
  cfg.repetitions = 2;
  cfg.lambda_gs = 0.04;
  cfg.lambda_ridge = 0.08;
  cfg.output_dir = scratch("all");
  REQUIRE(run_experiment(cfg) == 0);
  std::ifstream in(cfg.output_dir + "/summary.csv");
  std::string line;
  std::getline(in, line);  // header
  int rows = 0;
  bool any_empty_median = false;
  while (std::getline(in, line)) {
    ++rows;
    // median column is the third field; it must be present for every method
    std::istringstream ls(line);
    std::string cell;
    for (int c = 0; c < 3; ++c) std::getline(ls, cell, ',');
    if (cell.empty() || cell == "nan") any_empty_median = true;
  }
  CHECK(rows == 6);
  CHECK(!any_empty_median);
}

TEST_CASE("validate rejects malformed configurations") {
  ExperimentConfig cfg;
  cfg.m = cfg.p + 1;
  CHECK_THROWS(validate(cfg));
  cfg = ExperimentConfig{};
  cfg.repetitions = 0;
  CHECK_THROWS(validate(cfg));
  cfg = ExperimentConfig{};
  cfg.methods.clear();
  CHECK_THROWS(validate(cfg));
}
