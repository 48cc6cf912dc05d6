#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gsfpca/fpca.hpp"
#include "gsfpca/grid.hpp"
#include "gsfpca/gsfpca.hpp"
#include "gsfpca/simulate.hpp"

namespace gsfpca {

enum class Scenario { kFig3, kFig4Sweep, kFig5Noiseless, kPhantomDiag, kPhantomRecon, kCustom };

enum class Method { kGs, kGsL1, kGsL2, kGsfpcaLs, kGsfpcaRidge, kGsfpcaSparse };

std::string method_name(Method m);
Method parse_method(const std::string& name);
std::string scenario_name(Scenario s);

// Experiment parameters; names mirror the notation of the reconstruction
// problem (resolution p, measurements q, training size n, components m,
// wavelet order s, noise sigma / sigma_tilde).
struct ExperimentConfig {
  Scenario scenario = Scenario::kFig3;
  std::string sweep = "q";  // fig4_sweep: one of q|n|p|sigma

  std::int64_t p = 128;
  std::int64_t q = 12;
  std::int64_t n = 128;
  std::int64_t m = 10;
  int s = 4;
  double sigma = 0.0282842712474619;       // 0.02*sqrt(2)
  double sigma_tilde = 0.01;
  double lambda_gs = 0.04;                 // gs_l1 / gs_l2
  double lambda_ridge = 0.08;              // gsfpca_ridge (weights 1/eigval)
  double lambda_sparse = 0.0;              // gsfpca_sparse; 0 = plain LS
  std::optional<double> tau;               // truncation
  std::int64_t k = 96;                     // sparse PCA row budget
  std::int64_t repetitions = 10;
  std::uint64_t seed = 1;
  std::vector<Method> methods = {Method::kGs,        Method::kGsL1,
                                 Method::kGsL2,      Method::kGsfpcaLs,
                                 Method::kGsfpcaRidge, Method::kGsfpcaSparse};
  std::string output_dir = "out";
  int threads = 0;  // 0 = library default

  // 2D scenario knobs
  double perturb_scale = 0.035;
  std::int64_t resolution_2d = 65536;  // 256^2 nodes
  std::int64_t p_2d = 4096;
  std::int64_t q_2d = 1024;
  std::int64_t n_2d = 512;
  std::int64_t m_2d = 230;
  double sigma_2d = 0.000282842712474619;  // 0.0002*sqrt(2)
  double sigma_tilde_2d = 0.0001;
  double lambda_gs_2d = 0.0003;
  double lambda_sparse_2d = 1e-6;
  double lambda_diag = 0.0015;  // ridge lambda for the sigma_min diagnostic
  std::int64_t k_2d = 512;
};

// key=value text file; '#' starts a comment. Unknown keys are rejected.
ExperimentConfig parse_config_file(const std::string& path);
void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value);
void validate(const ExperimentConfig& cfg);

// Median and interquartile range helpers over repetition-level results.
double median(std::vector<double> values);
double quantile(std::vector<double> values, double q);

// Repetition-level relative errors for one 1D case; entries are NaN where a
// solve was ill-posed (recorded, not fatal).
struct CaseResult {
  std::map<Method, std::vector<double>> errors;
  double sigma_min_full = 0.0;  // sigma_min of the full GS system A_pq
};

// Shared 1D machinery (also used by the acceptance suite): run `repetitions`
// reconstructions of unseen draws at the given parameters. A repetition r
// draws training observations from substreams (seed, r*stride..) and the
// unseen function/noise from the tail of the same block, so results are
// independent of evaluation order and sweep points are paired across calls.
CaseResult run_case_1d(const GenerativeModel1D& model, std::int64_t p, std::int64_t q,
                       std::int64_t n, std::int64_t m, int s, double sigma, double sigma_tilde,
                       const ExperimentConfig& cfg);

int run_experiment(const ExperimentConfig& cfg);

// Single-shot pipeline used by the `reconstruct` subcommand.
struct ReconstructOnceArgs {
  std::string measurements_path;  // q x 1 matrix file
  std::string model_base;         // eigenmodel base path
  std::string output_dir;
  BasisSpec rec_spec;
  BasisSpec samp_spec;
  std::int64_t resolution = 0;
  std::string solver = "ls";  // ls | ridge
  double lambda = 0.0;
  std::optional<double> tau;
  std::string truth_path;  // optional field file for the error report
};

int reconstruct_once(const ReconstructOnceArgs& args);

}  // namespace gsfpca
