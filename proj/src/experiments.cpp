#include "gsfpca/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "gsfpca/io.hpp"
#include "gsfpca/parallel.hpp"

namespace gsfpca {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::uint64_t kRepStride = 1u << 20;  // substream block per repetition

std::int64_t pow2_at_least(std::int64_t n) {
  std::int64_t p = 1;
  while (p < n) p <<= 1;
  return p;
}
}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::kGs: return "gs";
    case Method::kGsL1: return "gs_l1";
    case Method::kGsL2: return "gs_l2";
    case Method::kGsfpcaLs: return "gsfpca_ls";
    case Method::kGsfpcaRidge: return "gsfpca_ridge";
    default: return "gsfpca_sparse";
  }
}

Method parse_method(const std::string& name) {
  for (Method m : {Method::kGs, Method::kGsL1, Method::kGsL2, Method::kGsfpcaLs,
                   Method::kGsfpcaRidge, Method::kGsfpcaSparse})
    if (method_name(m) == name) return m;
  throw std::invalid_argument("unknown method: " + name);
}

std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::kFig3: return "fig3";
    case Scenario::kFig4Sweep: return "fig4_sweep";
    case Scenario::kFig5Noiseless: return "fig5_noiseless";
    case Scenario::kPhantomDiag: return "phantom_diag";
    case Scenario::kPhantomRecon: return "phantom_recon";
    default: return "custom";
  }
}

namespace {
Scenario parse_scenario(const std::string& name) {
  for (Scenario s : {Scenario::kFig3, Scenario::kFig4Sweep, Scenario::kFig5Noiseless,
                     Scenario::kPhantomDiag, Scenario::kPhantomRecon, Scenario::kCustom})
    if (scenario_name(s) == name) return s;
  throw std::invalid_argument("unknown scenario: " + name);
}
}  // namespace

void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  auto to_i = [&] { return static_cast<std::int64_t>(std::stoll(value)); };
  auto to_d = [&] { return std::stod(value); };
  if (key == "scenario") cfg.scenario = parse_scenario(value);
  else if (key == "sweep") cfg.sweep = value;
  else if (key == "p") cfg.p = to_i();
  else if (key == "q") cfg.q = to_i();
  else if (key == "n") cfg.n = to_i();
  else if (key == "m") cfg.m = to_i();
  else if (key == "s") cfg.s = static_cast<int>(to_i());
  else if (key == "sigma") cfg.sigma = to_d();
  else if (key == "sigma_tilde") cfg.sigma_tilde = to_d();
  else if (key == "lambda_gs") cfg.lambda_gs = to_d();
  else if (key == "lambda_ridge") cfg.lambda_ridge = to_d();
  else if (key == "lambda_sparse") cfg.lambda_sparse = to_d();
  else if (key == "tau") cfg.tau = to_d();
  else if (key == "k") cfg.k = to_i();
  else if (key == "repetitions") cfg.repetitions = to_i();
  else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(std::stoull(value));
  else if (key == "output_dir") cfg.output_dir = value;
  else if (key == "threads") cfg.threads = static_cast<int>(to_i());
  else if (key == "perturb_scale") cfg.perturb_scale = to_d();
  else if (key == "resolution_2d") cfg.resolution_2d = to_i();
  else if (key == "p_2d") cfg.p_2d = to_i();
  else if (key == "q_2d") cfg.q_2d = to_i();
  else if (key == "n_2d") cfg.n_2d = to_i();
  else if (key == "m_2d") cfg.m_2d = to_i();
  else if (key == "sigma_2d") cfg.sigma_2d = to_d();
  else if (key == "sigma_tilde_2d") cfg.sigma_tilde_2d = to_d();
  else if (key == "lambda_gs_2d") cfg.lambda_gs_2d = to_d();
  else if (key == "lambda_sparse_2d") cfg.lambda_sparse_2d = to_d();
  else if (key == "lambda_diag") cfg.lambda_diag = to_d();
  else if (key == "k_2d") cfg.k_2d = to_i();
  else if (key == "methods") {
    cfg.methods.clear();
    std::istringstream ms(value);
    std::string item;
    while (std::getline(ms, item, '+'))
      if (!item.empty()) cfg.methods.push_back(parse_method(item));
  } else {
    throw std::invalid_argument("unknown config key: " + key);
  }
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                    ": expected key=value");
      continue;
    }
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return (a == std::string::npos) ? std::string() : s.substr(a, b - a + 1);
    };
    apply_override(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.m > cfg.p) throw std::invalid_argument("config: m must be <= p");
  if (cfg.q < 1) throw std::invalid_argument("config: q must be >= 1");
  if (cfg.repetitions < 1) throw std::invalid_argument("config: repetitions must be >= 1");
  if (cfg.methods.empty()) throw std::invalid_argument("config: empty methods list");
  if (cfg.s < 1 || cfg.s > 10) throw std::invalid_argument("config: s must be in 1..10");
  if (cfg.n < 2) throw std::invalid_argument("config: n must be >= 2");
}

double quantile(std::vector<double> values, double q) {
  values.erase(std::remove_if(values.begin(), values.end(),
                              [](double v) { return std::isnan(v); }),
               values.end());
  if (values.empty()) return kNaN;
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  const double w = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - w) + values[hi] * w;
}

double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

namespace {

// sigma_min via the Gram matrix; accurate whenever sigma_min^2 stays clear of
// the float64 epsilon, which holds for every diagnostic sweep here.
double sigma_min_gram(const CMat& a) {
  Eigen::SelfAdjointEigenSolver<CMat> es(a.adjoint() * a, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().minCoeff()));
}

struct MethodRun {
  double error = kNaN;
  bool ill_posed = false;
};

MethodRun run_method_1d(Method method, const CrossGram& A, const MeasurementSet& meas,
                        const EigenModel* classical, const EigenModel* sparse,
                        const FieldSample& truth, const BasisSpec& rec, const Grid& grid,
                        const ExperimentConfig& cfg) {
  MethodRun out;
  try {
    CVec coeffs;
    switch (method) {
      case Method::kGs:
        coeffs = (A.rows >= A.cols) ? solve_ls(A.entries, meas.values)
                                    : solve_ls_minnorm(A.entries, meas.values);
        break;
      case Method::kGsL1:
        coeffs = solve_l1(A.entries, meas.values, cfg.lambda_gs);
        break;
      case Method::kGsL2:
        coeffs = solve_ridge(A.entries, meas.values, cfg.lambda_gs);
        break;
      case Method::kGsfpcaLs:
      case Method::kGsfpcaRidge:
      case Method::kGsfpcaSparse: {
        const EigenModel* model = (method == Method::kGsfpcaSparse) ? sparse : classical;
        SolverConfig sc;
        if (method == Method::kGsfpcaLs) {
          sc.method = SolverMethod::kLeastSquares;
        } else if (method == Method::kGsfpcaRidge) {
          sc.method = SolverMethod::kRidge;
          sc.lambda = cfg.lambda_ridge;
        } else if (cfg.lambda_sparse > 0) {
          sc.method = SolverMethod::kRidge;
          sc.lambda = cfg.lambda_sparse;
        } else {
          sc.method = SolverMethod::kLeastSquares;
        }
        sc.truncation_tau = cfg.tau;
        const auto result = reconstruct(A, *model, meas, sc, rec, grid);
        out.error = relative_error(result.field, truth);
        return out;
      }
    }
    FieldSample fhat = synthesize_fast(coeffs, rec, grid);
    if (cfg.tau) fhat = truncate(fhat, *cfg.tau);
    out.error = relative_error(fhat, truth);
  } catch (const IllPosedError&) {
    out.ill_posed = true;
  }
  return out;
}

bool wants(const ExperimentConfig& cfg, Method m) {
  return std::find(cfg.methods.begin(), cfg.methods.end(), m) != cfg.methods.end();
}

}  // namespace

CaseResult run_case_1d(const GenerativeModel1D& model, std::int64_t p, std::int64_t q,
                       std::int64_t n, std::int64_t m, int s, double sigma, double sigma_tilde,
                       const ExperimentConfig& cfg) {
  const Grid& grid = model.grid;
  const BasisSpec rec = wavelet_spec(p, 1, s);
  const BasisSpec samp = fourier_spec(q, 1);
  const CrossGram A = cross_gram_fast(rec, samp, grid);

  CaseResult result;
  result.sigma_min_full = sigma_min(A.entries);
  for (Method mth : cfg.methods) result.errors[mth].assign(cfg.repetitions, kNaN);

  const bool need_sparse = wants(cfg, Method::kGsfpcaSparse);
  const bool need_classical =
      wants(cfg, Method::kGsfpcaLs) || wants(cfg, Method::kGsfpcaRidge);

  std::atomic<bool> failed{false};
  std::string error_text;
  std::mutex error_mutex;
  parallel_for(cfg.repetitions, [&](std::int64_t r) {
    if (failed.load(std::memory_order_relaxed)) return;
    try {
      const std::uint64_t base = static_cast<std::uint64_t>(r) * kRepStride;
      auto rng_f = substream(cfg.seed, base);
      const FieldSample truth = draw_1d(model, rng_f);
      auto rng_w = substream(cfg.seed, base + 1);
      NoiseSpec noise;
      noise.sigma = sigma;
      noise.sigma_tilde = sigma_tilde;
      noise.seed = cfg.seed;
      const MeasurementSet meas = measure(truth, samp, noise, rng_w);

      const TrainingSet training = make_training_set(
          [&](std::mt19937_64& rng) { return draw_1d(model, rng); }, n, rec, grid, noise,
          base + 8);
      EigenModel classical, sparse;
      if (need_classical) classical = fit_eigenmodel(training, m);
      if (need_sparse) sparse = fit_eigenmodel_sparse(training, m, cfg.k);

      for (Method mth : cfg.methods) {
        const MethodRun run =
            run_method_1d(mth, A, meas, &classical, &sparse, truth, rec, grid, cfg);
        result.errors[mth][r] = run.ill_posed ? kNaN : run.error;
      }
    } catch (const std::exception& e) {
      std::lock_guard<std::mutex> lock(error_mutex);
      failed = true;
      if (error_text.empty()) error_text = e.what();
    }
  });
  if (failed) throw std::runtime_error("run_case_1d: " + error_text);
  return result;
}

namespace {

namespace fs = std::filesystem;

void write_rep_csv(const std::string& dir, const std::string& tag, Method m,
                   const std::vector<double>& errors) {
  CsvWriter csv(dir + "/errors_" + tag + method_name(m) + ".csv",
                {"repetition", "relative_error", "ill_posed"});
  for (std::size_t r = 0; r < errors.size(); ++r)
    csv.row({std::to_string(r), std::isnan(errors[r]) ? "" : format_double(errors[r]),
             std::isnan(errors[r]) ? "1" : "0"});
}

void summary_rows(CsvWriter& csv, const std::string& label, const ExperimentConfig& cfg,
                  const CaseResult& res) {
  for (Method m : cfg.methods) {
    const auto& errs = res.errors.at(m);
    const auto ill = std::count_if(errs.begin(), errs.end(),
                                   [](double v) { return std::isnan(v); });
    csv.row({label, method_name(m), format_double(median(errs)),
             format_double(quantile(errs, 0.25)), format_double(quantile(errs, 0.75)),
             std::to_string(ill), format_double(res.sigma_min_full)});
  }
}

Grid grid_for_1d(std::int64_t p_max, std::int64_t q_max) {
  // enforce 1/du >= 16 max(p, q), power of two for the wavelet transforms
  return make_grid(1, pow2_at_least(16 * std::max(p_max, q_max)));
}

int run_fig3(const ExperimentConfig& cfg) {
  const Grid grid = grid_for_1d(cfg.p, cfg.q);
  const GenerativeModel1D model = make_model_1d(grid);
  const CaseResult res =
      run_case_1d(model, cfg.p, cfg.q, cfg.n, cfg.m, cfg.s, cfg.sigma, cfg.sigma_tilde, cfg);
  for (Method m : cfg.methods) write_rep_csv(cfg.output_dir, "", m, res.errors.at(m));
  CsvWriter csv(cfg.output_dir + "/summary.csv",
                {"case", "method", "median", "q25", "q75", "ill_posed", "sigma_min_full"});
  summary_rows(csv, "fig3", cfg, res);
  return 0;
}

int run_fig4(const ExperimentConfig& cfg) {
  const Grid grid = grid_for_1d(cfg.p, 32);
  const GenerativeModel1D model = make_model_1d(grid);
  CsvWriter csv(cfg.output_dir + "/summary.csv",
                {"sweep", "value", "method", "median", "q25", "q75", "ill_posed",
                 "sigma_min_full"});
  auto run_point = [&](const std::string& label, std::int64_t p, std::int64_t q,
                       std::int64_t n, double sigma) {
    const CaseResult res =
        run_case_1d(model, p, q, n, cfg.m, cfg.s, sigma, cfg.sigma_tilde, cfg);
    for (Method m : cfg.methods) {
      const auto& errs = res.errors.at(m);
      const auto ill = std::count_if(errs.begin(), errs.end(),
                                     [](double v) { return std::isnan(v); });
      csv.row({cfg.sweep, label, method_name(m), format_double(median(errs)),
               format_double(quantile(errs, 0.25)), format_double(quantile(errs, 0.75)),
               std::to_string(ill), format_double(res.sigma_min_full)});
    }
  };
  if (cfg.sweep == "q") {
    for (std::int64_t q : {4, 8, 12, 16, 24, 32})
      run_point(std::to_string(q), cfg.p, q, cfg.n, cfg.sigma);
  } else if (cfg.sweep == "n") {
    for (std::int64_t n : {std::int64_t(16), cfg.p / 16, cfg.p / 4, cfg.p, 2 * cfg.p}) {
      if (n < cfg.m + 2) continue;  // below the fit's rank requirement
      run_point(std::to_string(n), cfg.p, cfg.q, n, cfg.sigma);
    }
  } else if (cfg.sweep == "p") {
    for (std::int64_t p : {64, 128, 256, 512}) {
      if (p > cfg.p) continue;
      run_point(std::to_string(p), p, cfg.q, 2 * p, cfg.sigma);
    }
  } else if (cfg.sweep == "sigma") {
    for (double f : {0.125, 0.25, 0.5, 1.0, 2.0})
      run_point(format_double(f * cfg.sigma), cfg.p, cfg.q, cfg.n, f * cfg.sigma);
  } else {
    throw std::invalid_argument("fig4_sweep: sweep must be one of q|n|p|sigma");
  }
  return 0;
}

int run_fig5(const ExperimentConfig& cfg) {
  const Grid grid = grid_for_1d(512, cfg.q);
  const GenerativeModel1D model = make_model_1d(grid);
  CsvWriter csv(cfg.output_dir + "/summary.csv",
                {"s", "p", "method", "median", "q25", "q75", "ill_posed", "sigma_min_full"});
  ExperimentConfig noiseless = cfg;
  noiseless.methods = {Method::kGs, Method::kGsfpcaLs};
  for (int s : {1, 2, 4}) {
    for (std::int64_t p : {64, 128, 256, 512}) {
      const CaseResult res = run_case_1d(model, p, cfg.q, 2 * p, cfg.m, s, 0.0, 0.0, noiseless);
      for (Method m : noiseless.methods) {
        const auto& errs = res.errors.at(m);
        const auto ill = std::count_if(errs.begin(), errs.end(),
                                       [](double v) { return std::isnan(v); });
        csv.row({std::to_string(s), std::to_string(p), method_name(m),
                 format_double(median(errs)), format_double(quantile(errs, 0.25)),
                 format_double(quantile(errs, 0.75)), std::to_string(ill),
                 format_double(res.sigma_min_full)});
      }
    }
  }
  return 0;
}

}  // namespace

// ---------------------------------------------------------------------------
// 2D phantom machinery
// ---------------------------------------------------------------------------

namespace {

struct PhantomSetup {
  Grid grid;
  BasisSpec rec;
  TrainingSet training;
  EigenModel classical;  // m components
  EigenModel sparse;     // m components, row-sparse
  FieldSample truth;     // unseen phantom
  CVec truth_coeffs;     // its projection coefficients in the rec family
};

PhantomSetup build_phantom_setup(const ExperimentConfig& cfg, std::int64_t m_components,
                                 bool want_sparse) {
  PhantomSetup setup;
  setup.grid = make_grid(2, cfg.resolution_2d);
  setup.rec = wavelet_spec(cfg.p_2d, 2, cfg.s);
  NoiseSpec noise;
  noise.sigma = cfg.sigma_2d;
  noise.sigma_tilde = cfg.sigma_tilde_2d;
  noise.seed = cfg.seed;
  const EllipseMatrix& base = default_ellipses();
  setup.training = make_training_set(
      [&](std::mt19937_64& rng) {
        return phantom_serial(perturb_ellipses(base, rng, cfg.perturb_scale),
                              cfg.resolution_2d);
      },
      cfg.n_2d, setup.rec, setup.grid, noise, /*seed_offset=*/0);
  setup.classical = fit_eigenmodel(setup.training, m_components);
  if (want_sparse)
    setup.sparse = fit_eigenmodel_sparse(setup.training, m_components, cfg.k_2d);
  auto rng_truth = substream(cfg.seed, static_cast<std::uint64_t>(cfg.n_2d) + 1000003);
  setup.truth = phantom(perturb_ellipses(base, rng_truth, cfg.perturb_scale),
                        cfg.resolution_2d);
  setup.truth_coeffs = analyze_fast(setup.truth, setup.rec);
  return setup;
}

int run_phantom_diag(const ExperimentConfig& cfg) {
  // sweep up to 500 components, bounded by the sample-covariance rank
  const std::int64_t m_max = std::min<std::int64_t>({500, cfg.n_2d - 1, cfg.p_2d});
  PhantomSetup setup = build_phantom_setup(cfg, m_max, /*want_sparse=*/true);
  const BasisSpec samp = fourier_spec(cfg.q_2d, 2);
  const CrossGram A = cross_gram_fast(setup.rec, samp, setup.grid);
  const CMat ahat_c = A.entries * setup.classical.eigvecs;
  const CMat ahat_s = A.entries * setup.sparse.eigvecs;

  CsvWriter csv(cfg.output_dir + "/diag.csv",
                {"m", "explained_classical", "explained_sparse", "smin_classical",
                 "smin_ridge_classical", "smin_sparse", "smin_ridge_sparse"});
  const double sparse_total = setup.sparse.total_variance;
  for (std::int64_t m = 10; m <= m_max; m += 10) {
    const double evc = explained_variance(setup.classical, m);
    const double evs = setup.sparse.eigvals.head(m).sum() / sparse_total;
    const CMat pc = ahat_c.leftCols(m);
    const CMat ps = ahat_s.leftCols(m);
    const double sc = sigma_min_gram(pc);
    const double ss = sigma_min_gram(ps);
    const double floor_c = 1e-12 * std::max(setup.classical.eigvals[0], 1e-300);
    const double floor_s = 1e-12 * std::max(setup.sparse.eigvals[0], 1e-300);
    const double rc = regularized_sigma_min(pc, cfg.lambda_diag,
                                            setup.classical.eigvals.head(m).cwiseMax(floor_c));
    const double rs = regularized_sigma_min(ps, cfg.lambda_diag,
                                            setup.sparse.eigvals.head(m).cwiseMax(floor_s));
    csv.row_values({static_cast<double>(m), evc, evs, sc, rc, ss, rs});
  }
  return 0;
}

struct ReconCase {
  std::string label;
  BasisSpec samp;
  std::int64_t m = 0;
};

int run_phantom_recon(const ExperimentConfig& cfg) {
  const std::int64_t m_small = std::min<std::int64_t>(200, cfg.m_2d);
  PhantomSetup setup = build_phantom_setup(cfg, cfg.m_2d, /*want_sparse=*/true);
  const Grid& grid = setup.grid;

  write_pgm16(cfg.output_dir + "/truth.pgm", setup.truth);
  write_pfm(cfg.output_dir + "/truth.pfm", setup.truth);
  const FieldSample projection = synthesize_fast(setup.truth_coeffs, setup.rec, grid);
  write_pgm16(cfg.output_dir + "/projection.pgm", projection);

  CsvWriter csv(cfg.output_dir + "/recon_errors.csv",
                {"case", "method", "err_vs_projection", "err_vs_truth", "sigma_min_reduced"});

  const double truth_coeff_norm = setup.truth_coeffs.norm();
  auto record = [&](const std::string& label, const std::string& mname, const CVec& coeffs,
                    double smin) {
    const FieldSample fhat = synthesize_fast(coeffs, setup.rec, grid);
    const double ep = (coeffs - setup.truth_coeffs).norm() / truth_coeff_norm;
    const double et = relative_error(fhat, setup.truth);
    csv.row({label, mname, format_double(ep), format_double(et), format_double(smin)});
    write_pgm16(cfg.output_dir + "/recon_" + label + "_" + mname + ".pgm", fhat);
    write_pfm(cfg.output_dir + "/recon_" + label + "_" + mname + ".pfm", fhat);
  };

  std::vector<ReconCase> cases;
  cases.push_back({"fourier_q" + std::to_string(cfg.q_2d), fourier_spec(cfg.q_2d, 2), cfg.m_2d});
  cases.push_back({"fourier_q256", fourier_spec(256, 2), m_small});
  cases.push_back({"pixel_q256", pixel_spec(256, 2), m_small});

  auto rng_meas = substream(cfg.seed, static_cast<std::uint64_t>(cfg.n_2d) + 2000003);
  NoiseSpec mnoise;
  mnoise.sigma = cfg.sigma_2d;
  mnoise.seed = cfg.seed;

  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    const ReconCase& rcase = cases[ci];
    const bool primary = (ci == 0);
    const CrossGram A = cross_gram_fast(setup.rec, rcase.samp, grid);
    const MeasurementSet meas = measure(setup.truth, rcase.samp, mnoise, rng_meas);

    EigenModel classical = setup.classical;
    EigenModel sparse = setup.sparse;
    if (rcase.m < cfg.m_2d) {
      classical.eigvecs = setup.classical.eigvecs.leftCols(rcase.m);
      classical.eigvals = setup.classical.eigvals.head(rcase.m);
      sparse.eigvecs = setup.sparse.eigvecs.leftCols(rcase.m);
      sparse.eigvals = setup.sparse.eigvals.head(rcase.m);
    }

    for (Method mth : cfg.methods) {
      // the small-q variants run only the criterion pair
      if (!primary && mth != Method::kGsL2 && mth != Method::kGsfpcaSparse) continue;
      try {
        switch (mth) {
          case Method::kGs:
            record(rcase.label, method_name(mth),
                   solve_ls_minnorm(A.entries, meas.values), sigma_min_gram(A.entries));
            break;
          case Method::kGsL1:
            record(rcase.label, method_name(mth),
                   solve_l1(A.entries, meas.values, cfg.lambda_gs_2d, 600, 1e-9), kNaN);
            break;
          case Method::kGsL2:
            record(rcase.label, method_name(mth),
                   solve_ridge(A.entries, meas.values, cfg.lambda_gs_2d), kNaN);
            break;
          case Method::kGsfpcaLs:
          case Method::kGsfpcaRidge:
          case Method::kGsfpcaSparse: {
            const EigenModel& model = (mth == Method::kGsfpcaSparse) ? sparse : classical;
            SolverConfig sc;
            if (mth == Method::kGsfpcaLs) {
              sc.method = SolverMethod::kLeastSquares;
            } else {
              sc.method = SolverMethod::kRidge;
              sc.lambda = cfg.lambda_sparse_2d;
            }
            const auto result = reconstruct(A, model, meas, sc, setup.rec, grid);
            record(rcase.label, method_name(mth), result.coeffs_p,
                   result.diagnostics.sigma_min_reduced);
            break;
          }
        }
      } catch (const IllPosedError& e) {
        csv.row({rcase.label, method_name(mth), "", "", format_double(e.sigma_min())});
      }
    }
  }
  return 0;
}

}  // namespace

int run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  if (cfg.threads > 0) set_threads(cfg.threads);
  std::filesystem::create_directories(cfg.output_dir);
  switch (cfg.scenario) {
    case Scenario::kFig3: return run_fig3(cfg);
    case Scenario::kFig4Sweep: return run_fig4(cfg);
    case Scenario::kFig5Noiseless: return run_fig5(cfg);
    case Scenario::kPhantomDiag: return run_phantom_diag(cfg);
    case Scenario::kPhantomRecon: return run_phantom_recon(cfg);
    case Scenario::kCustom: return run_fig3(cfg);  // custom = single case with cfg values
  }
  return 2;
}

int reconstruct_once(const ReconstructOnceArgs& args) {
  if (!std::filesystem::exists(args.measurements_path)) {
    std::cerr << "measurements file not found: " << args.measurements_path << "\n";
    return 2;
  }
  if (!std::filesystem::exists(args.model_base + ".bin")) {
    std::cerr << "eigenmodel not found: " << args.model_base << ".bin\n";
    return 2;
  }
  try {
    const CMat mvals = read_matrix(args.measurements_path);
    const EigenModel model = load_eigenmodel(args.model_base);
    const Grid grid = make_grid(args.rec_spec.dim, args.resolution);
    MeasurementSet meas;
    meas.sampling_spec = args.samp_spec;
    meas.values = mvals.col(0);
    if (meas.values.size() != args.samp_spec.count) {
      std::cerr << "measurement length " << meas.values.size()
                << " does not match sampling count " << args.samp_spec.count << "\n";
      return 2;
    }
    if (model.p() != args.rec_spec.count) {
      std::cerr << "model p=" << model.p() << " does not match reconstruction count "
                << args.rec_spec.count << "\n";
      return 2;
    }
    const CrossGram A = cross_gram_fast(args.rec_spec, args.samp_spec, grid);
    SolverConfig sc;
    if (args.solver == "ridge") {
      sc.method = SolverMethod::kRidge;
      sc.lambda = args.lambda;
    } else if (args.solver == "ls") {
      sc.method = SolverMethod::kLeastSquares;
    } else {
      std::cerr << "unknown solver: " << args.solver << "\n";
      return 2;
    }
    sc.truncation_tau = args.tau;
    const auto result = reconstruct(A, model, meas, sc, args.rec_spec, grid);

    std::filesystem::create_directories(args.output_dir);
    {
      CsvWriter csv(args.output_dir + "/coefficients.csv", {"index", "re", "im"});
      for (Eigen::Index i = 0; i < result.coeffs_p.size(); ++i)
        csv.row({std::to_string(i), format_double(result.coeffs_p[i].real()),
                 format_double(result.coeffs_p[i].imag())});
    }
    write_field(args.output_dir + "/field.bin", result.field);
    if (grid.dim == 2) {
      write_pgm16(args.output_dir + "/field.pgm", result.field);
      write_pfm(args.output_dir + "/field.pfm", result.field);
    }
    std::optional<double> rel;
    if (!args.truth_path.empty()) {
      const FieldSample truth = read_field(args.truth_path);
      rel = relative_error(result.field, truth);
    }
    std::ofstream diag(args.output_dir + "/diagnostics.txt");
    diag << "{\n  \"sigma_min\": " << format_double(result.diagnostics.sigma_min_reduced)
         << ",\n  \"cos_angle_estimate\": "
         << format_double(result.diagnostics.cos_angle_estimate)
         << ",\n  \"residual_norm\": " << format_double(result.diagnostics.residual_norm);
    if (rel) diag << ",\n  \"relative_error\": " << format_double(*rel);
    diag << "\n}\n";
    if (rel) std::cout << "relative_error " << format_double(*rel) << "\n";
    std::cout << "sigma_min " << format_double(result.diagnostics.sigma_min_reduced) << "\n";
    return 0;
  } catch (const IllPosedError& e) {
    std::cerr << "ill-posed system: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace gsfpca
