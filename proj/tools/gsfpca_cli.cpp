#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "gsfpca/experiments.hpp"
#include "gsfpca/io.hpp"
#include "gsfpca/parallel.hpp"

namespace {

gsfpca::BasisSpec make_spec(const std::string& family, std::int64_t count, int dim, int order) {
  if (family == "fourier") return gsfpca::fourier_spec(count, dim);
  if (family == "wavelet") return gsfpca::wavelet_spec(count, dim, order);
  if (family == "pixel") return gsfpca::pixel_spec(count, dim);
  throw std::invalid_argument("unknown basis family: " + family);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized-sampling reconstruction with functional PCA"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (default: all cores)");

  // ---- run ----
  auto* run = app.add_subcommand("run", "run an experiment scenario");
  std::string config_path;
  std::vector<std::string> overrides;
  run->add_option("--config", config_path, "key=value config file");
  run->add_option("--set", overrides, "override config entries, key=value");

  // ---- train ----
  auto* train = app.add_subcommand("train", "fit an eigenmodel from a training-set matrix");
  std::string train_in, train_out;
  std::int64_t train_m = 10, train_k = 0;
  double train_sigma_tilde = 0.0;
  train->add_option("input", train_in, "training matrix file (n x p)")->required();
  train->add_option("output", train_out, "output eigenmodel base path")->required();
  train->add_option("-m", train_m, "number of components")->required();
  train->add_option("-k", train_k, "sparse PCA row budget (0 = classical PCA)");
  train->add_option("--sigma-tilde", train_sigma_tilde, "training noise level to record");

  // ---- reconstruct ----
  auto* rec = app.add_subcommand("reconstruct", "single-shot reconstruction from files");
  gsfpca::ReconstructOnceArgs args;
  std::string rec_family = "wavelet", samp_family = "fourier";
  std::int64_t rec_count = 128, samp_count = 12;
  int dim = 1, order = 4;
  double tau = 0.0;
  rec->add_option("measurements", args.measurements_path, "measurement matrix file (q x 1)")
      ->required();
  rec->add_option("model", args.model_base, "eigenmodel base path")->required();
  rec->add_option("-o,--output", args.output_dir, "output directory")->required();
  rec->add_option("--dim", dim, "domain dimension (1 or 2)");
  rec->add_option("--resolution", args.resolution, "grid resolution (total nodes)")->required();
  rec->add_option("--rec-family", rec_family, "reconstruction family");
  rec->add_option("--rec-count", rec_count, "reconstruction count p")->required();
  rec->add_option("--wavelet-order", order, "vanishing moments s");
  rec->add_option("--samp-family", samp_family, "sampling family");
  rec->add_option("--samp-count", samp_count, "sampling count q")->required();
  rec->add_option("--solver", args.solver, "ls | ridge");
  rec->add_option("--lambda", args.lambda, "ridge strength");
  rec->add_option("--tau", tau, "truncation level (0 = off)");
  rec->add_option("--truth", args.truth_path, "ground-truth field file for error report");

  // ---- diag ----
  auto* diag = app.add_subcommand("diag", "phantom diagnostics (explained variance, sigma_min)");
  std::string diag_config;
  std::vector<std::string> diag_overrides;
  diag->add_option("--config", diag_config, "key=value config file");
  diag->add_option("--set", diag_overrides, "override config entries, key=value");

  CLI11_PARSE(app, argc, argv);
  if (threads > 0) gsfpca::set_threads(threads);

  try {
    if (*run || *diag) {
      const bool is_diag = static_cast<bool>(*diag);
      const std::string& path = is_diag ? diag_config : config_path;
      gsfpca::ExperimentConfig cfg =
          path.empty() ? gsfpca::ExperimentConfig{} : gsfpca::parse_config_file(path);
      if (is_diag) cfg.scenario = gsfpca::Scenario::kPhantomDiag;
      for (const auto& kv : (is_diag ? diag_overrides : overrides)) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
          throw std::invalid_argument("--set expects key=value, got: " + kv);
        gsfpca::apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
      }
      if (threads > 0) cfg.threads = threads;
      return gsfpca::run_experiment(cfg);
    }
    if (*train) {
      gsfpca::TrainingSet t;
      t.Y = gsfpca::read_matrix(train_in);
      t.noise_sigma_tilde = train_sigma_tilde;
      t.basis_spec.count = t.Y.cols();  // family immaterial for the fit itself
      const gsfpca::EigenModel model =
          (train_k > 0) ? gsfpca::fit_eigenmodel_sparse(t, train_m, train_k)
                        : gsfpca::fit_eigenmodel(t, train_m);
      gsfpca::save_eigenmodel(train_out, model);
      std::cout << "saved eigenmodel " << train_out << " (n=" << model.n
                << ", p=" << model.p() << ", m=" << model.m() << ")\n";
      return 0;
    }
    if (*rec) {
      args.rec_spec = make_spec(rec_family, rec_count, dim, order);
      args.samp_spec = make_spec(samp_family, samp_count, dim, order);
      if (tau > 0) args.tau = tau;
      return gsfpca::reconstruct_once(args);
    }
  } catch (const gsfpca::IllPosedError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
