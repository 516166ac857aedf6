#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "mechprior/harness.hpp"
#include "mechprior/kernels.hpp"
#include "mechprior/plots.hpp"

namespace fs = std::filesystem;
using namespace mechprior;

namespace {

// Files and directories created by this invocation; removed again if the command fails.
class Outputs {
 public:
  std::ofstream open(const fs::path& p) {
    make_parent(p);
    track(p);
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    return out;
  }

  void write(const fs::path& p, const std::string& text) {
    auto out = open(p);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + p.string());
  }

  void make_dir(const fs::path& p) {
    if (fs::exists(p)) {
      if (!fs::is_directory(p)) throw std::runtime_error(p.string() + " exists and is not a directory");
      return;
    }
    make_parent(p);
    fs::create_directory(p);
    created_.push_back(p);
  }

  void track(const fs::path& p) {
    if (!fs::exists(p)) created_.push_back(p);
  }

  void rollback() noexcept {
    for (auto it = created_.rbegin(); it != created_.rend(); ++it) {
      std::error_code ec;
      fs::remove_all(*it, ec);
    }
    created_.clear();
  }

 private:
  void make_parent(const fs::path& p) {
    const auto parent = p.parent_path();
    if (!parent.empty() && !fs::exists(parent)) make_dir(parent);
  }

  std::vector<fs::path> created_;
};

std::string weights_name(Strategy s, std::uint64_t seed, int L) {
  return fmt::format("{}_seed{}_L{}.json", to_string(s), seed, L);
}

void write_results(Outputs& out, const ExperimentResults& res, const fs::path& dir) {
  for (const char* name : {"results.json", "cells.csv", "curves.csv"}) out.track(dir / name);
  save_results(res, dir);
}

void cmd_train(const fs::path& config_path, const fs::path& dir, Outputs& out) {
  const auto cfg = load_config(config_path);
  out.make_dir(dir);
  RunArtifacts art;
  const auto res = run_experiment(cfg, &art, [](const std::string& msg) { std::cerr << msg << '\n'; });

  out.write(dir / "config.json", to_json(cfg).dump(2) + "\n");
  write_results(out, res, dir);
  out.write(dir / "curves.svg", curve_svg(res.curves, res.max_attempts));
  for (const auto& [key, col] : art.collections) {
    const auto [strategy, seed] = key;
    const auto stem = fmt::format("{}_seed{}", to_string(strategy), seed);
    auto data = out.open(dir / "data" / (stem + ".jsonl"));
    col.data.write_jsonl(data);
    out.write(dir / "data" / (stem + "_hist.svg"), histogram_svg(motion_histogram(col.data, 20)));
    for (const auto& [L, w] : col.snapshots) {
      out.write(dir / "weights" / weights_name(strategy, seed, L), weights_to_json(w).dump() + "\n");
    }
  }
}

NetworkWeights load_weights(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot open weights " + p.string());
  return weights_from_json(nlohmann::json::parse(in));
}

void cmd_eval(const fs::path& config_path, const fs::path& weights_path, const fs::path& dir, int L, Outputs& out) {
  const auto cfg = load_config(config_path);
  const auto w = load_weights(weights_path);
  out.make_dir(dir);
  const auto res = evaluate_weights(cfg, w, L);
  write_results(out, res, dir);

  const auto nn = nn_only_eval(NetworkPrior(w), evaluation_mechanisms(cfg), cfg);
  auto csv = out.open(dir / "nn_only.csv");
  csv << "mech_seed,nn_regret,cpp_regret\n";
  for (const auto& r : nn) csv << fmt::format("{},{},{}\n", r.mech_seed, r.nn_regret, r.cpp_regret);
}

void cmd_curve(const fs::path& csv_path, const fs::path& svg_path, int max_attempts, Outputs& out) {
  std::ifstream in(csv_path);
  if (!in) throw std::runtime_error("cannot open " + csv_path.string());
  const auto curves = read_curves_csv(in);
  if (curves.empty()) throw std::runtime_error(csv_path.string() + " holds no curve points");
  out.write(svg_path, curve_svg(curves, max_attempts));
}

void cmd_hist(const fs::path& data_path, const fs::path& svg_path, int bins, Outputs& out) {
  std::ifstream in(data_path);
  if (!in) throw std::runtime_error("cannot open " + data_path.string());
  const auto data = Dataset::read_jsonl(in);
  out.write(svg_path, histogram_svg(motion_histogram(data, bins)));
}

void cmd_prior_map(const fs::path& weights_path, const std::string& kind, std::uint64_t seed, const fs::path& svg_path,
                   int resolution, std::optional<double> door_pitch, Outputs& out) {
  const NetworkPrior prior(load_weights(weights_path));
  const auto m = generate_mechanism(parse_kind(kind), seed);
  out.write(svg_path, prior_map_svg(prior_map(prior, m, resolution, door_pitch)));
}

void cmd_show_mech(const std::string& kind, std::uint64_t seed, const fs::path& pgm_path, Outputs& out) {
  const auto m = generate_mechanism(parse_kind(kind), seed);
  auto pgm = out.open(pgm_path);
  write_pgm(pgm, render(m));
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* env = std::getenv("MECHPRIOR_THREADS")) {
    try {
      kernels::set_max_threads(std::stoi(env));
    } catch (const std::exception&) {
      std::cerr << "mechprior: MECHPRIOR_THREADS must be an integer\n";
      return 2;
    }
  }

  CLI::App app{"Learned-prior GP-UCB experiments on simulated sliders and doors"};
  app.require_subcommand(1);

  std::string config, out_path, weights, input, kind;
  std::uint64_t seed = 0;
  int L = 0, max_attempts = 100, bins = 20, resolution = 32;
  std::optional<double> door_pitch;

  auto* train = app.add_subcommand("train", "collect data, fit the prior, evaluate every checkpoint");
  train->add_option("config", config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  train->add_option("out", out_path, "output directory")->required();

  auto* eval = app.add_subcommand("eval", "evaluate fixed weights on the config's evaluation mechanisms");
  eval->add_option("config", config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  eval->add_option("weights", weights, "weights file")->required()->check(CLI::ExistingFile);
  eval->add_option("out", out_path, "output directory")->required();
  eval->add_option("--L", L, "L label written into the result rows");

  auto* curve = app.add_subcommand("curve", "learning curves from an aggregated CSV");
  curve->add_option("csv", input, "curves.csv")->required()->check(CLI::ExistingFile);
  curve->add_option("out", out_path, "SVG file")->required();
  curve->add_option("--max-attempts", max_attempts, "y-axis cap")->check(CLI::PositiveNumber);

  auto* hist = app.add_subcommand("hist", "motion histogram of a dataset");
  hist->add_option("dataset", input, "dataset (JSON lines)")->required()->check(CLI::ExistingFile);
  hist->add_option("out", out_path, "SVG file")->required();
  hist->add_option("--bins", bins, "nonzero bins")->check(CLI::PositiveNumber);

  auto* pmap = app.add_subcommand("prior-map", "heatmap of the learned prior for one mechanism");
  pmap->add_option("weights", weights, "weights file")->required()->check(CLI::ExistingFile);
  pmap->add_option("kind", kind, "slider or door")->required();
  pmap->add_option("seed", seed, "mechanism seed")->required();
  pmap->add_option("out", out_path, "SVG file")->required();
  pmap->add_option("--resolution", resolution, "cells per axis")->check(CLI::PositiveNumber);
  pmap->add_option("--door-pitch", door_pitch, "pitch slice (rad), required for doors");

  auto* show = app.add_subcommand("show-mech", "render a mechanism to PGM");
  show->add_option("kind", kind, "slider or door")->required();
  show->add_option("seed", seed, "mechanism seed")->required();
  show->add_option("out", out_path, "PGM file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  Outputs out;
  try {
    if (out_path.empty()) throw std::runtime_error("output path must not be empty");
    if (*train) cmd_train(config, out_path, out);
    if (*eval) cmd_eval(config, weights, out_path, L, out);
    if (*curve) cmd_curve(input, out_path, max_attempts, out);
    if (*hist) cmd_hist(input, out_path, bins, out);
    if (*pmap) cmd_prior_map(weights, kind, seed, out_path, resolution, door_pitch, out);
    if (*show) cmd_show_mech(kind, seed, out_path, out);
  } catch (const std::exception& e) {
    out.rollback();
    std::cerr << "mechprior: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
