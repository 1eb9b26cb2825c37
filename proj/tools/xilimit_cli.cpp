// Command-line front end over the xilimit C interface.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "xilimit/xilimit.h"

namespace {

int report_failure(xl_status st) {
  std::fprintf(stderr, "error [%s]: %s\n", xl_status_name(st), xl_last_error());
  return 2;
}

template <class T>
std::vector<T> parse_list(const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::istringstream is(item);
    T v{};
    if (!(is >> v) || !is.eof()) throw CLI::ValidationError("bad list element '" + item + "'");
    out.push_back(v);
  }
  return out;
}

int print_and_free(xl_status st, char* text) {
  if (st != XL_OK) return report_failure(st);
  if (text) std::fputs(text, stdout);
  std::fputc('\n', stdout);
  xl_free_string(text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Virtual isometry simulations of Haar unitaries and the limit xi function"};
  app.require_subcommand(1);

  // grow
  auto* grow = app.add_subcommand("grow", "grow coupled chains and persist their spectra");
  std::uint64_t seed = 0, replicas = 1;
  std::string dims_text, out_dir, manifest_path;
  bool keep_dense = false;
  long long truncation = 0, window = 0;
  grow->add_option("--seed", seed, "master seed");
  grow->add_option("--replicas", replicas, "number of replicas");
  grow->add_option("--dims", dims_text, "comma-separated increasing snapshot dims");
  grow->add_option("--out", out_dir, "output directory");
  grow->add_option("--truncation", truncation, "default product truncation A (0: n)");
  grow->add_option("--window", window, "default point window K (0: n)");
  grow->add_flag("--keep-dense", keep_dense, "store dense U_n at every dim");
  grow->add_option("--manifest", manifest_path, "manifest JSON file (overrides the flags)");

  // verify
  auto* verify = app.add_subcommand("verify", "run a verification suite on a run directory");
  std::string run_dir, suite = "all";
  verify->add_option("--run", run_dir, "run directory")->required();
  verify->add_option("--suite", suite, "identities|statistics|all")
      ->check(CLI::IsMember({"identities", "statistics", "all"}));

  // xi-grid
  auto* grid = app.add_subcommand("xi-grid", "evaluate xi_n on a grid and summarize convergence");
  std::string box_text = "-2,2,-2,2", grid_dims;
  int steps = 21;
  grid->add_option("--run", run_dir, "run directory")->required();
  grid->add_option("--box", box_text, "re_lo,re_hi,im_lo,im_hi");
  grid->add_option("--steps", steps, "grid points per axis");
  grid->add_option("--dims", grid_dims, "comma-separated dims (default: all)");

  // stats
  auto* stats = app.add_subcommand("stats", "ensemble statistics");
  std::string kind;
  long long stat_n = 0, stat_window = 0;
  double lambda = 1.0;
  int alpha = 1, bins = 40;
  stats->add_option("--run", run_dir, "run directory")->required();
  stats->add_option("kind", kind, "variance|paircorr|deviation|coupling|mgf|args|powersum")
      ->required()
      ->check(CLI::IsMember({"variance", "paircorr", "deviation", "coupling", "mgf", "args", "powersum"}));
  stats->add_option("--n", stat_n, "dimension (default: largest)");
  stats->add_option("--lambda", lambda, "MGF parameter");
  stats->add_option("--alpha", alpha, "R_alpha index for power sums");
  stats->add_option("--window", stat_window, "index window K");
  stats->add_option("--bins", bins, "pair-correlation bins");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*grow) {
      std::string manifest;
      if (!manifest_path.empty()) {
        std::ifstream in(manifest_path);
        if (!in) {
          std::fprintf(stderr, "error: cannot read %s\n", manifest_path.c_str());
          return 2;
        }
        std::stringstream ss;
        ss << in.rdbuf();
        manifest = ss.str();
        if (!out_dir.empty()) {
          auto j = nlohmann::json::parse(manifest);
          j["out"] = out_dir;
          manifest = j.dump();
        }
      } else {
        if (dims_text.empty() || out_dir.empty()) {
          std::fprintf(stderr, "error: grow needs --dims and --out (or --manifest)\n");
          return 2;
        }
        nlohmann::json j;
        j["seed"] = seed;
        j["replicas"] = replicas;
        j["dims"] = parse_list<long long>(dims_text);
        j["truncation"] = {{"A", truncation}, {"K", window}};
        j["out"] = out_dir;
        j["keep_dense"] = keep_dense;
        manifest = j.dump();
      }
      const xl_status st = xl_run_grow(manifest.c_str());
      if (st != XL_OK) return report_failure(st);
      return 0;
    }
    if (*verify) {
      char* report = nullptr;
      int hard_ok = 0;
      const xl_status st = xl_run_verify(run_dir.c_str(), suite.c_str(), &report, &hard_ok);
      if (print_and_free(st, report) != 0) return 2;
      return hard_ok ? 0 : 1;
    }
    if (*grid) {
      nlohmann::json j;
      const auto box = parse_list<double>(box_text);
      if (box.size() != 4) throw CLI::ValidationError("--box needs four numbers");
      j["box"] = box;
      j["steps"] = steps;
      if (!grid_dims.empty()) j["dims"] = parse_list<long long>(grid_dims);
      char* summary = nullptr;
      const xl_status st = xl_run_xi_grid(run_dir.c_str(), j.dump().c_str(), &summary);
      return print_and_free(st, summary);
    }
    if (*stats) {
      nlohmann::json j{{"n", stat_n}, {"lambda", lambda}, {"alpha", alpha}, {"window", stat_window}, {"bins", bins}};
      char* text = nullptr;
      const xl_status st = xl_run_stats(run_dir.c_str(), kind.c_str(), j.dump().c_str(), &text);
      return print_and_free(st, text);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
