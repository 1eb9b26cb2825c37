#include "xilimit/xilimit.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <string>

#include <json.hpp>

#include "arg_counting.hpp"
#include "commands.hpp"
#include "ensemble.hpp"
#include "error.hpp"
#include "isometry.hpp"
#include "verify.hpp"
#include "xi.hpp"

struct xl_chain {
  xilimit::VirtualIsometryChain chain;
};

struct xl_spectrum {
  xilimit::Spectrum spec;
};

namespace {

thread_local std::string g_last_error;

template <class F>
xl_status guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return XL_OK;
  } catch (const xilimit::Error& e) {
    g_last_error = e.what();
    return static_cast<xl_status>(static_cast<int>(e.code()));
  } catch (const nlohmann::json::exception& e) {
    g_last_error = e.what();
    return XL_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return XL_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return XL_INTERNAL;
  }
}

void require(bool cond, const char* what) {
  if (!cond) xilimit::fail(xilimit::ErrorCode::InvalidArgument, what);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* xl_last_error(void) { return g_last_error.c_str(); }

const char* xl_status_name(xl_status status) {
  switch (status) {
    case XL_OK: return "Ok";
    case XL_INTERNAL: return "Internal";
    default: return xilimit::to_string(static_cast<xilimit::ErrorCode>(static_cast<int>(status)));
  }
}

void xl_free_string(char* s) { std::free(s); }

xl_status xl_chain_create(uint64_t seed, uint64_t replica_id, xl_chain** out) {
  return guard([&] {
    require(out != nullptr, "out is null");
    *out = new xl_chain{xilimit::VirtualIsometryChain(seed, replica_id)};
  });
}

void xl_chain_destroy(xl_chain* chain) { delete chain; }

xl_status xl_chain_grow(xl_chain* chain, int64_t n) {
  return guard([&] {
    require(chain != nullptr, "chain is null");
    require(n >= 1, "n must be >= 1");
    chain->chain.grow_to(n);
  });
}

int64_t xl_chain_dim(const xl_chain* chain) { return chain ? chain->chain.dim() : -1; }

xl_status xl_chain_matrix(const xl_chain* chain, double* buf, size_t len) {
  return guard([&] {
    require(chain != nullptr && buf != nullptr, "null argument");
    const Eigen::Index n = chain->chain.dim();
    require(len >= static_cast<size_t>(2 * n * n), "buffer too small");
    const Eigen::MatrixXcd u = chain->chain.matrix();
    std::memcpy(buf, u.data(), static_cast<size_t>(u.size()) * sizeof(std::complex<double>));
  });
}

xl_status xl_chain_unitarity_residual(const xl_chain* chain, double* out) {
  return guard([&] {
    require(chain != nullptr && out != nullptr, "null argument");
    *out = xilimit::unitarity_residual(chain->chain.matrix());
  });
}

xl_status xl_chain_spectrum(const xl_chain* chain, xl_spectrum** out) {
  return guard([&] {
    require(chain != nullptr && out != nullptr, "null argument");
    require(chain->chain.dim() >= 1, "chain is empty");
    const xilimit::Provenance p{chain->chain.seed(), chain->chain.replica_id()};
    *out = new xl_spectrum{xilimit::eigenangles(chain->chain.matrix(), {}, p)};
  });
}

xl_status xl_spectrum_from_angles(const double* theta, size_t n, xl_spectrum** out) {
  return guard([&] {
    require(theta != nullptr && out != nullptr && n >= 1, "invalid angle list");
    *out = new xl_spectrum{xilimit::Spectrum::from_angles(std::vector<double>(theta, theta + n))};
  });
}

void xl_spectrum_destroy(xl_spectrum* spec) { delete spec; }

int64_t xl_spectrum_size(const xl_spectrum* spec) { return spec ? spec->spec.size() : -1; }

xl_status xl_spectrum_angles(const xl_spectrum* spec, double* buf, size_t len) {
  return guard([&] {
    require(spec != nullptr && buf != nullptr, "null argument");
    const auto a = spec->spec.angles();
    require(len >= a.size(), "buffer too small");
    std::copy(a.begin(), a.end(), buf);
  });
}

xl_status xl_xi_direct(const xl_spectrum* spec, double re, double im, double* out_re, double* out_im) {
  return guard([&] {
    require(spec && out_re && out_im, "null argument");
    const auto v = xilimit::xi_direct(spec->spec, {re, im}).value;
    *out_re = v.real();
    *out_im = v.imag();
  });
}

xl_status xl_xi_product(const xl_spectrum* spec, double re, double im, int64_t a, double* out_re,
                        double* out_im, double* tail_bound) {
  return guard([&] {
    require(spec && out_re && out_im, "null argument");
    require(a >= 1, "truncation must be >= 1");
    const auto pts = xilimit::rescaled_points(spec->spec, a);
    const auto e = xilimit::xi_product(pts, {re, im}, a);
    *out_re = e.value.real();
    *out_im = e.value.imag();
    if (tail_bound) *tail_bound = e.tail_bound.value_or(-1.0);
  });
}

xl_status xl_im_log_z(const xl_spectrum* spec, double phi, double* out) {
  return guard([&] {
    require(spec && out, "null argument");
    *out = xilimit::im_log_Z(spec->spec, phi);
  });
}

xl_status xl_count_zeros_arc(const xl_spectrum* spec, double phi_a, double phi_b, int64_t* out) {
  return guard([&] {
    require(spec && out, "null argument");
    *out = xilimit::count_zeros_arc(spec->spec, phi_a, phi_b);
  });
}

xl_status xl_arg_supremum(const xl_spectrum* spec, double* out) {
  return guard([&] {
    require(spec && out, "null argument");
    *out = xilimit::arg_supremum(spec->spec).value;
  });
}

xl_status xl_mgf_exact(int n, double lambda, double* out) {
  return guard([&] {
    require(out != nullptr, "null argument");
    *out = xilimit::mgf_exact(n, lambda);
  });
}

xl_status xl_chernoff_bound(int n, double x, double* out) {
  return guard([&] {
    require(out != nullptr, "null argument");
    *out = xilimit::chernoff_bound(n, x);
  });
}

xl_status xl_run_grow(const char* manifest_json) {
  return guard([&] {
    require(manifest_json != nullptr, "manifest is null");
    xilimit::run_grow(xilimit::manifest_from_json(manifest_json));
  });
}

xl_status xl_run_verify(const char* run_dir, const char* suite, char** report, int* hard_ok) {
  return guard([&] {
    require(run_dir && suite && report, "null argument");
    const auto run = xilimit::load_run(run_dir);
    const auto r = xilimit::run_verify(run, suite);
    *report = dup_string(xilimit::report_to_json(r));
    if (hard_ok) *hard_ok = r.hard_ok() ? 1 : 0;
  });
}

xl_status xl_run_xi_grid(const char* run_dir, const char* grid_json, char** summary) {
  return guard([&] {
    require(run_dir && grid_json, "null argument");
    const auto run = xilimit::load_run(run_dir);
    const auto j = nlohmann::json::parse(grid_json);
    xilimit::GridSpec grid = run.manifest.grid;
    if (j.contains("box")) grid.box = j["box"].get<std::array<double, 4>>();
    grid.steps = j.value("steps", grid.steps);
    std::vector<Eigen::Index> dims;
    if (j.contains("dims")) dims = j["dims"].get<std::vector<Eigen::Index>>();
    const auto out = (std::filesystem::path(run_dir) / "xi_grid").string();
    const auto res = xilimit::run_xi_grid(run, grid, dims, out);
    if (summary) {
      nlohmann::json s;
      s["files"] = res.files.size();
      s["strictly_decreasing"] = res.convergence.strictly_decreasing;
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& r : res.convergence.rows)
        rows.push_back({{"n", r.n}, {"median_sup_gap", r.median}, {"replicas", r.replicas}});
      s["medians"] = rows;
      *summary = dup_string(s.dump(2));
    }
  });
}

xl_status xl_run_stats(const char* run_dir, const char* kind, const char* options_json, char** out) {
  return guard([&] {
    require(run_dir && kind && out, "null argument");
    xilimit::StatsOptions o;
    if (options_json && *options_json) {
      const auto j = nlohmann::json::parse(options_json);
      o.n = j.value("n", o.n);
      o.lambda = j.value("lambda", o.lambda);
      o.alpha = j.value("alpha", o.alpha);
      o.window = j.value("window", o.window);
      o.bins = j.value("bins", o.bins);
    }
    const auto run = xilimit::load_run(run_dir);
    *out = dup_string(xilimit::run_stats(run, kind, o));
  });
}

}  // extern "C"
