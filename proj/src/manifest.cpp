#include "manifest.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "error.hpp"
#include "rng.hpp"

namespace xilimit {

namespace {

using nlohmann::json;

json to_json_object(const ExperimentManifest& m) {
  json j;
  j["seed"] = m.seed;
  j["replicas"] = m.replicas;
  j["dims"] = m.dims;
  j["truncation"] = {{"A", m.truncation}, {"K", m.window}};
  j["grid"] = {{"box", m.grid.box}, {"steps", m.grid.steps}};
  j["out"] = m.out;
  j["keep_dense"] = m.keep_dense;
  j["suites"] = m.suites;
  return j;
}

}  // namespace

void validate(const ExperimentManifest& m) {
  if (m.replicas < 1) fail(ErrorCode::Manifest, "replica count must be >= 1");
  if (m.dims.empty()) fail(ErrorCode::Manifest, "dims must not be empty");
  for (std::size_t i = 0; i < m.dims.size(); ++i) {
    if (m.dims[i] < 1) fail(ErrorCode::Manifest, "dims must be positive");
    if (i > 0 && m.dims[i] <= m.dims[i - 1])
      fail(ErrorCode::Manifest, "dims must be strictly increasing");
  }
  if (m.truncation < 0 || m.window < 0) fail(ErrorCode::Manifest, "truncation defaults must be >= 0");
  for (double b : m.grid.box)
    if (!std::isfinite(b)) fail(ErrorCode::Manifest, "grid bounds must be finite");
  if (m.grid.box[0] > m.grid.box[1] || m.grid.box[2] > m.grid.box[3])
    fail(ErrorCode::Manifest, "grid box must satisfy lo <= hi");
  if (m.grid.steps < 1) fail(ErrorCode::Manifest, "grid steps must be >= 1");
  for (const std::string& s : m.suites)
    if (s != "identities" && s != "statistics" && s != "all")
      fail(ErrorCode::Manifest, "unknown suite '" + s + "'");
}

std::string manifest_to_json(const ExperimentManifest& m) { return to_json_object(m).dump(2); }

ExperimentManifest manifest_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::Manifest, std::string("manifest is not valid JSON: ") + e.what());
  }
  ExperimentManifest m;
  try {
    m.seed = j.at("seed").get<std::uint64_t>();
    m.replicas = j.at("replicas").get<std::uint64_t>();
    m.dims = j.at("dims").get<std::vector<Eigen::Index>>();
    if (j.contains("truncation")) {
      m.truncation = j["truncation"].value("A", 0LL);
      m.window = j["truncation"].value("K", 0LL);
    }
    if (j.contains("grid")) {
      if (j["grid"].contains("box")) m.grid.box = j["grid"]["box"].get<std::array<double, 4>>();
      m.grid.steps = j["grid"].value("steps", m.grid.steps);
    }
    m.out = j.value("out", std::string());
    m.keep_dense = j.value("keep_dense", false);
    if (j.contains("suites")) m.suites = j["suites"].get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    fail(ErrorCode::Manifest, std::string("manifest field error: ") + e.what());
  }
  validate(m);
  return m;
}

std::string manifest_hash(const ExperimentManifest& m) {
  json j = to_json_object(m);
  j.erase("out");
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(j.dump())));
  return buf;
}

}  // namespace xilimit
