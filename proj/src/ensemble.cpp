#include "ensemble.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "error.hpp"
#include "parallel.hpp"

namespace xilimit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr Eigen::Index kDenseDefaultLimit = 64;

std::string replica_stem(std::uint64_t id) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "replica_%06llu", static_cast<unsigned long long>(id));
  return buf;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) fail(ErrorCode::IncompleteRun, "missing artifact " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot write " + p.string());
  out << text;
  if (!out) fail(ErrorCode::Io, "write failed for " + p.string());
}

ReplicaRecord grow_replica(const ExperimentManifest& m, std::uint64_t replica_id, bool drop_dense) {
  VirtualIsometryChain chain(m.seed, replica_id);
  chain.reserve(m.dims.back());
  ReplicaRecord rec;
  rec.replica_id = replica_id;
  const Eigen::Index keep = m.keep_dense ? m.dims.back() : kDenseDefaultLimit;
  const EigenOptions opts{EigenMethod::Cayley, false};
  try {
    grow_chain(chain, m.dims, drop_dense ? 0 : keep,
               [&](const VirtualIsometryChain& c, ChainSnapshot&& snap) {
                 rec.spectra.push_back(eigenangles(c.matrix(), opts, Provenance{m.seed, replica_id}));
                 rec.snapshots.push_back(std::move(snap));
               });
  } catch (const Error& e) {
    fail(e.code(), "replica " + std::to_string(replica_id) + ": " + e.what());
  }
  return rec;
}

std::string spectra_csv(const std::string& hash, const ReplicaRecord& rec) {
  std::string out = hash_comment(hash) + "replica_id,n,k,theta_k,y_k\n";
  char line[160];
  for (const Spectrum& s : rec.spectra) {
    const Eigen::Index n = s.size();
    const double scale = static_cast<double>(n) / kTwoPi;
    for (Eigen::Index k = 1; k <= n; ++k) {
      std::snprintf(line, sizeof line, "%llu,%lld,%lld,%.17g,%.17g\n",
                    static_cast<unsigned long long>(rec.replica_id), static_cast<long long>(n),
                    static_cast<long long>(k), s.angle(k), scale * s.angle(k));
      out += line;
    }
  }
  return out;
}

json snapshot_json(const std::string& hash, const ReplicaRecord& rec) {
  json arr = json::array();
  for (const ChainSnapshot& s : rec.snapshots)
    arr.push_back({{"replica_id", s.replica_id},
                   {"seed", s.seed},
                   {"n", s.n},
                   {"unitarity_residual", s.unitarity_residual},
                   {"det_phase", s.det_phase}});
  return {{"manifest_hash", hash}, {"snapshots", arr}};
}

void write_dense(const fs::path& p, const Eigen::MatrixXcd& u) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot write " + p.string());
  // Column-major (re, im) pairs of doubles.
  out.write(reinterpret_cast<const char*>(u.data()),
            static_cast<std::streamsize>(u.size() * sizeof(std::complex<double>)));
  if (!out) fail(ErrorCode::Io, "write failed for " + p.string());
}

}  // namespace

std::string hash_comment(const std::string& hash) { return "# manifest_hash: " + hash + "\n"; }

std::size_t EnsembleRun::dim_index(Eigen::Index n) const {
  for (std::size_t i = 0; i < manifest.dims.size(); ++i)
    if (manifest.dims[i] == n) return i;
  fail(ErrorCode::IncompleteRun, "run has no snapshots at n=" + std::to_string(n));
}

const Spectrum& EnsembleRun::spectrum(std::size_t replica_pos, Eigen::Index n) const {
  const std::size_t i = dim_index(n);
  const ReplicaRecord& rec = replicas.at(replica_pos);
  if (i >= rec.spectra.size())
    fail(ErrorCode::IncompleteRun, "replica " + std::to_string(rec.replica_id) +
                                       " is missing dim " + std::to_string(n));
  return rec.spectra[i];
}

std::vector<Spectrum> EnsembleRun::spectra_at(Eigen::Index n) const {
  std::vector<Spectrum> out;
  out.reserve(replicas.size());
  for (std::size_t r = 0; r < replicas.size(); ++r) out.push_back(spectrum(r, n));
  return out;
}

EnsembleRun grow_ensemble(const ExperimentManifest& manifest, std::uint64_t first_replica) {
  validate(manifest);
  const auto start = std::chrono::steady_clock::now();
  EnsembleRun run;
  run.manifest = manifest;
  run.hash = manifest_hash(manifest);
  run.replicas.resize(manifest.replicas);
  parallel_for(manifest.replicas, [&](std::size_t i) {
    run.replicas[i] = grow_replica(manifest, first_replica + i, !manifest.keep_dense);
  });
  run.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

EnsembleRun run_grow(const ExperimentManifest& manifest) {
  validate(manifest);
  if (manifest.out.empty()) fail(ErrorCode::Manifest, "manifest has no output directory");
  const auto start = std::chrono::steady_clock::now();
  const fs::path dir(manifest.out);
  std::error_code ec;
  for (const char* sub : {"spectra", "snapshots", "dense"}) {
    fs::create_directories(dir / sub, ec);
    if (ec) fail(ErrorCode::Io, "cannot create " + (dir / sub).string() + ": " + ec.message());
  }
  // An index left from an earlier run would describe stale files until rewritten.
  fs::remove(dir / "index.json", ec);

  EnsembleRun run;
  run.manifest = manifest;
  run.hash = manifest_hash(manifest);
  run.directory = dir.string();
  run.replicas.resize(manifest.replicas);
  parallel_for(manifest.replicas, [&](std::size_t i) {
    ReplicaRecord rec = grow_replica(manifest, i, false);
    const std::string stem = replica_stem(rec.replica_id);
    write_file(dir / "spectra" / (stem + ".csv"), spectra_csv(run.hash, rec));
    write_file(dir / "snapshots" / (stem + ".json"), snapshot_json(run.hash, rec).dump(2) + "\n");
    for (ChainSnapshot& s : rec.snapshots) {
      if (!s.dense) continue;
      char name[64];
      std::snprintf(name, sizeof name, "%s_n%05lld.bin", stem.c_str(), static_cast<long long>(s.n));
      write_dense(dir / "dense" / name, *s.dense);
      s.dense.reset();
    }
    run.replicas[i] = std::move(rec);
  });
  run.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  ExperimentManifest persisted = manifest;
  write_file(dir / "manifest.json", manifest_to_json(persisted) + "\n");
  json index;
  index["manifest_hash"] = run.hash;
  index["dims"] = manifest.dims;
  index["wall_clock_seconds"] = run.wall_seconds;
  json reps = json::array();
  for (const ReplicaRecord& rec : run.replicas) {
    const std::string stem = replica_stem(rec.replica_id);
    reps.push_back({{"replica_id", rec.replica_id},
                    {"spectra", "spectra/" + stem + ".csv"},
                    {"snapshots", "snapshots/" + stem + ".json"}});
  }
  index["replicas"] = reps;
  write_file(dir / "index.json", index.dump(2) + "\n");
  return run;
}

EnsembleRun load_run(const std::string& directory) {
  const fs::path dir(directory);
  if (!fs::exists(dir / "manifest.json"))
    fail(ErrorCode::IncompleteRun, "no manifest.json in " + directory);
  EnsembleRun run;
  run.manifest = manifest_from_json(read_file(dir / "manifest.json"));
  run.hash = manifest_hash(run.manifest);
  run.directory = dir.string();
  if (!fs::exists(dir / "index.json"))
    fail(ErrorCode::IncompleteRun, "no index.json in " + directory + " (grow did not finish)");
  json index;
  try {
    index = json::parse(read_file(dir / "index.json"));
  } catch (const json::exception& e) {
    fail(ErrorCode::IncompleteRun, std::string("index.json unreadable: ") + e.what());
  }
  if (index.value("manifest_hash", std::string()) != run.hash)
    fail(ErrorCode::Manifest, "index.json was written for a different manifest");
  run.wall_seconds = index.value("wall_clock_seconds", 0.0);
  const auto& entries = index.at("replicas");
  if (entries.size() != run.manifest.replicas)
    fail(ErrorCode::IncompleteRun, "index lists " + std::to_string(entries.size()) + " of " +
                                       std::to_string(run.manifest.replicas) + " replicas");
  const std::vector<Eigen::Index>& dims = run.manifest.dims;
  run.replicas.resize(entries.size());

  parallel_for(entries.size(), [&](std::size_t i) {
    const json& e = entries[i];
    ReplicaRecord rec;
    rec.replica_id = e.at("replica_id").get<std::uint64_t>();
    const fs::path csv_path = dir / e.at("spectra").get<std::string>();
    std::istringstream csv(read_file(csv_path));
    std::string line;
    std::getline(csv, line);
    if (line + "\n" != hash_comment(run.hash))
      fail(ErrorCode::Manifest, csv_path.string() + " carries a different manifest hash");
    std::getline(csv, line);
    std::map<long long, std::vector<double>> by_dim;
    while (std::getline(csv, line)) {
      if (line.empty()) continue;
      unsigned long long rid = 0;
      long long n = 0, k = 0;
      double theta = 0.0, y = 0.0;
      if (std::sscanf(line.c_str(), "%llu,%lld,%lld,%lf,%lf", &rid, &n, &k, &theta, &y) != 5 ||
          rid != rec.replica_id)
        fail(ErrorCode::IncompleteRun, "malformed row in " + csv_path.string() + ": " + line);
      std::vector<double>& v = by_dim[n];
      if (k != static_cast<long long>(v.size()) + 1)
        fail(ErrorCode::IncompleteRun, "rows out of order in " + csv_path.string());
      v.push_back(theta);
    }
    for (Eigen::Index n : dims) {
      auto it = by_dim.find(n);
      if (it == by_dim.end() || static_cast<Eigen::Index>(it->second.size()) != n)
        fail(ErrorCode::IncompleteRun, "replica " + std::to_string(rec.replica_id) +
                                           " is missing dim " + std::to_string(n));
      rec.spectra.push_back(
          Spectrum::from_angles(std::move(it->second), Provenance{run.manifest.seed, rec.replica_id}));
    }

    const fs::path snap_path = dir / e.at("snapshots").get<std::string>();
    json snap;
    try {
      snap = json::parse(read_file(snap_path));
    } catch (const json::exception& ex) {
      fail(ErrorCode::IncompleteRun, snap_path.string() + " unreadable: " + ex.what());
    }
    if (snap.value("manifest_hash", std::string()) != run.hash)
      fail(ErrorCode::Manifest, snap_path.string() + " carries a different manifest hash");
    for (const json& s : snap.at("snapshots")) {
      ChainSnapshot cs;
      cs.replica_id = s.at("replica_id").get<std::uint64_t>();
      cs.seed = s.at("seed").get<std::uint64_t>();
      cs.n = s.at("n").get<Eigen::Index>();
      cs.unitarity_residual = s.at("unitarity_residual").get<double>();
      cs.det_phase = s.at("det_phase").get<double>();
      rec.snapshots.push_back(std::move(cs));
    }
    if (rec.snapshots.size() != dims.size())
      fail(ErrorCode::IncompleteRun, snap_path.string() + " does not cover every dim");
    run.replicas[i] = std::move(rec);
  });
  return run;
}

}  // namespace xilimit
