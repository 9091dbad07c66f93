#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include "fibermetric/manifest.hpp"

namespace fm {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json manifest_to_json(const RunManifest& m) {
  Json files = Json::array();
  for (const auto& f : m.files)
    files.push_back(
        Json{{"name", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  return Json{{"artifact_version", m.artifact_version},
              {"experiment", m.experiment},
              {"config_sha256", m.config_sha256},
              {"seed", m.seed},
              {"seed_overridden", m.seed_overridden},
              {"workers", m.workers},
              {"started_utc", m.started_utc},
              {"finished_utc", m.finished_utc},
              {"wall_time_s", m.wall_time_s},
              {"verdict", m.verdict},
              {"files", files}};
}

RunManifest manifest_from_json(const Json& j) {
  require_keys(j, "manifest",
               {"artifact_version", "experiment", "config_sha256", "seed",
                "seed_overridden", "workers", "started_utc", "finished_utc",
                "wall_time_s", "verdict", "files"},
               {});
  RunManifest m;
  m.artifact_version = j["artifact_version"].get<std::string>();
  m.experiment = j["experiment"].get<std::string>();
  m.config_sha256 = j["config_sha256"].get<std::string>();
  m.seed = j["seed"].get<std::uint64_t>();
  m.seed_overridden = j["seed_overridden"].get<bool>();
  m.workers = j["workers"].get<int>();
  m.started_utc = j["started_utc"].get<std::string>();
  m.finished_utc = j["finished_utc"].get<std::string>();
  m.wall_time_s = j["wall_time_s"].get<double>();
  m.verdict = j["verdict"].get<bool>();
  if (!j["files"].is_array()) throw std::runtime_error("manifest: bad files list");
  for (const auto& f : j["files"]) {
    require_keys(f, "manifest.files[]", {"name", "sha256", "bytes"}, {});
    m.files.push_back(ManifestFile{f["name"].get<std::string>(),
                                   f["sha256"].get<std::string>(),
                                   f["bytes"].get<std::uint64_t>()});
  }
  return m;
}

void write_manifest(const std::filesystem::path& dir, const RunManifest& m) {
  const std::filesystem::path tmp = dir / (std::string(kManifestName) + ".tmp");
  const std::filesystem::path dst = dir / kManifestName;
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << manifest_to_json(m).dump(2) << '\n';
    if (!out) throw std::runtime_error("short write: " + tmp.string());
  }
  std::filesystem::rename(tmp, dst);
}

RunManifest read_manifest(const std::filesystem::path& dir) {
  const std::filesystem::path p = dir / kManifestName;
  if (!std::filesystem::exists(p))
    throw std::runtime_error("missing manifest: " + p.string() +
                             " (incomplete run directory)");
  return manifest_from_json(load_json_file(p.string()));
}

}  // namespace fm
