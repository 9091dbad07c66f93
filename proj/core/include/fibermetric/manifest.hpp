// Run manifests: the completeness marker of a run directory.  The manifest
// lists every emitted file with its SHA-256 checksum and is written last,
// atomically (temp file + rename); a run directory without manifest.json is
// incomplete by definition.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fibermetric/config.hpp"

namespace fm {

inline constexpr const char* kArtifactVersion = "1.0.0";
inline constexpr const char* kManifestName = "manifest.json";

struct ManifestFile {
  std::string name;    // path relative to the run directory
  std::string sha256;  // hex digest of the file bytes
  std::uint64_t bytes = 0;
};

struct RunManifest {
  std::string artifact_version = kArtifactVersion;
  std::string experiment;
  std::string config_sha256;  // digest of the echoed config.json bytes
  std::uint64_t seed = 0;
  bool seed_overridden = false;  // FIBERMETRIC_SEED was in effect
  int workers = 1;
  std::string started_utc, finished_utc;  // ISO-8601, UTC
  double wall_time_s = 0.0;
  bool verdict = false;
  std::vector<ManifestFile> files;
};

std::string utc_timestamp();

// serialize / parse (strict)
Json manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const Json& j);

// atomic write to dir/manifest.json; read throws if absent or malformed
void write_manifest(const std::filesystem::path& dir, const RunManifest& m);
RunManifest read_manifest(const std::filesystem::path& dir);

}  // namespace fm
