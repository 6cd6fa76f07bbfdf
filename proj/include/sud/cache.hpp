#pragma once

// On-disk partition tables: one JSON-lines file per (d, level) plus a manifest
// with SHA-256 checksums. Files whose checksum does not match are rebuilt.

#include "sud/core.hpp"
#include "sud/rep_combinatorics.hpp"
#include "sud/version.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace sud {

inline std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 computation failed");
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return out.str();
}

struct CacheEntry {
  int d = 0;
  int level = 0;
  std::string path;  // relative to the cache directory
  std::string sha256;
};

struct CacheManifest {
  std::string version;
  std::vector<CacheEntry> entries;
  // Statistics of the last cache_tables call; not persisted.
  int reused = 0;
  int rebuilt = 0;
  std::vector<std::string> warnings;
};

namespace detail {

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& data) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << data;
}

inline std::string level_file_name(int d, int level) {
  return "d" + std::to_string(d) + "_level" + std::to_string(level) + ".jsonl";
}

}  // namespace detail

inline nlohmann::ordered_json manifest_to_json(const CacheManifest& m) {
  nlohmann::ordered_json j;
  j["version"] = m.version;
  j["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : m.entries)
    j["entries"].push_back({{"d", e.d}, {"level", e.level}, {"path", e.path}, {"sha256", e.sha256}});
  return j;
}

/// Reads dir/manifest.json; a missing or unreadable manifest yields an empty one.
inline CacheManifest read_manifest(const std::filesystem::path& dir, std::vector<std::string>* warnings = nullptr) {
  CacheManifest m;
  const auto path = dir / "manifest.json";
  if (!std::filesystem::exists(path)) return m;
  try {
    const auto j = nlohmann::json::parse(detail::read_file(path));
    m.version = j.at("version").get<std::string>();
    for (const auto& e : j.at("entries"))
      m.entries.push_back({e.at("d").get<int>(), e.at("level").get<int>(), e.at("path").get<std::string>(),
                           e.at("sha256").get<std::string>()});
  } catch (const std::exception& ex) {
    if (warnings) warnings->push_back(std::string("unreadable manifest, rebuilding: ") + ex.what());
    m = CacheManifest{};
  }
  return m;
}

/// Ensures tables for levels 0..n_max of SU(d) exist in `dir` and match their
/// recorded checksums. Valid files are reused untouched.
inline CacheManifest cache_tables(int d, int n_max, const std::filesystem::path& dir) {
  if (d < 2) throw InvalidArgument("d must be at least 2");
  if (n_max < 0) throw InvalidArgument("N_max must be nonnegative");
  std::filesystem::create_directories(dir);

  std::vector<std::string> warnings;
  CacheManifest old = read_manifest(dir, &warnings);
  if (!old.version.empty() && old.version != kVersion) {
    warnings.push_back("cache written by version " + old.version + ", rebuilding");
    old.entries.clear();
  }

  CacheManifest out;
  out.version = kVersion;
  out.warnings = std::move(warnings);
  for (const auto& e : old.entries)
    if (e.d != d || e.level > n_max) out.entries.push_back(e);

  for (int level = 0; level <= n_max; ++level) {
    const std::string name = detail::level_file_name(d, level);
    const CacheEntry* prior = nullptr;
    for (const auto& e : old.entries)
      if (e.d == d && e.level == level) prior = &e;
    const auto file = dir / name;
    if (prior && std::filesystem::exists(file)) {
      if (sha256_hex(detail::read_file(file)) == prior->sha256) {
        out.entries.push_back(*prior);
        ++out.reused;
        continue;
      }
      out.warnings.push_back("checksum mismatch for " + name + ", rebuilding");
    } else if (prior) {
      out.warnings.push_back("missing cache file " + name + ", rebuilding");
    }
    const std::string table = level_table_jsonl(d, level);
    detail::write_file(file, table);
    out.entries.push_back({d, level, name, sha256_hex(table)});
    ++out.rebuilt;
  }
  detail::write_file(dir / "manifest.json", manifest_to_json(out).dump(2) + "\n");
  return out;
}

}  // namespace sud
