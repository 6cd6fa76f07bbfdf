#include "sud/cache.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace sud;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(Sha256, KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(CacheTables, WritesOneFilePerLevelAndManifest) {
  const auto dir = fresh_dir("sud_cache_levels");
  const auto m = cache_tables(2, 100, dir);
  EXPECT_EQ(m.entries.size(), 101u);
  EXPECT_EQ(m.rebuilt, 101);
  EXPECT_EQ(m.reused, 0);
  int files = 0;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".jsonl") ++files;
  EXPECT_EQ(files, 101);
  EXPECT_TRUE(fs::exists(dir / "manifest.json"));
  EXPECT_EQ(slurp(dir / "d2_level3.jsonl"), level_table_jsonl(2, 3));
  const auto j = nlohmann::json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(j.at("version"), kVersion);
  EXPECT_EQ(j.at("entries").at(3).at("path"), "d2_level3.jsonl");
  fs::remove_all(dir);
}

TEST(CacheTables, IntactCacheIsReused) {
  const auto dir = fresh_dir("sud_cache_reuse");
  cache_tables(3, 20, dir);
  const auto before = slurp(dir / "manifest.json");
  const auto m = cache_tables(3, 20, dir);
  EXPECT_EQ(m.rebuilt, 0);
  EXPECT_EQ(m.reused, 21);
  EXPECT_TRUE(m.warnings.empty());
  EXPECT_EQ(slurp(dir / "manifest.json"), before);
  fs::remove_all(dir);
}

TEST(CacheTables, TamperedFileIsRebuiltWithWarning) {
  const auto dir = fresh_dir("sud_cache_tamper");
  cache_tables(2, 10, dir);
  {
    std::ofstream out(dir / "d2_level7.jsonl", std::ios::app);
    out << "garbage\n";
  }
  fs::remove(dir / "d2_level4.jsonl");
  const auto m = cache_tables(2, 10, dir);
  EXPECT_EQ(m.rebuilt, 2);
  EXPECT_EQ(m.reused, 9);
  ASSERT_EQ(m.warnings.size(), 2u);
  EXPECT_NE(m.warnings[1].find("checksum mismatch"), std::string::npos);
  EXPECT_EQ(slurp(dir / "d2_level7.jsonl"), level_table_jsonl(2, 7));
  fs::remove_all(dir);
}

TEST(CacheTables, CorruptManifestTriggersRebuild) {
  const auto dir = fresh_dir("sud_cache_manifest");
  cache_tables(2, 3, dir);
  {
    std::ofstream out(dir / "manifest.json", std::ios::trunc);
    out << "{not json";
  }
  const auto m = cache_tables(2, 3, dir);
  EXPECT_EQ(m.rebuilt, 4);
  EXPECT_FALSE(m.warnings.empty());
  fs::remove_all(dir);
}

TEST(CacheTables, KeepsOtherGroups) {
  const auto dir = fresh_dir("sud_cache_mixed");
  cache_tables(2, 3, dir);
  const auto m = cache_tables(3, 2, dir);
  EXPECT_EQ(m.entries.size(), 7u);
  fs::remove_all(dir);
}
