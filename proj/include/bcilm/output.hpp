#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bcilm/analysis.hpp"
#include "bcilm/posterior.hpp"

namespace bcilm {

/// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a_hex(std::string_view data);
std::string file_hash(const std::filesystem::path& path);

/// `iteration,<params>,logpost`, iterations numbered from 1.
std::string chain_csv(const PosteriorSample& sample);
/// Reads a chain written by chain_csv. `fixed` supplies every parameter not in
/// the file.
PosteriorSample read_chain(const std::filesystem::path& path, std::size_t burn_in, const ModelParams& fixed);

std::string geweke_csv(const PosteriorSample& sample);
std::string band_csv(const CurveBand& band);
/// Band, median and (optionally) the observed curve as a standalone SVG.
std::string band_svg(const CurveBand& band, const std::vector<int>& observed_t,
                     const std::vector<int>& observed_counts, const std::string& title);

/// Run metadata written as manifest.json. Deliberately free of timestamps so
/// identical runs produce identical manifests.
struct Manifest {
  std::string command;
  std::string version;
  std::string config_hash;
  std::map<std::string, std::uint64_t> seeds;
  std::map<std::string, std::string> inputs;   ///< name -> file hash
  std::map<std::string, std::string> outputs;  ///< file name -> file hash
  std::map<std::string, std::string> info;

  std::string to_json() const;
  static Manifest from_json(const std::string& text);
  static std::optional<Manifest> load(const std::filesystem::path& dir);
};

const char* version_string();

}  // namespace bcilm
