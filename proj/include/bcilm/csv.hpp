#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bcilm::csv {

struct Table {
  std::string source;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  /// 1-based file line of each row.
  std::vector<std::size_t> lines;

  /// Column index by name, or nullopt.
  std::optional<std::size_t> find(std::string_view column) const;
  /// Column index by name; throws ParseError naming the file when absent.
  std::size_t require(std::string_view column) const;
  std::string where(std::size_t row) const;
};

/// Reads a comma-separated file with a header row. Blank lines are skipped,
/// fields are whitespace-trimmed and every row must have as many fields as
/// the header.
Table read(const std::filesystem::path& path);

double to_double(const Table& t, std::size_t row, std::size_t col);
long long to_int(const Table& t, std::size_t row, std::size_t col);
/// Empty cell -> nullopt.
std::optional<long long> to_optional_int(const Table& t, std::size_t row, std::size_t col);

/// Shortest representation that round-trips through to_double.
std::string format(double v);

/// Writes `content` to `path`, throwing IoError on failure.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace bcilm::csv
