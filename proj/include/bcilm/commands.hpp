#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace bcilm {

/// Exit codes shared by every command.
enum ExitCode : int { kExitOk = 0, kExitRuntime = 1, kExitConfig = 2, kExitUnsupported = 3 };

/// Command-line overrides applied on top of the config file.
struct CommandOptions {
  std::filesystem::path config;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  std::optional<std::size_t> threads;
  std::optional<std::filesystem::path> population;
  std::optional<std::filesystem::path> events;
  std::optional<std::filesystem::path> chain;
  /// fit: fit only the events up to this time (forecast protocol).
  std::optional<int> truncate_at;
  /// forecast: overrides analysis.t_cut / analysis.horizon.
  std::optional<int> t_cut;
  std::optional<int> horizon;
  std::optional<std::size_t> n_draws;
  /// screen: fit the selected model class afterwards.
  bool then_fit = false;
};

int cmd_simulate(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_fit(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_screen(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_ppd(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_forecast(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_compare(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_study(const CommandOptions& opts, std::ostream& out, std::ostream& err);

/// Dispatches by command name; unknown names return kExitConfig.
int run_command(const std::string& name, const CommandOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace bcilm
