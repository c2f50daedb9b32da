#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace fewjumps::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitCheckFailed = 4;

/// Flag-level overrides; config file fields fill the rest.
struct CliInvocation {
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  bool json_summary = false;
};

/// Dispatches a validated config document to the corresponding module
/// operations; writes CSV artifacts under out_dir and a summary to `out`.
int run_config(nlohmann::json config, const CliInvocation& inv,
               std::ostream& out);

/// Loads the config from a JSON file first.
int run_config_file(const std::string& path, const CliInvocation& inv,
                    std::ostream& out);

}  // namespace fewjumps::cli
