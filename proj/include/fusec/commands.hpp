#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace fusec {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 1,  // parse, type or usage errors
  kExitRuntime = 2,     // fuel exhausted
  kExitVerify = 3,      // verification failure
};

struct CommandResult {
  nlohmann::ordered_json report;
  int exit_code = kExitOk;
  std::string output;  // text for stdout
};

std::string fnv1a_hex(const std::string& data);

CommandResult cmd_check(const std::string& path);

CommandResult cmd_run(const std::string& path, const std::string& main, const std::optional<std::string>& input,
                      std::optional<std::uint64_t> fuel);

struct FuseCommand {
  std::string path;
  std::optional<std::string> out;
  std::optional<std::string> report;
  bool abstract = false;
};

CommandResult cmd_fuse(const FuseCommand& args);

CommandResult cmd_bench(const std::string& path, const std::string& orig, const std::string& fused,
                        const std::vector<std::size_t>& sizes, std::optional<std::uint64_t> fuel);

// `bad_const` names the built-in demo family when the file has no such term.
CommandResult cmd_paracheck(const std::optional<std::string>& path, const std::string& term,
                            std::size_t max_carrier);

CommandResult cmd_nest(const std::string& a, const std::string& b);

}  // namespace fusec
