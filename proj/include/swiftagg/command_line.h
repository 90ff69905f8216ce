#pragma once

#include <string>

#include "CLI11.hpp"
#include "swiftagg/experiments.h"

namespace swiftagg {

enum class Command { kRun, kPrivacy, kTable1 };

// Flags (and the flat key=value file named by --config, which flags
// override) parsed into a RunConfig. Parse errors are CLI11 exceptions; pass
// them to app().exit().
class CommandLine {
 public:
  CommandLine();

  void parse(int argc, const char* const* argv);

  CLI::App& app() { return app_; }
  const RunConfig& config() const { return config_; }
  Command command() const { return command_; }
  // True when --n was given explicitly.
  bool explicit_instance() const;

 private:
  CLI::App app_;
  CLI::App* privacy_ = nullptr;
  CLI::App* table1_ = nullptr;
  CLI::Option* n_option_ = nullptr;
  RunConfig config_;
  std::string format_ = "json";
  std::string timing_ = "before_sharing";
  Command command_ = Command::kRun;
};

}  // namespace swiftagg
