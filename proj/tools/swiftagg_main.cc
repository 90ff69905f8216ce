#include <iostream>

#include "swiftagg/command_line.h"

int main(int argc, char** argv) {
  swiftagg::CommandLine cli;
  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.app().exit(e);
    return code == 0 ? 0 : swiftagg::kExitConfigError;
  }

  const swiftagg::RunConfig& config = cli.config();
  try {
    switch (cli.command()) {
      case swiftagg::Command::kRun: {
        const auto params = swiftagg::validate_config(config);
        if (params.below_analysed_range()) {
          std::cerr << "note: T=1 is below the T>=2 range the protocol is "
                       "analysed for; results are still checked\n";
        }
        return swiftagg::run_experiments(config, std::cout);
      }
      case swiftagg::Command::kPrivacy:
        return swiftagg::run_privacy_suite(config, cli.explicit_instance(),
                                           std::cout);
      case swiftagg::Command::kTable1:
        return swiftagg::run_table1(config, std::cout);
    }
  } catch (const swiftagg::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == swiftagg::ErrorCode::kConfigError
               ? swiftagg::kExitConfigError
               : swiftagg::kExitCheckFailed;
  }
  return swiftagg::kExitOk;
}
