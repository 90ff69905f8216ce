#include "swiftagg/command_line.h"

namespace swiftagg {

CommandLine::CommandLine()
    : app_("Secure aggregation simulator: grouped Shamir sharing with "
           "sequence aggregation, load accounting and privacy checks",
           "swiftagg") {
  app_.set_config("--config", "", "Flat key=value file; flags override it");
  app_.fallthrough();

  n_option_ = app_.add_option("--n", config_.n, "Number of users N");
  app_.add_option("--t", config_.t, "Collusion bound T");
  app_.add_option("--d", config_.d, "Dropout bound D");
  app_.add_option("--model-len", config_.model_len, "Model length L");
  app_.add_option("--field", config_.field_modulus, "Prime modulus p");
  app_.add_option("--seed", config_.seed, "Run seed");
  app_.add_option("--drop", config_.drop, "Dropped user ids")
      ->delimiter(',');
  app_.add_option("--drop-rate", config_.drop_rate,
                  "Drop round(rate*N) users (capped at D), sampled per rep");
  app_.add_option("--drop-timing", timing_,
                  "before_sharing | after_sharing | mid_sequence")
      ->check(CLI::IsMember({"before_sharing", "after_sharing",
                             "mid_sequence", "before", "after", "mid"}));
  app_.add_option("--adversary", config_.adversary, "Colluding user ids")
      ->delimiter(',');
  app_.add_flag("--server-curious", config_.server_curious,
                "Server joins the colluders");
  app_.add_option("--reps", config_.reps, "Repetitions");
  app_.add_option("--format", format_, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app_.add_flag("--shuffle-groups", config_.shuffle_groups,
                "Seeded random group assignment");
  app_.add_flag("--timing", config_.timing, "Add elapsed_ms to each record");
  app_.add_flag("--no-noise", config_.no_noise,
                "Privacy negative control: all masks zero");

  privacy_ = app_.add_subcommand(
      "privacy", "Exhaustive privacy checks on tiny instances");
  table1_ = app_.add_subcommand(
      "table1", "Communication-load comparison with measured loads");
  app_.require_subcommand(0, 1);
}

void CommandLine::parse(int argc, const char* const* argv) {
  app_.parse(argc, argv);
  config_.format = format_ == "csv" ? OutputFormat::kCsv : OutputFormat::kJson;
  config_.drop_timing = *parse_timing(timing_);
  if (privacy_->parsed()) {
    command_ = Command::kPrivacy;
  } else if (table1_->parsed()) {
    command_ = Command::kTable1;
  } else {
    command_ = Command::kRun;
  }
}

bool CommandLine::explicit_instance() const { return n_option_->count() > 0; }

}  // namespace swiftagg
