#include "swiftagg/experiments.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "swiftagg/command_line.h"

namespace swiftagg {
namespace {

std::string config_error_of(const RunConfig& config) {
  try {
    validate_config(config);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfigError);
    return e.what();
  }
  ADD_FAILURE() << "config accepted";
  return {};
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

std::vector<nlohmann::ordered_json> json_lines(const std::string& text) {
  std::vector<nlohmann::ordered_json> out;
  for (const auto& line : lines_of(text)) {
    out.push_back(nlohmann::ordered_json::parse(line));
  }
  return out;
}

std::string run(const RunConfig& config, int* status = nullptr) {
  std::ostringstream out;
  const int rc = run_experiments(config, out);
  if (status != nullptr) *status = rc;
  return out.str();
}

TEST(ValidateConfigTest, FieldPaths) {
  auto expect_path = [](RunConfig config, const std::string& prefix) {
    const std::string message = config_error_of(config);
    EXPECT_EQ(message.rfind("ConfigError: " + prefix + ":", 0), 0u) << message;
  };
  RunConfig c;
  c.n = 5, c.t = 1, c.d = 1;
  expect_path(c, "n");
  c = {};
  c.t = 0;
  expect_path(c, "t");
  c = {};
  c.d = 20;
  expect_path(c, "d");
  c = {};
  c.field_modulus = 15;
  expect_path(c, "field");
  c = {};
  c.model_len = 0;
  expect_path(c, "model_len");
  c = {};
  c.drop = {3, 4};
  expect_path(c, "drop");
  c = {};
  c.d = 2, c.n = 16, c.t = 1;
  c.drop = {3, 17};
  expect_path(c, "drop[1]");
  c.drop = {3, 3};
  expect_path(c, "drop[1]");
  c = {};
  c.drop_rate = 1.5;
  expect_path(c, "drop_rate");
  c = {};
  c.adversary = {0};
  expect_path(c, "adversary[0]");
  c = {};
  c.adversary = {1, 2, 3};
  expect_path(c, "adversary");
  c = {};
  c.reps = 0;
  expect_path(c, "reps");
}

TEST(RunExperimentsTest, MotivatingExampleRecord) {
  RunConfig c;
  c.drop = {7};
  int status = -1;
  const auto records = json_lines(run(c, &status));
  EXPECT_EQ(status, kExitOk);
  ASSERT_EQ(records.size(), 1u);
  const auto& r = records[0];
  EXPECT_EQ(r.at("rep"), 0);
  EXPECT_EQ(r.at("dropouts"), "7");
  EXPECT_EQ(r.at("recovered_ok"), true);
  EXPECT_EQ(r.at("user_to_user_msgs"), 40);
  EXPECT_EQ(r.at("server_msgs"), 3);
  EXPECT_EQ(r.at("r_uplink_required"), 3);
  EXPECT_EQ(r.at("r_uplink_actual"), 3);
  EXPECT_FALSE(r.contains("elapsed_ms"));
}

TEST(RunExperimentsTest, SingleGroupLoad) {
  RunConfig c;
  c.n = 4, c.t = 1, c.d = 0;
  const auto r = json_lines(run(c))[0];
  EXPECT_EQ(r.at("r_user"), 6);
  EXPECT_EQ(r.at("r_uplink_actual"), 2);
}

TEST(RunExperimentsTest, ByteIdenticalForSameSeed) {
  RunConfig c;
  c.reps = 5;
  c.drop_rate = 0.1;
  c.drop_timing = DropoutTiming::kMidSequence;
  c.shuffle_groups = true;
  c.model_len = 3;
  EXPECT_EQ(run(c), run(c));
  RunConfig other = c;
  other.seed = 2;
  EXPECT_NE(run(c), run(other));
}

TEST(RunExperimentsTest, TimingFieldIsOptIn) {
  RunConfig c;
  c.timing = true;
  const auto r = json_lines(run(c))[0];
  EXPECT_TRUE(r.contains("elapsed_ms"));
  EXPECT_GE(r.at("elapsed_ms").get<double>(), 0.0);
}

TEST(RunExperimentsTest, CsvMatchesJsonFieldForField) {
  RunConfig c;
  c.reps = 4;
  c.n = 15, c.t = 2, c.d = 2;
  c.drop_rate = 0.2;
  const auto json = json_lines(run(c));
  c.format = OutputFormat::kCsv;
  const auto csv = lines_of(run(c));
  ASSERT_EQ(csv.size(), json.size() + 1);
  std::vector<std::string> header;
  {
    std::istringstream h(csv[0]);
    for (std::string cell; std::getline(h, cell, ',');) header.push_back(cell);
  }
  for (std::size_t i = 0; i < json.size(); ++i) {
    std::istringstream row(csv[i + 1]);
    std::size_t col = 0;
    for (const auto& [key, value] : json[i].items()) {
      std::string cell;
      ASSERT_TRUE(static_cast<bool>(std::getline(row, cell, ',')));
      EXPECT_EQ(header[col++], key);
      const std::string expected = value.is_string() ? value.get<std::string>() : value.dump();
      EXPECT_EQ(cell, expected) << key;
    }
  }
}

TEST(RunExperimentsTest, DropRateIsCappedAtD) {
  RunConfig c;
  c.n = 15, c.t = 2, c.d = 2;
  c.drop_rate = 1.0;
  c.reps = 6;
  for (const auto& r : json_lines(run(c))) {
    const std::string dropouts = r.at("dropouts");
    EXPECT_EQ(std::count(dropouts.begin(), dropouts.end(), ';'), 1) << dropouts;
    EXPECT_EQ(r.at("recovered_ok"), true);
  }
  c.drop_rate = 0.0;
  for (const auto& r : json_lines(run(c))) EXPECT_EQ(r.at("dropouts"), "");
}

TEST(RunExperimentsTest, EveryTimingRecovers) {
  for (auto timing : {DropoutTiming::kBeforeSharing, DropoutTiming::kAfterSharing,
                      DropoutTiming::kMidSequence}) {
    RunConfig c;
    c.n = 24, c.t = 3, c.d = 2;
    c.drop = {5, 18};
    c.drop_timing = timing;
    c.reps = 3;
    int status = -1;
    for (const auto& r : json_lines(run(c, &status))) EXPECT_EQ(r.at("recovered_ok"), true);
    EXPECT_EQ(status, kExitOk);
  }
}

TEST(PrivacySuiteTest, DefaultSuitePassesAndNegativeControlFails) {
  RunConfig c;
  std::ostringstream out;
  EXPECT_EQ(run_privacy_suite(c, false, out), kExitOk);
  for (const auto& line : json_lines(out.str())) {
    EXPECT_EQ(line.at("verdict"), "independent") << line.dump();
  }
  c.no_noise = true;
  std::ostringstream leak;
  EXPECT_EQ(run_privacy_suite(c, false, leak), kExitCheckFailed);
}

TEST(PrivacySuiteTest, SingleInstanceFromConfig) {
  RunConfig c;
  c.n = 3, c.t = 1, c.d = 1, c.field_modulus = 5;
  c.drop = {2};
  c.server_curious = true;
  std::ostringstream out;
  EXPECT_EQ(run_privacy_suite(c, true, out), kExitOk);
  EXPECT_EQ(json_lines(out.str()).size(), 1u);

  c.field_modulus = 2147483647;
  std::ostringstream big;
  try {
    run_privacy_suite(c, true, big);
    ADD_FAILURE() << "oversized instance accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfigError);
  }
}

TEST(Table1Test, MeasuredMatches) {
  RunConfig c;
  c.model_len = 10;
  std::ostringstream out;
  EXPECT_EQ(run_table1(c, out), kExitOk);
  const auto j = nlohmann::ordered_json::parse(out.str());
  EXPECT_EQ(j.at("swiftagg_server_elements"), 30);
  EXPECT_EQ(j.at("swiftagg_per_user_elements"), 40);
  EXPECT_EQ(j.at("measured_matches_analytic"), true);
}

std::unique_ptr<CommandLine> parsed(std::vector<const char*> args) {
  args.insert(args.begin(), "swiftagg");
  auto cli = std::make_unique<CommandLine>();
  cli->parse(static_cast<int>(args.size()), args.data());
  return cli;
}

TEST(CommandLineTest, FlagsAndDefaults) {
  const auto defaults = parsed({});
  EXPECT_EQ(defaults->command(), Command::kRun);
  EXPECT_FALSE(defaults->explicit_instance());
  EXPECT_EQ(defaults->config().n, 12u);

  const auto cli = parsed({"--n", "15", "--t", "2", "--d", "2", "--drop", "3,9",
                                  "--drop-timing", "mid", "--adversary", "1",
                                  "--server-curious", "--format", "csv"});
  EXPECT_TRUE(cli->explicit_instance());
  EXPECT_EQ(cli->config().drop, (std::vector<UserId>{3, 9}));
  EXPECT_EQ(cli->config().drop_timing, DropoutTiming::kMidSequence);
  EXPECT_TRUE(cli->config().server_curious);
  EXPECT_EQ(cli->config().format, OutputFormat::kCsv);
}

TEST(CommandLineTest, Subcommands) {
  EXPECT_EQ(parsed({"privacy"})->command(), Command::kPrivacy);
  EXPECT_EQ(parsed({"table1", "--model-len", "10"})->command(), Command::kTable1);
  EXPECT_EQ(parsed({"table1", "--model-len", "10"})->config().model_len, 10u);
}

TEST(CommandLineTest, ConfigFileWithFlagOverride) {
  const auto path = std::filesystem::temp_directory_path() / "swiftagg_cli_test.conf";
  {
    std::ofstream f(path);
    f << "n=15\nt=2\nd=2\nseed=42\nmodel-len=3\n";
  }
  const std::string p = path.string();
  const auto cli = parsed({"--config", p.c_str(), "--seed", "7"});
  EXPECT_EQ(cli->config().n, 15u);
  EXPECT_EQ(cli->config().model_len, 3u);
  EXPECT_EQ(cli->config().seed, 7u);
  std::filesystem::remove(path);
}

TEST(CommandLineTest, RejectsUnknownTiming) {
  EXPECT_THROW(parsed({"--drop-timing", "never"}), CLI::ParseError);
}

}  // namespace
}  // namespace swiftagg
