#include <gtest/gtest.h>

#include <cstdlib>

#include "provio/config.hpp"
#include "provio/errors.hpp"
#include "test_support.hpp"

using namespace provio;

TEST(Config, EmptyTextEnablesEverything) {
  auto cfg = parse_tracking_config("");
  EXPECT_EQ(cfg, TrackingConfig::all_enabled());
  EXPECT_FALSE(cfg.track_duration);
  EXPECT_FALSE(cfg.flush.periodic);
}

TEST(Config, ParsesSectionsAndRoundTrips) {
  auto cfg = parse_tracking_config(
      "[classes]\n"
      "dataset = false\n"
      "read=false\n"
      "; comment\n"
      "[tracking]\n"
      "durations=true\n"
      "flush=periodic:250\n"
      "output=/tmp/somewhere\n");
  EXPECT_FALSE(cfg.is_enabled(SubClass::Dataset));
  EXPECT_FALSE(cfg.is_enabled(SubClass::Read));
  EXPECT_TRUE(cfg.is_enabled(SubClass::Write));
  EXPECT_TRUE(cfg.track_duration);
  EXPECT_EQ(cfg.flush, FlushPolicy::every(std::chrono::milliseconds(250)));
  EXPECT_EQ(cfg.output_dir, "/tmp/somewhere");
  EXPECT_EQ(parse_tracking_config(cfg.to_ini()), cfg);
}

TEST(Config, RejectsBadEntriesWithLine) {
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse_tracking_config(text);
    } catch (const SyntaxError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("[classes]\nfile=true\nwidget=false\n"), 3u);
  EXPECT_EQ(line_of("[classes]\nfile=maybe\n"), 2u);
  EXPECT_EQ(line_of("[tracking]\n\nflush=periodic:0\n"), 3u);
  EXPECT_EQ(line_of("[tracking]\nflush=sometimes\n"), 2u);
  EXPECT_GT(line_of("[colours]\nred=true\n"), 0u);
  EXPECT_GT(line_of("[classes\n"), 0u);
}

TEST(Config, ValidateRules) {
  auto cfg = TrackingConfig::all_enabled();
  EXPECT_NO_THROW(cfg.validate());
  cfg.set(SubClass::Program, false);
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.set_all(SuperClass::Activity, false);
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_NO_THROW(TrackingConfig::all_disabled().validate());
  auto periodic = TrackingConfig::all_enabled();
  periodic.flush = FlushPolicy::every(std::chrono::milliseconds(0));
  EXPECT_THROW(periodic.validate(), std::invalid_argument);
}

TEST(Config, FileAndEnvironment) {
  provio::testing::TempDir dir("cfg");
  auto path = dir / "c.ini";
  provio::testing::write_file(path, "[classes]\nthread=false\n");
  EXPECT_FALSE(load_tracking_config(path).is_enabled(SubClass::Thread));

  provio::testing::write_file(dir / "bad.ini", "[classes]\nthread=nope\n");
  try {
    load_tracking_config(dir / "bad.ini");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_NE(std::string(e.what()).find("bad.ini"), std::string::npos);
  }
  EXPECT_THROW(load_tracking_config(dir / "missing.ini"), std::runtime_error);

  ::setenv(kConfigEnvVar, path.c_str(), 1);
  auto env = config_from_environment();
  ::unsetenv(kConfigEnvVar);
  ASSERT_TRUE(env.has_value());
  EXPECT_FALSE(env->is_enabled(SubClass::Thread));
  EXPECT_FALSE(config_from_environment().has_value());
}
