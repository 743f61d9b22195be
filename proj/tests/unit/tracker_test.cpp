#include <gtest/gtest.h>

#include <chrono>
#include <thread>

#include "provio/tracker.hpp"
#include "provio/turtle.hpp"
#include "test_support.hpp"

using namespace provio;
using provio::testing::TempDir;

namespace {

TrackingConfig config_in(const TempDir& dir) {
  auto cfg = TrackingConfig::all_enabled();
  cfg.output_dir = dir.path();
  return cfg;
}

AgentContext bob(std::uint32_t rank = 0) { return {"Bob", "vpicio_un_h5.exe", rank, ""}; }

std::size_t count_class(const ProvGraph& g, SubClass s) {
  return g.scan(std::nullopt, Predicate::SubClassOf,
                Literal::string(std::string(sub_class_name(s))))
      .size();
}

}  // namespace

TEST(Tracker, SeedsAgentChain) {
  TempDir dir("trk");
  auto s = Session::begin(bob(), config_in(dir));
  auto g = s->snapshot();
  EXPECT_EQ(g.node_count(), 3u);
  EXPECT_EQ(g.scan(std::nullopt, Predicate::ActedOnBehalfOf).size(), 2u);
  AgentContext ctx = bob();
  Guid user = mint_guid(SubClass::User, "Bob", ctx);
  Guid thread = mint_guid(SubClass::Thread, "MPI_rank_0", ctx);
  EXPECT_TRUE(g.contains({s->program_guid(), Predicate::ActedOnBehalfOf, thread}));
  EXPECT_TRUE(g.contains({thread, Predicate::ActedOnBehalfOf, user}));
}

TEST(Tracker, AgentChainFallbacks) {
  TempDir dir("trk");
  auto cfg = config_in(dir);
  cfg.set(SubClass::Thread, false);
  auto ctx = bob();
  {
    auto s = Session::begin(ctx, cfg);
    Guid rank = mint_guid(SubClass::Rank, "rank_0", ctx);
    EXPECT_TRUE(s->snapshot().contains({s->program_guid(), Predicate::ActedOnBehalfOf, rank}));
  }
  cfg.set(SubClass::Rank, false);
  {
    auto s = Session::begin(ctx, cfg);
    Guid user = mint_guid(SubClass::User, "Bob", ctx);
    EXPECT_TRUE(s->snapshot().contains({s->program_guid(), Predicate::ActedOnBehalfOf, user}));
  }
  auto none = config_in(dir);
  none.set_all(SuperClass::Agent, false);
  none.set_all(SuperClass::Activity, false);
  auto s = Session::begin(ctx, none);
  EXPECT_TRUE(s->snapshot().empty());
}

TEST(Tracker, RejectsBadSetup) {
  TempDir dir("trk");
  auto cfg = config_in(dir);
  EXPECT_THROW(Session::begin({"", "p", 0, ""}, cfg), std::invalid_argument);
  EXPECT_THROW(Session::begin({"u", "", 0, ""}, cfg), std::invalid_argument);
  cfg.set(SubClass::Program, false);
  EXPECT_THROW(Session::begin(bob(), cfg), std::invalid_argument);
  provio::testing::write_file(dir / "plain", "x");
  auto blocked = config_in(dir);
  blocked.output_dir = dir / "plain" / "sub";
  EXPECT_THROW(Session::begin(bob(), blocked), std::runtime_error);
}

TEST(Tracker, RecordIoTriples) {
  TempDir dir("trk");
  auto s = Session::begin(bob(), config_in(dir));
  auto act = s->record_io({"H5Dcreate2", SubClass::Create, SubClass::Dataset, "/Timestep_0/x", {}});
  ASSERT_TRUE(act);
  EXPECT_EQ(act->value, "H5Dcreate2--b0.1");
  auto g = s->snapshot();
  Guid x("/Timestep_0/x");
  EXPECT_TRUE(g.contains({x, Predicate::WasCreatedBy, *act}));
  EXPECT_TRUE(g.contains({x, Predicate::WasAttributedTo, s->program_guid()}));
  EXPECT_TRUE(g.contains({*act, Predicate::WasAssociatedWith, s->program_guid()}));
  EXPECT_TRUE(g.scan(*act, Predicate::Elapsed).empty());
}

TEST(Tracker, DisabledClassesAreSkipped) {
  TempDir dir("trk");
  auto cfg = config_in(dir);
  cfg.set(SubClass::Read, false);
  cfg.set(SubClass::Attribute, false);
  auto s = Session::begin(bob(), cfg);
  auto before = s->snapshot().triple_count();
  EXPECT_FALSE(s->record_io({"posix_read", SubClass::Read, SubClass::File, "a", {}}));
  EXPECT_EQ(s->snapshot().triple_count(), before);
  auto act = s->record_io({"H5Awrite", SubClass::Write, SubClass::Attribute, "/g/a", {}});
  ASSERT_TRUE(act);
  auto g = s->snapshot();
  EXPECT_EQ(g.find_node(Guid("/g/a")), nullptr);
  EXPECT_EQ(count_class(g, SubClass::Attribute), 0u);
  EXPECT_EQ(s->diagnostics(), 0u);
}

TEST(Tracker, DurationsSumToInjectedDeltas) {
  TempDir dir("trk");
  auto cfg = config_in(dir);
  cfg.track_duration = true;
  auto s = Session::begin(bob(), cfg);
  std::mt19937_64 rng(1);
  std::int64_t expected = 0;
  for (int i = 0; i < 100; ++i) {
    std::int64_t d = static_cast<std::int64_t>(rng() % 5000);
    expected += d;
    s->record_io({"posix_write", SubClass::Write, SubClass::File, "out.dat", d});
  }
  std::int64_t total = 0;
  auto elapsed = s->snapshot().scan(std::nullopt, Predicate::Elapsed);
  EXPECT_EQ(elapsed.size(), 100u);
  for (const auto& t : elapsed) total += std::get<std::int64_t>(std::get<Literal>(t.object).value);
  EXPECT_EQ(total, expected);
}

TEST(Tracker, BadEventsOnlyCountDiagnostics) {
  TempDir dir("trk");
  auto s = Session::begin(bob(), config_in(dir));
  EXPECT_FALSE(s->record_io({"x", SubClass::File, SubClass::File, "a", {}}));
  EXPECT_FALSE(s->record_io({"x", SubClass::Read, SubClass::Read, "a", {}}));
  // The same path already registered as a File cannot become a Dataset.
  EXPECT_TRUE(s->record_io({"posix_open", SubClass::Open, SubClass::File, "a", {}}));
  EXPECT_FALSE(s->record_io({"H5Dopen", SubClass::Open, SubClass::Dataset, "a", {}}));
  EXPECT_EQ(s->diagnostics(), 3u);
}

TEST(Tracker, ExtensibleRecords) {
  TempDir dir("trk");
  auto cfg = config_in(dir);
  cfg.set(SubClass::Type, false);
  auto s = Session::begin(bob(), cfg);
  Guid cfg_node = s->record_extensible(SubClass::Configuration, "Batch_Size_B",
                                       {{Predicate::HasValue, Literal::integer(256)}});
  EXPECT_EQ(cfg_node.value, "Batch_Size_B");
  Guid ckpt = s->record_extensible(SubClass::Checkpoint, "Checkpoint_3", {});
  EXPECT_TRUE(s->record_link(cfg_node, Predicate::Influenced, ckpt));
  EXPECT_TRUE(Session::is_untracked(s->record_extensible(SubClass::Type, "GNN", {})));
  EXPECT_FALSE(s->record_link(cfg_node, Predicate::Influenced, Guid("missing")));
  Guid m = s->record_extensible(SubClass::Metrics, "loss", {{Predicate::HasValue, Literal::decimal(2.5)}},
                                {{Predicate::Influenced, ckpt}, {Predicate::Influenced, Guid()}});
  auto g = s->snapshot();
  EXPECT_TRUE(g.contains({cfg_node, Predicate::Influenced, ckpt}));
  EXPECT_TRUE(g.contains({m, Predicate::Influenced, ckpt}));
  EXPECT_TRUE(g.contains({cfg_node, Predicate::HasValue, Literal::integer(256)}));

  EXPECT_THROW(s->record_extensible(SubClass::File, "x", {}), std::invalid_argument);
  EXPECT_THROW(s->record_extensible(SubClass::Metrics, "x", {{Predicate::Elapsed, Literal::integer(1)}}),
               std::invalid_argument);
  EXPECT_THROW(s->record_extensible(SubClass::Metrics, "x", {{Predicate::Influenced, Literal::integer(1)}}),
               std::invalid_argument);
  EXPECT_THROW(s->record_extensible(SubClass::Metrics, "x", {}, {{Predicate::HasValue, ckpt}}),
               std::invalid_argument);
}

TEST(Tracker, SessionsShareProgramAcrossRanks) {
  TempDir dir("trk");
  auto a = Session::begin(bob(0), config_in(dir));
  auto b = Session::begin(bob(1), config_in(dir));
  a->record_io({"posix_write", SubClass::Write, SubClass::File, "shared.dat", {}});
  b->record_io({"posix_write", SubClass::Write, SubClass::File, "shared.dat", {}});
  auto fa = a->end();
  auto fb = b->end();
  EXPECT_NE(fa, fb);
  EXPECT_EQ(fa.filename(), "prov_vpicio_un_h5.exe_0.ttl");
  EXPECT_EQ(a->program_guid(), b->program_guid());
  ProvGraph m = merge_directory(dir.path());
  EXPECT_EQ(count_class(m, SubClass::Program), 1u);
  EXPECT_EQ(count_class(m, SubClass::User), 1u);
  EXPECT_EQ(count_class(m, SubClass::Thread), 2u);
  EXPECT_EQ(count_class(m, SubClass::Write), 2u);
  EXPECT_EQ(count_class(m, SubClass::File), 1u);
}

TEST(Tracker, EndSemantics) {
  TempDir dir("trk");
  auto s = Session::begin(bob(), config_in(dir));
  s->record_io({"posix_write", SubClass::Write, SubClass::File, "f", {}});
  auto path = s->end();
  EXPECT_TRUE(std::filesystem::exists(path));
  EXPECT_TRUE(read_turtle_file(path) == s->snapshot());
  EXPECT_THROW(s->end(), std::logic_error);
  EXPECT_FALSE(s->record_io({"posix_write", SubClass::Write, SubClass::File, "f", {}}));
  EXPECT_EQ(s->diagnostics(), 1u);
}

TEST(Tracker, DestructorFlushes) {
  TempDir dir("trk");
  std::filesystem::path path;
  {
    auto s = Session::begin(bob(), config_in(dir));
    path = s->output_file();
  }
  EXPECT_TRUE(std::filesystem::exists(path));
}

TEST(Tracker, PeriodicFlushFollowsInjectedClock) {
  TempDir dir("trk");
  auto cfg = config_in(dir);
  cfg.flush = FlushPolicy::every(std::chrono::milliseconds(10));
  auto clock = std::make_shared<ManualClock>();
  auto s = Session::begin(bob(), cfg, clock);
  std::this_thread::sleep_for(std::chrono::milliseconds(20));
  EXPECT_EQ(s->flush_count(), 0u);
  s->record_io({"posix_write", SubClass::Write, SubClass::File, "f", {}});
  clock->advance(10'000);
  for (int i = 0; i < 500 && s->flush_count() == 0; ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  EXPECT_EQ(s->flush_count(), 1u);
  EXPECT_TRUE(read_turtle_file(s->output_file()).find_node(Guid("f")));
  s->end();
  EXPECT_EQ(s->flush_count(), 2u);
}

TEST(Tracker, ConcurrentRecording) {
  TempDir dir("trk");
  auto s = Session::begin(bob(), config_in(dir));
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] {
      for (int i = 0; i < 200; ++i) {
        std::string target = (i % 2) ? "shared.h5" : "own_" + std::to_string(t);
        s->record_io({"posix_write", SubClass::Write, SubClass::File, target, {}});
        if (i % 50 == 0) s->flush();
      }
    });
  }
  for (auto& th : threads) th.join();
  auto g = s->snapshot();
  EXPECT_EQ(s->activity_count(), 1600u);
  EXPECT_EQ(count_class(g, SubClass::Write), 1600u);
  EXPECT_EQ(g.scan(Guid("shared.h5"), Predicate::WasWrittenBy).size(), 800u);
  EXPECT_EQ(s->diagnostics(), 0u);
  g.validate();
}

TEST(Tracker, OpenObjectRegistry) {
  TempDir dir("trk");
  auto s = Session::begin(bob(), config_in(dir));
  s->object_opened(SubClass::File, "a");
  s->object_opened(SubClass::File, "a");
  s->object_opened(SubClass::Dataset, "/d");
  EXPECT_EQ(s->open_object_count(), 2u);
  s->object_closed(SubClass::File, "a");
  EXPECT_EQ(s->open_object_count(), 2u);
  s->object_closed(SubClass::File, "a");
  s->object_closed(SubClass::Dataset, "/d");
  EXPECT_EQ(s->open_object_count(), 0u);
}
