#include <gtest/gtest.h>

#include "provio/posix_io.hpp"
#include "provio/sandbox.hpp"
#include "provio/tracker.hpp"
#include "test_support.hpp"

using namespace provio;
using provio::testing::StepClock;
using provio::testing::TempDir;

namespace {

IoErrc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const IoError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no IoError";
  return IoErrc::System;
}

}  // namespace

TEST(Sandbox, CanonicalPaths) {
  TempDir dir("sbx");
  Sandbox sb(dir / "root");
  EXPECT_TRUE(std::filesystem::is_directory(dir / "root"));
  EXPECT_EQ(sb.canonical("a/b.h5"), "a/b.h5");
  EXPECT_EQ(sb.canonical("/a//./b.h5"), "a/b.h5");
  EXPECT_EQ(sb.canonical("a/x/../b.h5/"), "a/b.h5");
  EXPECT_EQ(code_of([&] { sb.canonical("../etc/passwd"); }), IoErrc::PathEscape);
  EXPECT_EQ(code_of([&] { sb.canonical("a/../../x"); }), IoErrc::PathEscape);
  EXPECT_EQ(code_of([&] { sb.canonical(""); }), IoErrc::NotFound);
}

TEST(Sandbox, SymlinkEscapeRejected) {
  TempDir dir("sbx");
  Sandbox sb(dir / "root");
  std::filesystem::create_directory_symlink(dir.path(), dir / "root" / "up");
  EXPECT_EQ(code_of([&] { sb.resolve("up/x"); }), IoErrc::PathEscape);
}

TEST(PosixIo, UntrackedRoundTrip) {
  TempDir dir("posix");
  Sandbox sb(dir / "data");
  PosixIo io(sb);
  auto h = io.open("a.txt", true, OpenMode::Write);
  EXPECT_EQ(io.write(h, "hello world"), 11u);
  io.fsync(h);
  io.close(h);
  auto r = io.open("a.txt", false, OpenMode::Read);
  EXPECT_EQ(io.read(r, 5), "hello");
  EXPECT_EQ(io.read(r, 100), " world");
  EXPECT_EQ(io.read(r, 100), "");
  EXPECT_EQ(code_of([&] { io.write(r, "x"); }), IoErrc::BadMode);
  io.close(r);
  EXPECT_EQ(code_of([&] { io.read(r, 1); }), IoErrc::Closed);
  EXPECT_EQ(code_of([&] { io.open("nope", false, OpenMode::Read); }), IoErrc::NotFound);
  EXPECT_EQ(code_of([&] { io.open("new", true, OpenMode::Read); }), IoErrc::BadMode);
  EXPECT_EQ(code_of([&] { io.open("../x", true, OpenMode::Write); }), IoErrc::PathEscape);

  io.mkdir("sub");
  EXPECT_EQ(code_of([&] { io.mkdir("sub"); }), IoErrc::Exists);
  io.rename("a.txt", "sub/b.txt");
  EXPECT_TRUE(std::filesystem::exists(dir / "data" / "sub" / "b.txt"));
  auto c = io.open("c", true, OpenMode::Write);
  io.close(c);
  EXPECT_EQ(code_of([&] { io.rename("c", "sub/b.txt"); }), IoErrc::Exists);
  EXPECT_EQ(code_of([&] { io.rename("gone", "x"); }), IoErrc::NotFound);
}

TEST(PosixIo, TrackedEventsFollowTheMapping) {
  TempDir dir("posix");
  Sandbox sb(dir / "data");
  auto cfg = TrackingConfig::all_enabled();
  cfg.output_dir = dir / "prov";
  cfg.track_duration = true;
  auto clock = std::make_shared<StepClock>(3);
  auto s = Session::begin({"Bob", "prog", 0, ""}, cfg, clock);
  PosixIo io(sb, s.get());

  auto h = io.open("f.dat", true, OpenMode::ReadWrite);
  io.write(h, "abc");
  io.fsync(h);
  io.close(h);
  auto r = io.open("./f.dat", false, OpenMode::Read);
  io.read(r, 3);
  io.close(r);
  io.mkdir("d");
  io.rename("f.dat", "d/g.dat");
  // Failures leave no trace.
  EXPECT_THROW(io.open("missing", false, OpenMode::Read), IoError);

  auto g = s->snapshot();
  Guid f("f.dat");
  auto rel = [&](const Guid& e, Predicate p) { return g.scan(e, p).size(); };
  EXPECT_EQ(rel(f, Predicate::WasCreatedBy), 1u);
  EXPECT_EQ(rel(f, Predicate::WasOpenedBy), 1u);
  EXPECT_EQ(rel(f, Predicate::WasWrittenBy), 1u);
  EXPECT_EQ(rel(f, Predicate::WasReadBy), 1u);
  EXPECT_EQ(rel(f, Predicate::WasFlushedBy), 1u);
  EXPECT_EQ(rel(f, Predicate::WasModifiedBy), 1u);
  EXPECT_EQ(g.find_node(Guid("d/g.dat")), nullptr);
  const ProvNode* d = g.find_node(Guid("d"));
  ASSERT_NE(d, nullptr);
  EXPECT_EQ(d->sub_class, SubClass::Directory);
  EXPECT_EQ(rel(Guid("d"), Predicate::WasCreatedBy), 1u);
  EXPECT_EQ(s->activity_count(), 7u);

  // Seven timed calls, each measured by a before/after pair of readings.
  auto readings = clock->readings();
  ASSERT_EQ(readings.size(), 15u);  // the failed open also read the clock once
  std::int64_t expected = 0;
  for (std::size_t i = 0; i + 1 < 14; i += 2) expected += readings[i + 1] - readings[i];
  std::int64_t total = 0;
  for (const auto& t : g.scan(std::nullopt, Predicate::Elapsed)) {
    total += std::get<std::int64_t>(std::get<Literal>(t.object).value);
  }
  EXPECT_EQ(total, expected);
}
