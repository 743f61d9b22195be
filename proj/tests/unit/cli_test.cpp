#include <gtest/gtest.h>

#include <sstream>

#include "json.hpp"
#include "provio/cli.hpp"
#include "test_support.hpp"

using provio::testing::read_file;
using provio::testing::TempDir;
using provio::testing::write_file;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "provio");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = provio::dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string golden(const std::string& name) {
  return read_file(std::filesystem::path(PROVIO_GOLDEN_DIR) / name);
}

}  // namespace

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"run", "--workload", "vpic", "--out", "x"}).code, 2);
  EXPECT_EQ(run({"lineage", "g.ttl", "--object", "a", "--levels", "0"}).code, 2);
  EXPECT_EQ(run({"bench", "--workload", "h5bench", "--reps", "2"}).code, 2);

  auto missing = run({"stats", "/nonexistent/merged.ttl"});
  EXPECT_EQ(missing.code, 1);
  EXPECT_EQ(missing.err.rfind("provio: error: ", 0), 0u);
  EXPECT_EQ(std::count(missing.err.begin(), missing.err.end(), '\n'), 1);
}

TEST(Cli, RunMergeAndQueries) {
  TempDir dir("cli");
  auto out = (dir / "run").string();
  auto r = run({"run", "--workload", "dassa", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  auto report = nlohmann::json::parse(r.out);
  std::string merged = report["merged_file"];

  // Re-merging the sub-graphs reproduces merged.ttl byte for byte.
  auto again = (dir / "again.ttl").string();
  ASSERT_EQ(run({"merge", out, "-o", again}).code, 0);
  EXPECT_EQ(read_file(again), read_file(merged));

  auto stats = run({"stats", merged});
  EXPECT_EQ(stats.out, golden("dassa_stats.tsv"));

  auto lin = run({"lineage", merged, "--object", "decimate.h5", "--levels", "2"});
  ASSERT_EQ(lin.code, 0) << lin.err;
  EXPECT_EQ(lin.out.substr(0, lin.out.find('\n')), "level\tentity\tprogram\tactivity");
  EXPECT_NE(lin.out.find("2\tWestSac.tdms\t"), std::string::npos);

  auto q = run({"lineage", "unused", "--object", "decimate.h5", "--levels", "1", "--print-query"});
  EXPECT_EQ(q.code, 0);
  write_file(dir / "q.rq", q.out);
  auto tsv = run({"query", merged, "--file", (dir / "q.rq").string()});
  ASSERT_EQ(tsv.code, 0) << tsv.err;
  EXPECT_NE(tsv.out.find("<WestSac.h5>"), std::string::npos);
  auto js = run({"query", merged, "--file", (dir / "q.rq").string(), "--format", "json"});
  EXPECT_FALSE(nlohmann::json::parse(js.out)["rows"].empty());

  auto mods = run({"modifiers", merged, "--file", "WestSac.h5"});
  EXPECT_EQ(mods.code, 0);
  EXPECT_EQ(std::count(mods.out.begin(), mods.out.end(), '\n'), 3);  // header, two programs

  auto dot_file = (dir / "g.dot").string();
  ASSERT_EQ(run({"export-dot", merged, "--highlight-lineage", "decimate.h5:2", "-o", dot_file}).code,
            0);
  auto doc = provio::testing::parse_dot(read_file(dot_file));
  EXPECT_GT(doc.nodes.size(), 10u);
  EXPECT_EQ(run({"export-dot", merged, "--highlight-lineage", "decimate.h5:x"}).code, 1);

  // A second run into the same directory is refused.
  EXPECT_EQ(run({"run", "--workload", "dassa", "--out", out}).code, 1);
}

TEST(Cli, TrainingQueries) {
  TempDir dir("cli");
  auto m = run({"run", "--workload", "megatron", "--iterations", "12", "--out",
                (dir / "m").string()});
  ASSERT_EQ(m.code, 0) << m.err;
  std::string merged = nlohmann::json::parse(m.out)["merged_file"];
  EXPECT_EQ(run({"checkpoints", merged, "--where", "batch_size=256"}).out, "Checkpoint_3\n");
  EXPECT_EQ(run({"checkpoints", merged, "--where", "batch_size=128"}).out,
            "Checkpoint_1\nCheckpoint_2\n");
  EXPECT_EQ(run({"checkpoints", merged, "--where", "batch_size=128", "--quality",
                 "ns1:hasValue<0"})
                .out,
            "");
  EXPECT_EQ(run({"checkpoints", merged, "--where", "depth=3"}).code, 1);
  EXPECT_EQ(run({"checkpoints", merged, "--where", "batch_size=1", "--quality", "bogus"}).code, 1);

  auto t = run({"run", "--workload", "topreco", "--config-fields", "2", "--out",
                (dir / "t").string(), "--tsv"});
  ASSERT_EQ(t.code, 0) << t.err;
  EXPECT_EQ(t.out.rfind("workload\t", 0), 0u);
  auto configs = run({"configs", (dir / "t" / "merged.ttl").string()});
  EXPECT_EQ(configs.out, golden("topreco_configs.tsv"));
}

TEST(Cli, ConfigFileAndEnvironment) {
  TempDir dir("cli");
  write_file(dir / "c.ini", "[classes]\nread=false\n");
  auto r = run({"run", "--workload", "h5bench", "--config", (dir / "c.ini").string(), "--out",
                (dir / "a").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  auto stats = run({"stats", (dir / "a" / "merged.ttl").string()});
  EXPECT_EQ(stats.out.find("Read\t"), std::string::npos);
  EXPECT_NE(stats.out.find("Write\t"), std::string::npos);

  write_file(dir / "bad.ini", "[classes]\nread=maybe\n");
  EXPECT_EQ(run({"run", "--workload", "h5bench", "--config", (dir / "bad.ini").string(), "--out",
                 (dir / "b").string()})
                .code,
            1);
}
