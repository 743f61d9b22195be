#include <gtest/gtest.h>

#include <random>

#include "provio/lineage.hpp"
#include "provio/tracker.hpp"
#include "provio/turtle.hpp"
#include "test_support.hpp"

using namespace provio;
using provio::testing::lineage_levels_oracle;
using provio::testing::TempDir;

namespace {

// Programs that read some files and are credited with others.
ProvGraph random_pipeline(std::mt19937_64& rng, int programs, int files) {
  ProvGraph g;
  AgentContext ctx{"u", "x", 0, ""};
  std::vector<Guid> progs, data;
  for (int p = 0; p < programs; ++p) {
    auto n = make_node(SubClass::Program, "prog" + std::to_string(p), ctx);
    g.add_node(n);
    progs.push_back(n.guid);
  }
  for (int f = 0; f < files; ++f) {
    auto n = make_node(f % 5 == 0 ? SubClass::Dataset : SubClass::File, "f" + std::to_string(f), ctx);
    g.add_node(n);
    data.push_back(n.guid);
  }
  std::uint64_t seq = 0;
  for (const Guid& f : data) {
    for (const Guid& p : progs) {
      if (rng() % 4 == 0) g.add_triple({f, Predicate::WasAttributedTo, p});
      if (rng() % 6 == 0) {
        auto a = make_node(SubClass::Read, "posix_read", ctx, ++seq);
        g.add_node(a);
        g.add_triple({f, Predicate::WasReadBy, a.guid});
        // Sometimes the read belongs to some other program.
        const Guid& owner = rng() % 5 == 0 ? progs[rng() % progs.size()] : p;
        g.add_triple({a.guid, Predicate::WasAssociatedWith, owner});
      }
    }
  }
  return g;
}

std::vector<std::set<Guid>> levels_of(const LineageTree& t) {
  std::vector<std::set<Guid>> out;
  for (std::size_t k = 1; k <= t.levels.size(); ++k) {
    auto e = t.entities_at(k);
    out.emplace_back(e.begin(), e.end());
  }
  return out;
}

// Two programs: tdms2h5 reads the raw file and writes the h5 file, decimate
// reads the h5 file and writes the product.
struct Chain {
  TempDir dir{"lin"};
  ProvGraph graph;
  Chain() {
    auto cfg = TrackingConfig::all_enabled();
    cfg.output_dir = dir.path();
    {
      auto s = Session::begin({"Bob", "tdms2h5", 0, ""}, cfg);
      s->record_io({"posix_read", SubClass::Read, SubClass::File, "WestSac.tdms", {}});
      s->record_io({"H5Fcreate", SubClass::Create, SubClass::File, "WestSac.h5", {}});
    }
    {
      auto s = Session::begin({"Bob", "decimate", 1, ""}, cfg);
      s->record_io({"posix_read", SubClass::Read, SubClass::File, "WestSac.h5", {}});
      s->record_io({"H5Fcreate", SubClass::Create, SubClass::File, "decimate.h5", {}});
    }
    graph = merge_directory(dir.path());
  }
};

}  // namespace

TEST(Lineage, TwoLevelChain) {
  Chain c;
  auto tree = backward_lineage(c.graph, Guid("decimate.h5"), 2);
  ASSERT_EQ(tree.levels.size(), 2u);
  EXPECT_EQ(tree.entities_at(1), std::vector<Guid>{Guid("WestSac.h5")});
  EXPECT_EQ(tree.entities_at(2), std::vector<Guid>{Guid("WestSac.tdms")});
  EXPECT_EQ(tree.levels[0][0].program,
            mint_guid(SubClass::Program, "decimate", AgentContext{"Bob", "decimate", 1, ""}));
  // Walking further finds nothing more.
  EXPECT_EQ(backward_lineage(c.graph, Guid("decimate.h5"), 5).levels.size(), 2u);
}

TEST(Lineage, Errors) {
  Chain c;
  EXPECT_THROW(backward_lineage(c.graph, Guid("nothing"), 1), QueryError);
  EXPECT_THROW(backward_lineage(c.graph, c.graph.scan(std::nullopt, Predicate::WasReadBy)
                                              .front()
                                              .subject,
                                0),
               QueryError);
  auto program = backward_lineage(c.graph, Guid("decimate.h5"), 1).levels[0][0].program;
  EXPECT_THROW(backward_lineage(c.graph, program, 1), QueryError);
}

TEST(Lineage, QueryText) {
  std::string q = lineage_query_text(Guid("decimate.h5"), 2);
  EXPECT_EQ(q,
            "SELECT * WHERE {\n"
            "  <decimate.h5> prov:wasAttributedTo ?program_1 .\n"
            "  ?object_1 prov:wasAttributedTo ?program_1 ;\n"
            "      provio:wasReadBy ?io_1 .\n"
            "  ?object_1 prov:wasAttributedTo ?program_2 .\n"
            "  ?object_2 prov:wasAttributedTo ?program_2 ;\n"
            "      provio:wasReadBy ?io_2 .\n"
            "}\n");
}

TEST(Lineage, MatchesReachabilityOracle) {
  std::mt19937_64 rng(31);
  for (int round = 0; round < 40; ++round) {
    ProvGraph g = random_pipeline(rng, 2 + round % 5, 6 + round % 20);
    for (const auto& n : g.nodes()) {
      if (n.super_class() != SuperClass::Entity) continue;
      for (unsigned levels : {1u, 2u, 4u}) {
        auto tree = backward_lineage(g, n.guid, levels);
        EXPECT_EQ(levels_of(tree), lineage_levels_oracle(g, n.guid, levels)) << n.guid.value;
        // Every step is backed by the three joined facts.
        for (const auto& level : tree.levels) {
          for (const auto& s : level) {
            EXPECT_TRUE(g.contains({s.entity, Predicate::WasAttributedTo, s.program}));
            EXPECT_TRUE(g.contains({s.entity, Predicate::WasReadBy, s.activity}));
            EXPECT_TRUE(g.contains({s.activity, Predicate::WasAssociatedWith, s.program}));
          }
        }
      }
      // Prefix property.
      auto deep = backward_lineage(g, n.guid, 4);
      auto shallow = backward_lineage(g, n.guid, 2);
      deep.levels.resize(std::min<std::size_t>(deep.levels.size(), 2));
      EXPECT_EQ(deep.levels, shallow.levels);
    }
  }
}

TEST(Stats, CountsAndDurations) {
  TempDir dir("stats");
  auto cfg = TrackingConfig::all_enabled();
  cfg.output_dir = dir.path();
  cfg.track_duration = true;
  auto s = Session::begin({"Bob", "p", 0, ""}, cfg);
  std::int64_t write_total = 0;
  for (int i = 0; i < 10; ++i) {
    s->record_io({"posix_write", SubClass::Write, SubClass::File, "f", i * 3});
    write_total += i * 3;
  }
  for (int i = 0; i < 5; ++i) s->record_io({"posix_read", SubClass::Read, SubClass::File, "f", 7});
  auto g = s->snapshot();
  auto stats = io_stats(g, false);
  EXPECT_EQ(stats.size(), 2u);
  EXPECT_EQ(stats[SubClass::Write].count, 10u);
  EXPECT_EQ(stats[SubClass::Read].count, 5u);
  EXPECT_FALSE(stats[SubClass::Read].elapsed_us);
  auto timed = io_stats(g, true);
  EXPECT_EQ(timed[SubClass::Write].elapsed_us, write_total);
  EXPECT_EQ(timed[SubClass::Read].elapsed_us, 35);

  EXPECT_TRUE(io_stats(ProvGraph(), false).empty());
  cfg.track_duration = false;
  auto plain = Session::begin({"Bob", "p", 1, ""}, cfg);
  plain->record_io({"posix_write", SubClass::Write, SubClass::File, "f", {}});
  EXPECT_THROW(io_stats(plain->snapshot(), true), QueryError);
}

TEST(Modifiers, OneChainPerRankSession) {
  TempDir dir("mod");
  auto cfg = TrackingConfig::all_enabled();
  cfg.output_dir = dir.path();
  for (std::uint32_t r = 0; r < 4; ++r) {
    auto s = Session::begin({"Bob", "vpic", r, ""}, cfg);
    s->record_io({"posix_write", SubClass::Write, SubClass::File, "shared.h5", {}});
    s->record_io({"posix_write", SubClass::Write, SubClass::File, "own" + std::to_string(r), {}});
  }
  {
    auto s = Session::begin({"Alice", "post", 0, ""}, cfg);
    s->record_io({"posix_read", SubClass::Read, SubClass::File, "shared.h5", {}});
  }
  auto g = merge_directory(dir.path());
  auto chains = file_modifiers(g, Guid("shared.h5"));
  ASSERT_EQ(chains.size(), 5u);
  std::set<Guid> programs, threads;
  for (const auto& c : chains) {
    programs.insert(c.program);
    threads.insert(c.thread);
  }
  EXPECT_EQ(programs.size(), 2u);
  EXPECT_EQ(threads.size(), 5u);
  // All ranks share one program node, so a rank-private file still lists
  // every vpic chain.
  EXPECT_EQ(file_modifiers(g, Guid("own2")).size(), 4u);
  EXPECT_THROW(file_modifiers(g, Guid("missing")), QueryError);

  auto s = Session::begin({"Bob", "idle", 9, ""}, cfg);
  s->record_extensible(SubClass::Metrics, "m", {});
  ProvGraph untouched = s->snapshot();
  untouched.add_node(make_node(SubClass::File, "untouched.dat", s->context()));
  EXPECT_TRUE(file_modifiers(untouched, Guid("untouched.dat")).empty());
  untouched.add_node(make_node(SubClass::Dataset, "/d", s->context()));
  EXPECT_THROW(file_modifiers(untouched, Guid("/d")), QueryError);
}

TEST(Configs, AccuracyMapRows) {
  ProvGraph g;
  AgentContext ctx{"u", "p", 0, ""};
  for (int v = 3; v >= 1; --v) {
    auto n = make_node(SubClass::Configuration, "cfg" + std::to_string(v), ctx);
    g.add_node(n);
    g.add_triple({n.guid, Predicate::Version, Literal::string("v" + std::to_string(v))});
    g.add_triple({n.guid, Predicate::HasAccuracy, Literal::decimal(0.9 - 0.1 * v)});
  }
  g.add_triple({Guid("cfg2"), Predicate::HasAccuracy, Literal::decimal(0.05)});
  auto bare = make_node(SubClass::Configuration, "no_acc", ctx);
  g.add_node(bare);
  g.add_triple({bare.guid, Predicate::Version, Literal::string("v0")});

  auto rows = config_accuracy_map(g);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].config, "cfg1");
  EXPECT_EQ(rows[1].config, "cfg2");
  EXPECT_EQ(rows[1].accuracy, Literal::decimal(0.05));
  EXPECT_EQ(rows[2].config, "cfg2");
  EXPECT_EQ(rows[3].version, Literal::string("v3"));
  EXPECT_TRUE(config_accuracy_map(ProvGraph()).empty());
}

TEST(Checkpoints, TwoBatchSizesThreeCheckpoints) {
  // Batch_Size_A (128) influenced checkpoints 1 and 2, Batch_Size_B (256)
  // checkpoint 3; each checkpoint has a loss metric.
  ProvGraph g;
  AgentContext ctx{"u", "megatron", 0, ""};
  auto add = [&](SubClass s, const std::string& name) {
    auto n = make_node(s, name, ctx);
    g.add_node(n);
    return n.guid;
  };
  Guid a = add(SubClass::Configuration, "Batch_Size_A");
  Guid b = add(SubClass::Configuration, "Batch_Size_B");
  g.add_triple({a, Predicate::HasValue, Literal::integer(128)});
  g.add_triple({b, Predicate::HasValue, Literal::integer(256)});
  const double losses[] = {3.4, 2.6, 2.2};
  for (int k = 1; k <= 3; ++k) {
    Guid c = add(SubClass::Checkpoint, "Checkpoint_" + std::to_string(k));
    Guid m = add(SubClass::Metrics, "loss@Checkpoint_" + std::to_string(k));
    g.add_triple({m, Predicate::HasValue, Literal::decimal(losses[k - 1])});
    g.add_triple({m, Predicate::Influenced, c});
    g.add_triple({k < 3 ? a : b, Predicate::Influenced, c});
  }

  auto ck = [](std::initializer_list<const char*> names) {
    std::vector<Guid> out;
    for (auto n : names) out.emplace_back(n);
    return out;
  };
  EXPECT_EQ(consistent_checkpoints(g, {parse_constraint("batch_size=256")}), ck({"Checkpoint_3"}));
  EXPECT_EQ(consistent_checkpoints(g, {parse_constraint("Batch_Size=128")}),
            ck({"Checkpoint_1", "Checkpoint_2"}));
  EXPECT_TRUE(consistent_checkpoints(g, {parse_constraint("batch_size=512")}).empty());
  EXPECT_EQ(consistent_checkpoints(g, {parse_constraint("batch_size=128")},
                                   parse_quality("ns1:hasValue<3.0")),
            ck({"Checkpoint_2"}));
  EXPECT_TRUE(consistent_checkpoints(g, {parse_constraint("batch_size=128"),
                                         parse_constraint("batch_size=256")})
                  .empty());
  EXPECT_THROW(consistent_checkpoints(g, {parse_constraint("learning_rate=1")}), QueryError);
}

TEST(Checkpoints, ParseHelpers) {
  auto q = parse_quality("ns1:hasValue<=3.25");
  EXPECT_EQ(q.property, Predicate::HasValue);
  EXPECT_EQ(q.op, Comparator::LessEqual);
  EXPECT_EQ(q.bound, 3.25);
  EXPECT_EQ(parse_quality("provio:hasAccuracy>0.9").op, Comparator::Greater);
  EXPECT_THROW(parse_quality("ns1:hasValue"), std::invalid_argument);
  EXPECT_THROW(parse_quality("prov:influenced<3"), std::invalid_argument);
  EXPECT_THROW(parse_quality("ns1:hasValue<abc"), std::invalid_argument);

  EXPECT_EQ(parse_constraint("batch_size=256").second, Literal::integer(256));
  EXPECT_EQ(parse_constraint("lr=0.5").second, Literal::decimal(0.5));
  EXPECT_EQ(parse_constraint("opt=adam").second, Literal::string("adam"));
  EXPECT_THROW(parse_constraint("=1"), std::invalid_argument);
  EXPECT_THROW(parse_constraint("x="), std::invalid_argument);
}
