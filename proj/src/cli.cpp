#include "provio/cli.hpp"

#include <unistd.h>

#include <charconv>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "provio/dot.hpp"
#include "provio/errors.hpp"
#include "provio/lineage.hpp"
#include "provio/query.hpp"
#include "provio/turtle.hpp"
#include "provio/workloads.hpp"

namespace provio {

namespace {

struct SpecFlags {
  std::string workload;
  std::string pattern = "write+read";
  WorkloadSpec spec;
};

void add_spec_flags(CLI::App* sub, SpecFlags& f) {
  sub->add_option("--workload", f.workload, "dassa | h5bench | topreco | megatron")
      ->required()
      ->check(CLI::IsMember({"dassa", "h5bench", "topreco", "megatron"}));
  sub->add_option("--user", f.spec.user, "Workflow user name");
  sub->add_option("--seed", f.spec.seed, "RNG seed");
  sub->add_option("--files", f.spec.input_files, "dassa: input files");
  sub->add_option("--pattern", f.pattern, "h5bench: I/O pattern")
      ->check(CLI::IsMember({"write+read", "write+overwrite+read", "write+append+read"}));
  sub->add_option("--workers", f.spec.workers, "h5bench: concurrent workers");
  sub->add_option("--ops", f.spec.ops_per_worker, "h5bench: datasets per worker");
  sub->add_option("--compute-ms", f.spec.compute_ms, "h5bench: sleep before each step");
  sub->add_option("--payload", f.spec.payload_bytes, "h5bench: bytes per write");
  sub->add_option("--epochs", f.spec.epochs, "topreco: training epochs");
  sub->add_option("--config-fields", f.spec.config_fields, "topreco: configuration nodes");
  sub->add_option("--iterations", f.spec.iterations, "megatron: training iterations");
  sub->add_option("--batch-sizes", f.spec.batch_sizes, "megatron: one configuration each")
      ->delimiter(',');
  sub->add_option("--checkpoints", f.spec.checkpoints, "megatron: checkpoints taken");
}

WorkloadSpec finish_spec(SpecFlags& f) {
  WorkloadSpec spec = f.spec;
  spec.kind = *parse_workload(f.workload);
  spec.pattern = *parse_pattern(f.pattern);
  return spec;
}

TrackingConfig resolve_config(const std::string& path) {
  if (!path.empty()) return load_tracking_config(path);
  if (auto env = config_from_environment()) return *env;
  return TrackingConfig::all_enabled();
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f || !(f << text)) throw std::runtime_error("cannot write " + path);
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Provenance capture, merge and query for I/O workloads", "provio"};
  app.require_subcommand(1);

  std::string graph_file;
  auto graph_arg = [&](CLI::App* sub) {
    sub->add_option("graph", graph_file, "Merged Turtle file")->required();
  };

  // run
  SpecFlags run_flags;
  std::string run_config, run_out;
  bool run_tsv = false;
  auto* run = app.add_subcommand("run", "Run a workload with tracking");
  add_spec_flags(run, run_flags);
  run->add_option("--config", run_config, "Tracking config (INI); default $PROVIO_CONFIG");
  run->add_option("--out", run_out, "Output directory")->required();
  run->add_flag("--tsv", run_tsv, "Print a table row instead of JSON");

  // merge
  std::string merge_dir, merge_out;
  auto* merge = app.add_subcommand("merge", "Merge sub-graph files of a directory");
  merge->add_option("dir", merge_dir, "Directory holding prov_*.ttl")->required();
  merge->add_option("-o,--output", merge_out, "Merged Turtle file")->required();

  // query
  std::string query_file, query_format = "tsv";
  auto* query = app.add_subcommand("query", "Evaluate a conjunctive query");
  graph_arg(query);
  query->add_option("--file", query_file, "Query text (.rq)")->required();
  query->add_option("--format", query_format, "tsv | json")
      ->check(CLI::IsMember({"tsv", "json"}));

  // lineage
  std::string lineage_object;
  unsigned lineage_levels = 1;
  bool lineage_print_query = false;
  auto* lineage = app.add_subcommand("lineage", "Backward lineage of a data object");
  graph_arg(lineage);
  lineage->add_option("--object", lineage_object, "Entity path")->required();
  lineage->add_option("--levels", lineage_levels, "Hops back")->check(CLI::PositiveNumber);
  lineage->add_flag("--print-query", lineage_print_query,
                    "Print the equivalent query text instead of evaluating");

  // stats
  bool stats_durations = false;
  auto* stats = app.add_subcommand("stats", "I/O operation counts per class");
  graph_arg(stats);
  stats->add_flag("--durations", stats_durations, "Add summed elapsed microseconds");

  // modifiers
  std::string modifiers_file;
  auto* modifiers = app.add_subcommand("modifiers", "Agent chains that touched a file");
  graph_arg(modifiers);
  modifiers->add_option("--file", modifiers_file, "File entity path")->required();

  // configs
  auto* configs = app.add_subcommand("configs", "Configuration versions and accuracies");
  graph_arg(configs);

  // checkpoints
  std::vector<std::string> ckpt_where;
  std::string ckpt_quality;
  auto* checkpoints = app.add_subcommand("checkpoints", "Checkpoints consistent with settings");
  graph_arg(checkpoints);
  checkpoints->add_option("--where", ckpt_where, "name=value, repeatable")->required();
  checkpoints->add_option("--quality", ckpt_quality, "prop<bound, e.g. ns1:hasValue<3.2");

  // export-dot
  std::string dot_highlight, dot_out;
  bool dot_collapse = false;
  auto* export_dot = app.add_subcommand("export-dot", "Render the graph as Graphviz DOT");
  graph_arg(export_dot);
  export_dot->add_option("--highlight-lineage", dot_highlight, "PATH:N");
  export_dot->add_flag("--collapse", dot_collapse, "Fold activities by class");
  export_dot->add_option("-o,--output", dot_out, "DOT file; stdout when omitted");

  // bench
  SpecFlags bench_flags;
  std::string bench_config, bench_out;
  unsigned bench_reps = 5;
  auto* bench = app.add_subcommand("bench", "Tracked versus untracked wall time");
  add_spec_flags(bench, bench_flags);
  bench->add_option("--reps", bench_reps, "Repetitions (>= 3)")->check(CLI::Range(3u, 1000u));
  bench->add_option("--config", bench_config, "Tracking config (INI); default $PROVIO_CONFIG");
  bench->add_option("--out", bench_out, "Scratch directory; a temporary one when omitted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      auto spec = finish_spec(run_flags);
      RunOptions opt;
      opt.out_dir = run_out;
      auto report = run_workload(spec, resolve_config(run_config), opt);
      out << (run_tsv ? reports_tsv({report}) : report.to_json());
    } else if (*merge) {
      write_turtle_file(merge_out, merge_directory(merge_dir));
    } else if (*query) {
      auto result = evaluate(read_turtle_file(graph_file), parse_query(read_text(query_file)));
      out << (query_format == "json" ? to_json(result) : to_tsv(result));
    } else if (*lineage) {
      Guid object(lineage_object);
      if (lineage_print_query) {
        out << lineage_query_text(object, lineage_levels);
      } else {
        auto tree = backward_lineage(read_turtle_file(graph_file), object, lineage_levels);
        out << "level\tentity\tprogram\tactivity\n";
        for (std::size_t k = 0; k < tree.levels.size(); ++k) {
          for (const auto& s : tree.levels[k]) {
            out << k + 1 << '\t' << s.entity.value << '\t' << s.program.value << '\t'
                << s.activity.value << '\n';
          }
        }
      }
    } else if (*stats) {
      auto result = io_stats(read_turtle_file(graph_file), stats_durations);
      out << "class\tcount" << (stats_durations ? "\telapsed_us" : "") << '\n';
      for (const auto& [cls, stat] : result) {
        out << sub_class_name(cls) << '\t' << stat.count;
        if (stats_durations) out << '\t' << stat.elapsed_us.value_or(0);
        out << '\n';
      }
    } else if (*modifiers) {
      auto chains = file_modifiers(read_turtle_file(graph_file), Guid(modifiers_file));
      out << "program\tthread\tuser\n";
      for (const auto& c : chains) {
        out << c.program.value << '\t' << c.thread.value << '\t' << c.user.value << '\n';
      }
    } else if (*configs) {
      out << "config\tversion\taccuracy\n";
      for (const auto& row : config_accuracy_map(read_turtle_file(graph_file))) {
        out << row.config << '\t' << row.version.text() << '\t' << row.accuracy.text() << '\n';
      }
    } else if (*checkpoints) {
      std::vector<std::pair<std::string, Literal>> constraints;
      for (const auto& w : ckpt_where) constraints.push_back(parse_constraint(w));
      std::optional<QualityCondition> quality;
      if (!ckpt_quality.empty()) quality = parse_quality(ckpt_quality);
      for (const Guid& g :
           consistent_checkpoints(read_turtle_file(graph_file), constraints, quality)) {
        out << g.value << '\n';
      }
    } else if (*export_dot) {
      auto graph = read_turtle_file(graph_file);
      RenderSpec spec;
      if (!dot_highlight.empty()) {
        auto colon = dot_highlight.rfind(':');
        if (colon == std::string::npos || colon == 0) {
          throw std::invalid_argument("--highlight-lineage expects PATH:N");
        }
        unsigned levels = 0;
        auto num = std::string_view(dot_highlight).substr(colon + 1);
        auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), levels);
        if (ec != std::errc() || ptr != num.data() + num.size() || levels == 0) {
          throw std::invalid_argument("--highlight-lineage level must be a positive integer");
        }
        spec = lineage_highlight(
            graph, backward_lineage(graph, Guid(dot_highlight.substr(0, colon)), levels));
      }
      spec.collapse = dot_collapse;
      write_text(dot_out, to_dot(graph, spec), out);
    } else if (*bench) {
      auto spec = finish_spec(bench_flags);
      RunOptions opt;
      bool scratch = bench_out.empty();
      opt.out_dir = scratch ? std::filesystem::temp_directory_path() /
                                  ("provio_bench_" + std::to_string(::getpid()))
                            : std::filesystem::path(bench_out);
      auto report = measure_overhead(spec, resolve_config(bench_config), bench_reps, opt);
      if (scratch) std::filesystem::remove_all(opt.out_dir);
      out << report.to_json();
    }
  } catch (const std::exception& e) {
    std::string msg = e.what();
    for (auto& c : msg) {
      if (c == '\n') c = ' ';
    }
    err << "provio: error: " << msg << '\n';
    return 1;
  }
  return 0;
}

}  // namespace provio
