#include "provio/workloads.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <random>
#include <set>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "provio/container.hpp"
#include "provio/posix_io.hpp"
#include "provio/sandbox.hpp"
#include "provio/tracker.hpp"
#include "provio/turtle.hpp"

namespace provio {

std::string_view workload_name(WorkloadKind k) {
  switch (k) {
    case WorkloadKind::Dassa: return "dassa";
    case WorkloadKind::H5bench: return "h5bench";
    case WorkloadKind::Topreco: return "topreco";
    case WorkloadKind::Megatron: return "megatron";
  }
  return "?";
}

std::optional<WorkloadKind> parse_workload(std::string_view name) {
  for (auto k : {WorkloadKind::Dassa, WorkloadKind::H5bench, WorkloadKind::Topreco,
                 WorkloadKind::Megatron}) {
    if (workload_name(k) == name) return k;
  }
  return std::nullopt;
}

std::string_view pattern_name(H5Pattern p) {
  switch (p) {
    case H5Pattern::WriteRead: return "write+read";
    case H5Pattern::WriteOverwriteRead: return "write+overwrite+read";
    case H5Pattern::WriteAppendRead: return "write+append+read";
  }
  return "?";
}

std::optional<H5Pattern> parse_pattern(std::string_view name) {
  for (auto p : {H5Pattern::WriteRead, H5Pattern::WriteOverwriteRead,
                 H5Pattern::WriteAppendRead}) {
    if (pattern_name(p) == name) return p;
  }
  return std::nullopt;
}

void WorkloadSpec::validate() const {
  auto positive = [](unsigned v, const char* what) {
    if (v == 0) throw std::invalid_argument(std::string(what) + " must be at least 1");
  };
  if (user.empty()) throw std::invalid_argument("user must be non-empty");
  switch (kind) {
    case WorkloadKind::Dassa:
      positive(input_files, "input_files");
      break;
    case WorkloadKind::H5bench:
      positive(workers, "workers");
      positive(ops_per_worker, "ops_per_worker");
      if (payload_bytes == 0) throw std::invalid_argument("payload_bytes must be at least 1");
      break;
    case WorkloadKind::Topreco:
      positive(epochs, "epochs");
      positive(config_fields, "config_fields");
      break;
    case WorkloadKind::Megatron:
      positive(iterations, "iterations");
      positive(checkpoints, "checkpoints");
      if (batch_sizes.empty()) throw std::invalid_argument("batch_sizes must be non-empty");
      if (batch_sizes.size() > 26) throw std::invalid_argument("at most 26 batch sizes");
      break;
  }
}

unsigned WorkloadSpec::scale() const {
  switch (kind) {
    case WorkloadKind::Dassa: return input_files;
    case WorkloadKind::H5bench: return workers;
    case WorkloadKind::Topreco: return epochs;
    case WorkloadKind::Megatron: return iterations;
  }
  return 0;
}

TrackingConfig file_lineage_config() {
  TrackingConfig cfg = TrackingConfig::all_disabled();
  cfg.set_all(SuperClass::Activity, true);
  cfg.set_all(SuperClass::Agent, true);
  cfg.set(SubClass::File, true);
  return cfg;
}

namespace {

std::string indexed_name(std::string_view stem, unsigned i, std::string_view ext) {
  std::string out(stem);
  if (i > 0) out += "_" + std::to_string(i);
  out += ext;
  return out;
}

std::string random_bytes(std::mt19937_64& rng, std::size_t n) {
  std::string out(n, '\0');
  std::uniform_int_distribution<int> byte(0, 255);
  for (auto& c : out) c = static_cast<char>(byte(rng));
  return out;
}

// One simulated process: its session (absent in baseline runs), its facade
// instances, and the log of every call it issues.
class Process {
 public:
  Process(const Sandbox& sandbox, const WorkloadSpec& spec, const TrackingConfig& cfg,
          const RunOptions& opt, std::string program, std::uint32_t rank)
      : rank_(rank) {
    if (!opt.baseline) {
      AgentContext ctx{spec.user, std::move(program), rank, ""};
      std::shared_ptr<Clock> clock = opt.clock_for_rank ? opt.clock_for_rank(rank) : nullptr;
      session_ = Session::begin(ctx, cfg, std::move(clock));
    }
    posix_ = std::make_unique<PosixIo>(sandbox, session_.get());
    h5_ = std::make_unique<ContainerIo>(sandbox, session_.get());
  }

  void finish() {
    if (session_ && !session_->ended()) session_->end();
  }

  Session* session() { return session_.get(); }
  std::vector<EventRecord>& log() { return log_; }

  FileHandle open(std::string_view path, bool create, OpenMode mode) {
    auto h = posix_->open(path, create, mode);
    note(create ? SubClass::Create : SubClass::Open, SubClass::File, h.path);
    return h;
  }
  std::string read(const FileHandle& h, std::size_t n) {
    auto out = posix_->read(h, n);
    note(SubClass::Read, SubClass::File, h.path);
    return out;
  }
  void write(const FileHandle& h, std::string_view bytes) {
    posix_->write(h, bytes);
    note(SubClass::Write, SubClass::File, h.path);
  }
  void fsync(const FileHandle& h) {
    posix_->fsync(h);
    note(SubClass::Fsync, SubClass::File, h.path);
  }
  void close(const FileHandle& h) { posix_->close(h); }
  void rename(std::string_view from, std::string_view to) {
    posix_->rename(from, to);
    note(SubClass::Rename, SubClass::File, posix_->sandbox().canonical(from));
  }
  void mkdir(std::string_view path) {
    posix_->mkdir(path);
    note(SubClass::Create, SubClass::Directory, posix_->sandbox().canonical(path));
  }

  ContainerFile h5_create(std::string_view path) {
    auto f = h5_->create_file(path);
    note(SubClass::Create, SubClass::File, f.path);
    return f;
  }
  ContainerFile h5_open(std::string_view path) {
    auto f = h5_->open_file(path);
    note(SubClass::Open, SubClass::File, f.path);
    return f;
  }
  void h5_flush(const ContainerFile& f) {
    h5_->flush(f);
    note(SubClass::Fsync, SubClass::File, f.path);
  }
  void h5_close(const ContainerFile& f) { h5_->close_file(f); }
  ObjectHandle h5_create(const ContainerFile& f, SubClass kind, const std::string& path) {
    auto h = h5_->create_object(f, kind, path);
    note(SubClass::Create, kind, path);
    return h;
  }
  ObjectHandle h5_open(const ContainerFile& f, SubClass kind, const std::string& path) {
    auto h = h5_->open_object(f, kind, path);
    note(SubClass::Open, kind, path);
    return h;
  }
  std::string h5_read(const ObjectHandle& h) {
    auto out = h5_->read(h);
    note(SubClass::Read, h.kind, h.object_path);
    return out;
  }
  void h5_write(const ObjectHandle& h, std::string_view bytes, bool append = false) {
    h5_->write(h, bytes, append);
    note(SubClass::Write, h.kind, h.object_path);
  }
  void h5_close(const ObjectHandle& h) { h5_->close_object(h); }

 private:
  void note(SubClass api, SubClass target_class, const std::string& target) {
    log_.push_back({rank_, api, target_class, target});
  }

  std::uint32_t rank_;
  std::unique_ptr<Session> session_;
  std::unique_ptr<PosixIo> posix_;
  std::unique_ptr<ContainerIo> h5_;
  std::vector<EventRecord> log_;
};

struct Context {
  const WorkloadSpec& spec;
  const TrackingConfig& cfg;
  const RunOptions& opt;
  const Sandbox& sandbox;
  std::vector<std::vector<EventRecord>> logs;

  Process process(std::string program, std::uint32_t rank) {
    return Process(sandbox, spec, cfg, opt, std::move(program), rank);
  }
  void collect(Process& p) {
    p.finish();
    logs.push_back(std::move(p.log()));
  }
};

// Fixed per-file layout: one group, two channel datasets with four
// attributes each, a committed datatype and a link.
constexpr const char* kGroup = "/Acoustic";
constexpr const char* kAttrs[] = {"sampling_rate", "start_time", "unit", "site"};

std::string channel(unsigned j) { return std::string(kGroup) + "/channel_" + std::to_string(j); }

void run_dassa(Context& c) {
  const unsigned n = c.spec.input_files;
  std::mt19937_64 rng(c.spec.seed);
  {
    // Raw acquisitions exist before the workflow starts.
    PosixIo setup(c.sandbox);
    for (unsigned i = 0; i < n; ++i) {
      auto h = setup.open(indexed_name("WestSac", i, ".tdms"), true, OpenMode::Write);
      setup.write(h, random_bytes(rng, 4096));
      setup.close(h);
    }
  }
  for (unsigned i = 0; i < n; ++i) {
    Process p = c.process("tdms2h5", i);
    auto in = p.open(indexed_name("WestSac", i, ".tdms"), false, OpenMode::Read);
    std::string raw = p.read(in, 1 << 20);
    p.close(in);

    auto f = p.h5_create(indexed_name("WestSac", i, ".h5"));
    auto g = p.h5_create(f, SubClass::Group, kGroup);
    auto t = p.h5_create(f, SubClass::Datatype, std::string(kGroup) + "/sample_t");
    for (unsigned j = 0; j < 2; ++j) {
      auto d = p.h5_create(f, SubClass::Dataset, channel(j));
      p.h5_write(d, std::string_view(raw).substr(j * raw.size() / 2, raw.size() / 2));
      for (const char* attr : kAttrs) {
        auto a = p.h5_create(f, SubClass::Attribute, channel(j) + "/" + attr);
        std::string value = std::string(attr) == "site" ? indexed_name("WestSac", i, "")
                                                        : std::to_string(500 * (j + 1));
        p.h5_write(a, value);
        p.h5_close(a);
      }
      p.h5_close(d);
    }
    auto l = p.h5_create(f, SubClass::Link, std::string(kGroup) + "/latest");
    p.h5_flush(f);
    p.h5_close(l);
    p.h5_close(t);
    p.h5_close(g);
    p.h5_close(f);
    c.collect(p);
  }
  for (unsigned i = 0; i < n; ++i) {
    Process p = c.process("decimate", n + i);
    std::string input = indexed_name("WestSac", i, ".h5");
    auto raw = p.open(input, false, OpenMode::Read);
    p.read(raw, 64);
    p.close(raw);

    auto in = p.h5_open(input);
    auto out = p.h5_create(indexed_name("decimate", i, ".h5"));
    auto g = p.h5_create(out, SubClass::Group, kGroup);
    for (unsigned j = 0; j < 2; ++j) {
      auto d = p.h5_open(in, SubClass::Dataset, channel(j));
      std::string samples = p.h5_read(d);
      auto rate = p.h5_open(in, SubClass::Attribute, channel(j) + "/sampling_rate");
      p.h5_read(rate);
      p.h5_close(rate);
      p.h5_close(d);

      std::string reduced;
      for (std::size_t k = 0; k < samples.size(); k += 4) reduced += samples[k];
      auto od = p.h5_create(out, SubClass::Dataset, channel(j));
      p.h5_write(od, reduced);
      auto factor = p.h5_create(out, SubClass::Attribute, channel(j) + "/decimation_factor");
      p.h5_write(factor, "4");
      p.h5_close(factor);
      p.h5_close(od);
    }
    p.h5_flush(out);
    p.h5_close(g);
    p.h5_close(out);
    p.h5_close(in);

    if (i == 0) p.mkdir("products");
    std::string part = "products/" + indexed_name("decimate", i, ".json.part");
    auto side = p.open(part, true, OpenMode::Write);
    p.write(side, "{\"input\": \"" + input + "\", \"factor\": 4}\n");
    p.fsync(side);
    p.close(side);
    p.rename(part, "products/" + indexed_name("decimate", i, ".json"));
    c.collect(p);
  }
}

void run_h5bench(Context& c) {
  const auto& spec = c.spec;
  // The shared file exists before the workers attach.
  ContainerIo setup(c.sandbox);
  auto shared = setup.create_file("h5bench.h5");
  setup.flush(shared);

  std::vector<std::unique_ptr<Process>> procs;
  for (std::uint32_t w = 0; w < spec.workers; ++w) {
    procs.push_back(std::make_unique<Process>(c.sandbox, spec, c.cfg, c.opt, "h5bench", w));
  }
  std::vector<std::exception_ptr> errors(spec.workers);
  std::vector<std::thread> threads;
  for (std::uint32_t w = 0; w < spec.workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        Process& p = *procs[w];
        std::mt19937_64 rng(spec.seed * 1000003 + w);
        auto f = p.h5_open("h5bench.h5");
        std::string root = "/rank_" + std::to_string(w);
        auto g = p.h5_create(f, SubClass::Group, root);
        std::vector<ObjectHandle> sets;
        std::vector<std::string> expect;
        for (unsigned k = 0; k < spec.ops_per_worker; ++k) {
          if (spec.compute_ms) {
            std::this_thread::sleep_for(std::chrono::milliseconds(spec.compute_ms));
          }
          auto d = p.h5_create(f, SubClass::Dataset, root + "/step_" + std::to_string(k));
          auto data = random_bytes(rng, spec.payload_bytes);
          p.h5_write(d, data);
          sets.push_back(d);
          expect.push_back(data);
        }
        if (spec.pattern != H5Pattern::WriteRead) {
          bool append = spec.pattern == H5Pattern::WriteAppendRead;
          for (unsigned k = 0; k < spec.ops_per_worker; ++k) {
            auto data = random_bytes(rng, spec.payload_bytes);
            p.h5_write(sets[k], data, append);
            expect[k] = append ? expect[k] + data : data;
          }
        }
        for (unsigned k = 0; k < spec.ops_per_worker; ++k) {
          if (p.h5_read(sets[k]) != expect[k]) {
            throw std::runtime_error("h5bench read-back mismatch on " + sets[k].object_path);
          }
        }
        p.h5_flush(f);
        for (const auto& d : sets) p.h5_close(d);
        p.h5_close(g);
        p.h5_close(f);
        p.finish();
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (auto& p : procs) c.collect(*p);
  setup.close_file(shared);
}

void run_topreco(Context& c) {
  const auto& spec = c.spec;
  std::mt19937_64 rng(spec.seed);
  {
    PosixIo setup(c.sandbox);
    auto h = setup.open("events.dat", true, OpenMode::Write);
    setup.write(h, random_bytes(rng, 2048));
    setup.close(h);
  }
  Process p = c.process("topreco", 0);
  Session* s = p.session();
  auto in = p.open("events.dat", false, OpenMode::Read);
  p.read(in, 1 << 16);
  p.close(in);
  auto model = p.open("model.ckpt", true, OpenMode::Write);

  std::vector<Guid> configs;
  if (s) {
    s->record_extensible(SubClass::Type, "graph_neural_network",
                         {{Predicate::HasValue, Literal::string("GNN")}});
    std::uniform_int_distribution<int> width(16, 256);
    for (unsigned j = 0; j < spec.config_fields; ++j) {
      configs.push_back(s->record_extensible(
          SubClass::Configuration, "config_" + std::to_string(j),
          {{Predicate::Version, Literal::string("v" + std::to_string(1 + j % 3))},
           {Predicate::HasValue, Literal::integer(width(rng))}}));
    }
  }
  // Distinct accuracies keep every epoch's triples new.
  std::set<std::int64_t> used;
  std::uniform_int_distribution<std::int64_t> draw(0, 1'000'000);
  for (unsigned e = 0; e < spec.epochs; ++e) {
    std::int64_t micro;
    do {
      micro = draw(rng);
    } while (!used.insert(micro).second);
    double accuracy = static_cast<double>(micro) / 1'000'000.0;
    p.write(model, "epoch " + std::to_string(e) + "\n");
    if (!s) continue;
    auto acc = Literal::decimal(accuracy);
    s->record_extensible(SubClass::Metrics, "accuracy@epoch" + std::to_string(e),
                         {{Predicate::HasAccuracy, acc}});
    if (s->tracks(SubClass::Configuration)) {
      // The configuration nodes carry the per-epoch accuracy as well.
      for (const Guid& cfg : configs) {
        s->record_extensible(SubClass::Configuration, cfg.value, {{Predicate::HasAccuracy, acc}});
      }
    }
  }
  p.close(model);
  c.collect(p);
}

double loss_at(unsigned i, unsigned total, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> noise(-0.01, 0.01);
  double x = static_cast<double>(i) / static_cast<double>(total);
  return std::round((2.0 + 4.0 * std::exp(-3.0 * x) + noise(rng)) * 1e6) / 1e6;
}

void run_megatron(Context& c) {
  const auto& spec = c.spec;
  std::mt19937_64 rng(spec.seed);
  Process p = c.process("megatron", 0);
  Session* s = p.session();

  const unsigned k_total = spec.checkpoints;
  const auto b_total = static_cast<unsigned>(spec.batch_sizes.size());
  // Checkpoint k is taken at iteration ceil(k*I/K) under batch size index
  // floor((k-1)*B/K).
  std::vector<unsigned> ckpt_iter(k_total + 1);
  for (unsigned k = 1; k <= k_total; ++k) {
    ckpt_iter[k] = (k * spec.iterations + k_total - 1) / k_total;
  }
  std::vector<double> losses(spec.iterations + 1);
  p.mkdir("ckpt");
  unsigned next = 1;
  for (unsigned i = 1; i <= spec.iterations; ++i) {
    losses[i] = loss_at(i, spec.iterations, rng);
    if (s) {
      s->record_extensible(SubClass::Metrics, "loss@iter" + std::to_string(i),
                           {{Predicate::HasValue, Literal::decimal(losses[i])}});
    }
    while (next <= k_total && ckpt_iter[next] == i) {
      std::string path = "ckpt/Checkpoint_" + std::to_string(next) + ".pt";
      auto h = p.open(path, true, OpenMode::Write);
      p.write(h, "iteration " + std::to_string(i) + "\n" + random_bytes(rng, 256));
      p.fsync(h);
      p.close(h);
      ++next;
    }
  }
  if (!s) {
    c.collect(p);
    return;
  }
  // Checkpoint provenance is recorded once the run is over.
  std::vector<Guid> configs;
  for (unsigned b = 0; b < b_total; ++b) {
    std::string name = "Batch_Size_";
    name += static_cast<char>('A' + b);
    configs.push_back(s->record_extensible(SubClass::Configuration, name,
                                           {{Predicate::HasValue,
                                             Literal::integer(spec.batch_sizes[b])}}));
  }
  for (unsigned k = 1; k <= k_total; ++k) {
    std::string name = "Checkpoint_" + std::to_string(k);
    std::string path = "ckpt/" + name + ".pt";
    Guid ckpt = s->record_extensible(SubClass::Checkpoint, name,
                                     {{Predicate::HasValue, Literal::string(path)}},
                                     {{Predicate::Influenced, Guid(path)}});
    s->record_extensible(SubClass::Metrics, "loss@" + name,
                         {{Predicate::HasValue, Literal::decimal(losses[ckpt_iter[k]])}},
                         {{Predicate::Influenced, ckpt}});
    unsigned b = (k - 1) * b_total / k_total;
    s->record_link(configs[b], Predicate::Influenced, ckpt);
  }
  c.collect(p);
}

std::uint64_t file_bytes(const std::vector<std::filesystem::path>& files) {
  std::uint64_t total = 0;
  for (const auto& f : files) total += std::filesystem::file_size(f);
  return total;
}

}  // namespace

RunReport run_workload(const WorkloadSpec& spec, const TrackingConfig& cfg_in,
                       const RunOptions& options) {
  spec.validate();
  if (options.out_dir.empty()) throw std::invalid_argument("run needs an output directory");
  TrackingConfig cfg = cfg_in;
  cfg.output_dir = options.out_dir;
  cfg.validate();
  std::filesystem::create_directories(options.out_dir);
  if (!list_subgraph_files(options.out_dir).empty()) {
    throw std::runtime_error("output directory already holds sub-graph files: " +
                             options.out_dir.string());
  }
  std::filesystem::remove_all(options.out_dir / "data");
  Sandbox sandbox(options.out_dir / "data");

  Context ctx{spec, cfg, options, sandbox, {}};
  auto start = std::chrono::steady_clock::now();
  switch (spec.kind) {
    case WorkloadKind::Dassa: run_dassa(ctx); break;
    case WorkloadKind::H5bench: run_h5bench(ctx); break;
    case WorkloadKind::Topreco: run_topreco(ctx); break;
    case WorkloadKind::Megatron: run_megatron(ctx); break;
  }
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                  .count();

  RunReport report;
  report.spec = spec;
  (options.baseline ? report.baseline_ms : report.tracked_ms) = ms;
  for (auto& log : ctx.logs) {
    for (auto& ev : log) {
      if (!options.baseline && cfg.is_enabled(ev.api_class)) ++report.event_counts[ev.api_class];
      report.events.push_back(std::move(ev));
    }
  }
  if (!options.baseline) {
    auto files = list_subgraph_files(options.out_dir);
    report.provenance_bytes = file_bytes(files);
    ProvGraph merged = merge_files(files);
    report.merged_file = options.out_dir / "merged.ttl";
    write_turtle_file(report.merged_file, merged);
    report.triple_count = read_turtle_file(report.merged_file).triple_count();
  }
  return report;
}

OverheadReport measure_overhead(const WorkloadSpec& spec, const TrackingConfig& cfg,
                                unsigned repetitions, const RunOptions& options) {
  if (repetitions < 3) throw std::invalid_argument("measure_overhead needs at least 3 repetitions");
  OverheadReport out;
  double sum = 0;
  for (unsigned r = 0; r < repetitions; ++r) {
    auto dir = options.out_dir / ("rep_" + std::to_string(r));
    std::filesystem::remove_all(dir);
    RunOptions base = options;
    base.baseline = true;
    base.out_dir = dir / "baseline";
    RunOptions tracked = options;
    tracked.baseline = false;
    tracked.out_dir = dir / "tracked";
    RunReport b, t;
    // Alternate the order so drift does not favour one side.
    if (r % 2 == 0) {
      b = run_workload(spec, cfg, base);
      t = run_workload(spec, cfg, tracked);
    } else {
      t = run_workload(spec, cfg, tracked);
      b = run_workload(spec, cfg, base);
    }
    out.baseline_ms.push_back(b.baseline_ms);
    out.tracked_ms.push_back(t.tracked_ms);
    out.ratios.push_back(t.tracked_ms / b.baseline_ms);
    sum += out.ratios.back();
    out.provenance_bytes = t.provenance_bytes;
  }
  out.mean_ratio = sum / repetitions;
  return out;
}

namespace {

nlohmann::ordered_json spec_json(const WorkloadSpec& s) {
  nlohmann::ordered_json j;
  j["workload"] = std::string(workload_name(s.kind));
  j["seed"] = s.seed;
  switch (s.kind) {
    case WorkloadKind::Dassa:
      j["input_files"] = s.input_files;
      break;
    case WorkloadKind::H5bench:
      j["pattern"] = std::string(pattern_name(s.pattern));
      j["workers"] = s.workers;
      j["ops_per_worker"] = s.ops_per_worker;
      j["compute_ms"] = s.compute_ms;
      break;
    case WorkloadKind::Topreco:
      j["epochs"] = s.epochs;
      j["config_fields"] = s.config_fields;
      break;
    case WorkloadKind::Megatron:
      j["iterations"] = s.iterations;
      j["batch_sizes"] = s.batch_sizes;
      j["checkpoints"] = s.checkpoints;
      break;
  }
  return j;
}

}  // namespace

std::string RunReport::to_json() const {
  nlohmann::ordered_json j;
  j["spec"] = spec_json(spec);
  j["baseline_ms"] = baseline_ms;
  j["tracked_ms"] = tracked_ms;
  j["triple_count"] = triple_count;
  j["provenance_bytes"] = provenance_bytes;
  nlohmann::ordered_json counts = nlohmann::ordered_json::object();
  for (const auto& [cls, n] : event_counts) counts[std::string(sub_class_name(cls))] = n;
  j["event_counts"] = counts;
  j["merged_file"] = merged_file.string();
  return j.dump(2) + "\n";
}

std::string OverheadReport::to_json() const {
  nlohmann::ordered_json j;
  j["baseline_ms"] = baseline_ms;
  j["tracked_ms"] = tracked_ms;
  j["ratios"] = ratios;
  j["mean_ratio"] = mean_ratio;
  j["provenance_bytes"] = provenance_bytes;
  return j.dump(2) + "\n";
}

std::string reports_tsv(const std::vector<RunReport>& reports) {
  std::string out = "workload\tscale\ttriples\tbytes\ttracked_ms\tbaseline_ms\tevents\n";
  for (const auto& r : reports) {
    std::uint64_t events = 0;
    for (const auto& [cls, n] : r.event_counts) events += n;
    char ms[64];
    std::snprintf(ms, sizeof ms, "%.3f\t%.3f", r.tracked_ms, r.baseline_ms);
    out += std::string(workload_name(r.spec.kind)) + "\t" + std::to_string(r.spec.scale()) +
           "\t" + std::to_string(r.triple_count) + "\t" + std::to_string(r.provenance_bytes) +
           "\t" + ms + "\t" + std::to_string(events) + "\n";
  }
  return out;
}

}  // namespace provio
