#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "provio/clock.hpp"
#include "provio/config.hpp"
#include "provio/model.hpp"

namespace provio {

enum class WorkloadKind { Dassa, H5bench, Topreco, Megatron };
enum class H5Pattern { WriteRead, WriteOverwriteRead, WriteAppendRead };

std::string_view workload_name(WorkloadKind k);
std::optional<WorkloadKind> parse_workload(std::string_view name);
std::string_view pattern_name(H5Pattern p);  // "write+read", ...
std::optional<H5Pattern> parse_pattern(std::string_view name);

struct WorkloadSpec {
  WorkloadKind kind = WorkloadKind::H5bench;
  std::string user = "Bob";
  std::uint64_t seed = 1;

  // dassa: one tdms2h5 process and one decimate process per input file.
  // Input i is "WestSac.tdms" for i = 0, else "WestSac_<i>.tdms"; outputs
  // follow the same scheme ("decimate.h5", "decimate_<i>.h5").
  unsigned input_files = 1;

  // h5bench: W workers share one container; each creates ops_per_worker
  // datasets under "/rank_<w>", sleeping compute_ms before each step.
  H5Pattern pattern = H5Pattern::WriteRead;
  unsigned workers = 2;
  unsigned ops_per_worker = 4;
  unsigned compute_ms = 0;
  std::size_t payload_bytes = 1024;

  // topreco: E epochs, C configuration nodes.
  unsigned epochs = 4;
  unsigned config_fields = 3;

  // megatron: I iterations, one Configuration per batch size, and
  // `checkpoints` checkpoints spread evenly over the run.
  unsigned iterations = 10;
  std::vector<std::int64_t> batch_sizes{128, 256};
  unsigned checkpoints = 3;

  // Throws std::invalid_argument for zero counts or an empty batch list.
  void validate() const;
  // The parameter the workload scales with (N, W, E or I).
  unsigned scale() const;
};

// One facade call as issued by the workload, independent of tracking.
struct EventRecord {
  std::uint32_t rank;
  SubClass api_class;
  SubClass target_class;
  std::string target;
};

struct RunOptions {
  // Sub-graph files, merged.ttl and the data sandbox ("data/") go here.
  std::filesystem::path out_dir;
  // Clock for the session of a given rank; SteadyClock when unset.
  std::function<std::shared_ptr<Clock>(std::uint32_t rank)> clock_for_rank;
  // No sessions at all: the untracked reference run.
  bool baseline = false;
};

struct RunReport {
  WorkloadSpec spec;
  double baseline_ms = 0;
  double tracked_ms = 0;
  std::size_t triple_count = 0;
  std::uint64_t provenance_bytes = 0;
  // Issued events whose Activity class is enabled.
  std::map<SubClass, std::uint64_t> event_counts;
  std::vector<EventRecord> events;  // every issued call, per-rank order
  std::filesystem::path merged_file;

  std::string to_json() const;
};

// Runs the workload through the I/O facade with one Session per process,
// merges the sub-graph files into <out_dir>/merged.ttl and reports. Throws
// std::runtime_error when out_dir already holds sub-graph files.
RunReport run_workload(const WorkloadSpec& spec, const TrackingConfig& cfg,
                       const RunOptions& options);

struct OverheadReport {
  std::vector<double> baseline_ms;
  std::vector<double> tracked_ms;
  std::vector<double> ratios;  // tracked / baseline per repetition
  double mean_ratio = 0;
  std::uint64_t provenance_bytes = 0;

  std::string to_json() const;
};

// Interleaves baseline and tracked runs `repetitions` times (>= 3) in fresh
// subdirectories of options.out_dir.
OverheadReport measure_overhead(const WorkloadSpec& spec, const TrackingConfig& cfg,
                                unsigned repetitions, const RunOptions& options);

// Plot-ready table, one row per report.
std::string reports_tsv(const std::vector<RunReport>& reports);

// Tracking config for file-level lineage: every Activity and Agent class,
// the File entity only, no Extensible classes.
TrackingConfig file_lineage_config();

}  // namespace provio
