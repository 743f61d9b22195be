#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "provio/clock.hpp"
#include "provio/config.hpp"
#include "provio/graph.hpp"
#include "provio/model.hpp"

namespace provio {

// One intercepted I/O call.
struct IoEvent {
  std::string api_name;       // "posix_write", "H5Dcreate2", ...
  SubClass api_class;         // an Activity sub-class
  SubClass target_class;      // an Entity sub-class
  std::string target_path;    // canonical path, becomes the entity GUID
  std::optional<std::int64_t> duration_us;
};

using PropertyList = std::vector<std::pair<Predicate, Literal>>;
using LinkList = std::vector<std::pair<Predicate, Guid>>;

// Per-process provenance capture. Owns the in-memory sub-graph for one
// (program, rank) and writes it to <output_dir>/prov_<program>_<rank>.ttl.
//
// record_io and record_extensible may be called from any thread. The graph
// is guarded by one mutex; events touching the same data object are further
// serialized by that object's slot lock.
class Session {
 public:
  // Validates `cfg`, creates the output directory and seeds the agent
  // chain. Throws std::invalid_argument for a bad config and
  // std::runtime_error when the output directory is not writable.
  static std::unique_ptr<Session> begin(AgentContext ctx, TrackingConfig cfg,
                                        std::shared_ptr<Clock> clock = nullptr);

  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;
  // Ends the session if still live; errors are swallowed.
  ~Session();

  const AgentContext& context() const { return ctx_; }
  const TrackingConfig& config() const { return cfg_; }
  Clock& clock() const { return *clock_; }

  bool tracks(SubClass s) const { return cfg_.is_enabled(s); }
  // True when the facade should time calls of this class.
  bool times(SubClass api_class) const {
    return cfg_.track_duration && cfg_.is_enabled(api_class);
  }

  // Never throws. Returns the minted activity GUID, or nullopt when the
  // class is disabled or recording failed (counted in diagnostics()).
  std::optional<Guid> record_io(const IoEvent& ev) noexcept;

  // Adds an Extensible node with property triples and outgoing links.
  // Returns untracked() when `kind` is disabled. Links whose target is
  // untracked or absent are skipped. Throws std::invalid_argument when a
  // payload predicate is not a user property, GraphError on domain errors.
  Guid record_extensible(SubClass kind, std::string_view name,
                         const PropertyList& payload, const LinkList& links = {});

  // Adds one relation between two already-recorded nodes; skipped (false)
  // when either end is untracked or unknown.
  bool record_link(const Guid& subject, Predicate predicate, const Guid& object);

  static bool is_untracked(const Guid& g) { return g.empty(); }
  static Guid untracked() { return Guid(); }

  // GUIDs of the agent nodes seeded at begin(); empty when disabled.
  const Guid& program_guid() const { return program_; }

  // Serializes a snapshot atomically and returns the file path. The graph
  // stays in memory. Throws on I/O failure; the session stays usable.
  std::filesystem::path flush();

  // Stops the periodic flusher, flushes, drains open objects. A second call
  // throws std::logic_error.
  std::filesystem::path end();
  bool ended() const { return ended_.load(); }

  // Facade bookkeeping for live handles.
  void object_opened(SubClass kind, const std::string& path);
  void object_closed(SubClass kind, const std::string& path);
  std::size_t open_object_count() const;

  ProvGraph snapshot() const;
  std::filesystem::path output_file() const;
  std::uint64_t diagnostics() const { return diagnostics_.load(); }
  std::uint64_t flush_count() const { return flushes_.load(); }
  std::uint64_t activity_count() const { return seq_.load(); }

 private:
  Session(AgentContext ctx, TrackingConfig cfg, std::shared_ptr<Clock> clock);

  struct ObjectSlot {
    std::mutex mutex;
    std::size_t open_handles = 0;
    std::size_t in_flight = 0;
  };
  using SlotKey = std::pair<SubClass, std::string>;

  void seed_agents();
  std::shared_ptr<ObjectSlot> acquire_slot(const SlotKey& key);
  void release_slot(const SlotKey& key);
  void record_locked(const IoEvent& ev);
  void run_flusher(std::stop_token stop);

  AgentContext ctx_;
  TrackingConfig cfg_;
  std::shared_ptr<Clock> clock_;
  Guid program_;

  mutable std::mutex graph_mutex_;
  ProvGraph graph_;

  mutable std::mutex registry_mutex_;
  std::map<SlotKey, std::shared_ptr<ObjectSlot>> registry_;

  std::mutex flush_mutex_;
  std::mutex end_mutex_;
  std::jthread flusher_;

  std::atomic<std::uint64_t> seq_{0};
  std::atomic<std::uint64_t> diagnostics_{0};
  std::atomic<std::uint64_t> flushes_{0};
  std::atomic<bool> ended_{false};
};

}  // namespace provio
