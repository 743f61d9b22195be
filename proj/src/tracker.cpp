#include "provio/tracker.hpp"

#include <fstream>
#include <stdexcept>
#include <system_error>

#include "provio/turtle.hpp"

namespace provio {

std::unique_ptr<Session> Session::begin(AgentContext ctx, TrackingConfig cfg,
                                        std::shared_ptr<Clock> clock) {
  cfg.validate();
  if (ctx.user.empty() || ctx.program.empty()) {
    throw std::invalid_argument("agent context needs a user and a program name");
  }
  if (!clock) clock = std::make_shared<SteadyClock>();

  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  auto probe = cfg.output_dir /
               (".probe_" + ctx.program + "_" + std::to_string(ctx.rank));
  {
    std::ofstream out(probe, std::ios::trunc);
    if (!out) {
      throw std::runtime_error("output directory is not writable: " +
                               cfg.output_dir.string());
    }
  }
  std::filesystem::remove(probe, ec);

  std::unique_ptr<Session> s(new Session(std::move(ctx), std::move(cfg), std::move(clock)));
  s->seed_agents();
  if (s->cfg_.flush.periodic) {
    s->flusher_ = std::jthread([raw = s.get()](std::stop_token st) { raw->run_flusher(st); });
  }
  return s;
}

Session::Session(AgentContext ctx, TrackingConfig cfg, std::shared_ptr<Clock> clock)
    : ctx_(std::move(ctx)), cfg_(std::move(cfg)), clock_(std::move(clock)) {}

Session::~Session() {
  if (!ended_) {
    try {
      end();
    } catch (...) {
    }
  }
}

void Session::seed_agents() {
  std::optional<Guid> user;
  std::optional<Guid> middle;
  auto add = [&](SubClass sub, const std::string& label) {
    ProvNode node = make_node(sub, label, ctx_);
    graph_.add_node(node);
    return node.guid;
  };
  if (cfg_.is_enabled(SubClass::User)) user = add(SubClass::User, ctx_.user);
  // The process-level agent between program and user: the thread when
  // tracked, otherwise the rank.
  if (cfg_.is_enabled(SubClass::Thread)) {
    middle = add(SubClass::Thread, ctx_.effective_thread_label());
  } else if (cfg_.is_enabled(SubClass::Rank)) {
    middle = add(SubClass::Rank, "rank_" + std::to_string(ctx_.rank));
  }
  if (cfg_.is_enabled(SubClass::Program)) program_ = add(SubClass::Program, ctx_.program);

  if (middle && user) graph_.add_triple({*middle, Predicate::ActedOnBehalfOf, *user});
  if (!program_.empty()) {
    if (middle) {
      graph_.add_triple({program_, Predicate::ActedOnBehalfOf, *middle});
    } else if (user) {
      graph_.add_triple({program_, Predicate::ActedOnBehalfOf, *user});
    }
  }
}

std::shared_ptr<Session::ObjectSlot> Session::acquire_slot(const SlotKey& key) {
  std::lock_guard lock(registry_mutex_);
  auto& slot = registry_[key];
  if (!slot) slot = std::make_shared<ObjectSlot>();
  ++slot->in_flight;
  return slot;
}

void Session::release_slot(const SlotKey& key) {
  std::lock_guard lock(registry_mutex_);
  auto it = registry_.find(key);
  if (it == registry_.end()) return;
  if (--it->second->in_flight == 0 && it->second->open_handles == 0) {
    registry_.erase(it);
  }
}

std::optional<Guid> Session::record_io(const IoEvent& ev) noexcept {
  try {
    if (ended_) {
      ++diagnostics_;
      return std::nullopt;
    }
    if (super_of(ev.api_class) != SuperClass::Activity ||
        super_of(ev.target_class) != SuperClass::Entity) {
      ++diagnostics_;
      return std::nullopt;
    }
    if (!cfg_.is_enabled(ev.api_class)) return std::nullopt;

    SlotKey key{ev.target_class, ev.target_path};
    auto slot = acquire_slot(key);
    std::optional<Guid> out;
    try {
      std::lock_guard object_lock(slot->mutex);
      std::uint64_t seq = ++seq_;
      ProvNode act = make_node(ev.api_class, ev.api_name, ctx_, seq);
      std::lock_guard graph_lock(graph_mutex_);
      graph_.add_node(act);
      graph_.add_triple({act.guid, Predicate::WasAssociatedWith, program_});
      if (cfg_.track_duration && ev.duration_us) {
        graph_.add_triple({act.guid, Predicate::Elapsed, Literal::integer(*ev.duration_us)});
      }
      if (cfg_.is_enabled(ev.target_class)) {
        ProvNode entity = make_node(ev.target_class, ev.target_path, ctx_);
        graph_.add_node(entity);
        graph_.add_triple({entity.guid, relation_for_io(ev.api_class), act.guid});
        graph_.add_triple({entity.guid, Predicate::WasAttributedTo, program_});
      }
      out = act.guid;
    } catch (...) {
      release_slot(key);
      throw;
    }
    release_slot(key);
    return out;
  } catch (...) {
    ++diagnostics_;
    return std::nullopt;
  }
}

Guid Session::record_extensible(SubClass kind, std::string_view name,
                                const PropertyList& payload, const LinkList& links) {
  if (super_of(kind) != SuperClass::Extensible) {
    throw std::invalid_argument(std::string(sub_class_name(kind)) +
                                " is not an Extensible sub-class");
  }
  for (const auto& [p, lit] : payload) {
    if (!is_property(p) || p == Predicate::SubClassOf || p == Predicate::Elapsed) {
      throw std::invalid_argument(std::string(predicate_name(p)) +
                                  " is not a user property");
    }
  }
  for (const auto& [p, target] : links) {
    if (is_property(p)) {
      throw std::invalid_argument(std::string(predicate_name(p)) +
                                  " is a property, not a relation");
    }
  }
  if (!cfg_.is_enabled(kind)) return untracked();

  ProvNode node = make_node(kind, name, ctx_);
  std::lock_guard lock(graph_mutex_);
  graph_.add_node(node);
  for (const auto& [p, lit] : payload) graph_.add_triple({node.guid, p, lit});
  for (const auto& [p, target] : links) {
    if (is_untracked(target) || !graph_.find_node(target)) continue;
    graph_.add_triple({node.guid, p, target});
  }
  return node.guid;
}

bool Session::record_link(const Guid& subject, Predicate predicate, const Guid& object) {
  if (is_property(predicate)) {
    throw std::invalid_argument(std::string(predicate_name(predicate)) +
                                " is a property, not a relation");
  }
  if (is_untracked(subject) || is_untracked(object)) return false;
  std::lock_guard lock(graph_mutex_);
  if (!graph_.find_node(subject) || !graph_.find_node(object)) return false;
  graph_.add_triple({subject, predicate, object});
  return true;
}

ProvGraph Session::snapshot() const {
  std::lock_guard lock(graph_mutex_);
  return graph_;
}

std::filesystem::path Session::output_file() const {
  return cfg_.output_dir / subgraph_file_name(ctx_.program, ctx_.rank);
}

std::filesystem::path Session::flush() {
  std::lock_guard lock(flush_mutex_);
  ProvGraph snap = snapshot();
  auto path = output_file();
  write_turtle_file(path, snap);
  ++flushes_;
  return path;
}

void Session::run_flusher(std::stop_token stop) {
  auto interval = std::chrono::duration_cast<std::chrono::microseconds>(
                      cfg_.flush.interval).count();
  std::int64_t next = clock_->now_us() + interval;
  while (clock_->wait_until(next, stop)) {
    try {
      flush();
    } catch (...) {
      ++diagnostics_;
    }
    next += interval;
  }
}

std::filesystem::path Session::end() {
  std::lock_guard lock(end_mutex_);
  if (ended_.exchange(true)) throw std::logic_error("session already ended");
  if (flusher_.joinable()) {
    flusher_.request_stop();
    flusher_.join();
  }
  {
    std::lock_guard reg(registry_mutex_);
    registry_.clear();
  }
  return flush();
}

void Session::object_opened(SubClass kind, const std::string& path) {
  std::lock_guard lock(registry_mutex_);
  auto& slot = registry_[{kind, path}];
  if (!slot) slot = std::make_shared<ObjectSlot>();
  ++slot->open_handles;
}

void Session::object_closed(SubClass kind, const std::string& path) {
  std::lock_guard lock(registry_mutex_);
  auto it = registry_.find({kind, path});
  if (it == registry_.end() || it->second->open_handles == 0) return;
  if (--it->second->open_handles == 0 && it->second->in_flight == 0) {
    registry_.erase(it);
  }
}

std::size_t Session::open_object_count() const {
  std::lock_guard lock(registry_mutex_);
  std::size_t n = 0;
  for (const auto& [key, slot] : registry_) {
    if (slot->open_handles > 0) ++n;
  }
  return n;
}

}  // namespace provio
