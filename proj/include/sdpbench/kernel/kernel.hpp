// Deterministic discrete-event scheduler.

#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sdpbench/core/types.hpp"

namespace sdpbench {

class SchedulingError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised when a run exceeds its event budget. Whatever was logged so far is kept.
class RunawayError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EventHandle {
  std::uint64_t seq = 0;
};

class Kernel {
 public:
  using Action = std::function<void()>;

  static constexpr std::uint64_t kDefaultEventBudget = 100'000'000;

  explicit Kernel(std::uint64_t event_budget = kDefaultEventBudget) : budget_(event_budget) {}

  Kernel(const Kernel&) = delete;
  Kernel& operator=(const Kernel&) = delete;

  Seconds now() const { return now_; }
  std::uint64_t fired() const { return fired_; }
  std::size_t pending() const { return queue_.size(); }

  EventHandle schedule(Seconds at, Action action) {
    if (at < now_ - kTimeResolution)
      throw SchedulingError("cannot schedule at t=" + std::to_string(at) + " before clock " +
                            std::to_string(now_));
    if (at < now_) at = now_;
    const auto seq = next_seq_++;
    queue_.push(Entry{at, seq, std::move(action)});
    return EventHandle{seq};
  }

  EventHandle schedule_after(Seconds delay, Action action) {
    return schedule(now_ + delay, std::move(action));
  }

  /// Fires events in (time, insertion) order until none remain; returns the final clock.
  Seconds run_until_idle() {
    if (queue_.empty()) throw SchedulingError("run_until_idle called with an empty schedule");
    while (!queue_.empty()) {
      if (fired_ >= budget_)
        throw RunawayError("event budget of " + std::to_string(budget_) + " exceeded at t=" +
                           std::to_string(now_));
      // priority_queue::top is const; the action is moved out via const_cast before pop.
      auto& top = const_cast<Entry&>(queue_.top());
      Action action = std::move(top.action);
      now_ = top.fire_at;
      queue_.pop();
      ++fired_;
      action();
    }
    return now_;
  }

 private:
  struct Entry {
    Seconds fire_at;
    std::uint64_t seq;
    Action action;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      return a.fire_at != b.fire_at ? a.fire_at > b.fire_at : a.seq > b.seq;
    }
  };

  std::priority_queue<Entry, std::vector<Entry>, Later> queue_;
  Seconds now_ = 0;
  std::uint64_t next_seq_ = 0;
  std::uint64_t fired_ = 0;
  std::uint64_t budget_;
};

/// One seed per run, split into independent streams by fixed labels.
class RandomStreams {
 public:
  explicit RandomStreams(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::mt19937_64 stream(std::string_view label) const {
    // FNV-1a over the label keeps the split stable across builds.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : label) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                      static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
    return std::mt19937_64(seq);
  }

 private:
  std::uint64_t seed_;
};

}  // namespace sdpbench
