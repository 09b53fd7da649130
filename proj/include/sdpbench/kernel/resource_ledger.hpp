// Per-tier resource accounting: CPU busy time, memory occupancy, disk and network bytes.

#pragma once

#include <algorithm>
#include <array>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sdpbench/core/types.hpp"

namespace sdpbench {

struct TierCounters {
  Seconds cpu_busy_seconds = 0;
  Bytes mem_current = 0;
  Bytes mem_peak = 0;
  Bytes disk_read_bytes = 0;
  Bytes disk_write_bytes = 0;
  Bytes net_rx_bytes = 0;
  Bytes net_tx_bytes = 0;
};

class ResourceLedger {
 public:
  explicit ResourceLedger(std::vector<Tier> tiers) {
    for (const auto& t : tiers) tiers_[index_of(t.kind)] = t;
  }

  const Tier& tier(TierKind k) const { return tiers_[index_of(k)]; }
  const TierCounters& counters(TierKind k) const { return counters_[index_of(k)]; }

  void add_cpu(TierKind k, Seconds busy) {
    if (busy < 0) throw std::invalid_argument("negative cpu busy time");
    counters_[index_of(k)].cpu_busy_seconds += busy;
  }

  void mem_acquire(TierKind k, Bytes bytes, Seconds at) {
    auto& c = counters_[index_of(k)];
    c.mem_current += bytes;
    c.mem_peak = std::max(c.mem_peak, c.mem_current);
    record_mem(k, at);
  }

  void mem_release(TierKind k, Bytes bytes, Seconds at) {
    auto& c = counters_[index_of(k)];
    if (bytes > c.mem_current) throw std::logic_error("memory release exceeds current occupancy");
    c.mem_current -= bytes;
    record_mem(k, at);
  }

  void add_disk_read(TierKind k, Bytes bytes) { counters_[index_of(k)].disk_read_bytes += bytes; }
  void add_disk_write(TierKind k, Bytes bytes) { counters_[index_of(k)].disk_write_bytes += bytes; }

  void add_net(TierKind from, TierKind to, Bytes bytes) {
    counters_[index_of(from)].net_tx_bytes += bytes;
    counters_[index_of(to)].net_rx_bytes += bytes;
    link_bytes_[index_of(from)][index_of(to)] += bytes;
  }

  /// Bytes arriving from outside the modeled tiers (the sensors).
  void add_rx(TierKind k, Bytes bytes) { counters_[index_of(k)].net_rx_bytes += bytes; }

  Bytes link_bytes(TierKind from, TierKind to) const {
    return link_bytes_[index_of(from)][index_of(to)];
  }

  void set_window(Seconds start, Seconds end) { window_ = {start, end}; }
  std::pair<Seconds, Seconds> window() const { return window_; }

  /// Integral of occupied bytes over [from, to], from the recorded step function.
  double mem_byte_seconds(TierKind k, Seconds from, Seconds to) const {
    const auto& steps = mem_steps_[index_of(k)];
    double total = 0;
    for (std::size_t i = 0; i < steps.size(); ++i) {
      const Seconds seg_start = std::max(steps[i].first, from);
      const Seconds seg_end = std::min(i + 1 < steps.size() ? steps[i + 1].first : to, to);
      if (seg_end > seg_start) total += static_cast<double>(steps[i].second) * (seg_end - seg_start);
    }
    return total;
  }

 private:
  void record_mem(TierKind k, Seconds at) {
    auto& steps = mem_steps_[index_of(k)];
    const auto value = counters_[index_of(k)].mem_current;
    if (!steps.empty() && steps.back().first == at)
      steps.back().second = value;
    else
      steps.emplace_back(at, value);
  }

  std::array<Tier, 3> tiers_{};
  std::array<TierCounters, 3> counters_{};
  std::array<std::vector<std::pair<Seconds, Bytes>>, 3> mem_steps_{};
  std::array<std::array<Bytes, 3>, 3> link_bytes_{};
  std::pair<Seconds, Seconds> window_{0, 0};
};

class MetricError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// 100 * busy / (cores * window), clamped to [0, 100].
inline double cpu_utilization(const ResourceLedger& ledger, TierKind k) {
  const auto [start, end] = ledger.window();
  if (!(end > start)) throw MetricError("cpu_utilization needs a non-empty window");
  const auto cores = ledger.tier(k).cpu_cores;
  const double pct = 100.0 * ledger.counters(k).cpu_busy_seconds /
                     (static_cast<double>(cores) * (end - start));
  return std::clamp(pct, 0.0, 100.0);
}

/// Time-weighted mean of occupied memory over the window, as percent of capacity.
inline double memory_utilization(const ResourceLedger& ledger, TierKind k) {
  const auto capacity = ledger.tier(k).mem_capacity;
  if (capacity == 0) throw MetricError("memory_utilization needs mem_capacity > 0");
  const auto [start, end] = ledger.window();
  if (!(end > start)) throw MetricError("memory_utilization needs a non-empty window");
  const double mean = ledger.mem_byte_seconds(k, start, end) / (end - start);
  return 100.0 * mean / static_cast<double>(capacity);
}

}  // namespace sdpbench
