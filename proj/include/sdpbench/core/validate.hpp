// Structural checks for pipelines and infrastructure descriptions.

#pragma once

#include <set>
#include <string>
#include <vector>

#include "sdpbench/core/types.hpp"

namespace sdpbench {

enum class ViolationKind {
  FunctionCountMismatch,
  StageCountMismatch,
  InvalidFunction,
  StorageKindMismatch,
  InvalidCapacity,
  DanglingStorage,
  DuplicateName,
  InvalidTier,
  MissingLink,
  InvalidLink,
};

struct Violation {
  ViolationKind kind;
  std::string message;
};

inline std::vector<Violation> validate_pipeline(const PipelineSpec& spec) {
  std::vector<Violation> out;
  const auto expected = expected_function_count(spec.application, spec.strategy);
  if (spec.function_count != expected)
    out.push_back({ViolationKind::FunctionCountMismatch,
                   std::string(to_string(spec.application)) + "/" +
                       std::string(to_string(spec.strategy)) + " requires " +
                       std::to_string(expected) + " functions, got " +
                       std::to_string(spec.function_count)});
  if (spec.stages.size() != spec.function_count)
    out.push_back({ViolationKind::StageCountMismatch,
                   "function_count " + std::to_string(spec.function_count) + " but " +
                       std::to_string(spec.stages.size()) + " stages"});

  std::set<std::string> names;
  for (const auto& f : spec.stages) {
    if (!names.insert(f.name).second)
      out.push_back({ViolationKind::DuplicateName, "duplicate function '" + f.name + "'"});
    if (f.base_time < 0 || f.per_byte_time < 0 || f.output_ratio <= 0 || f.replicas < 1 ||
        f.fan_out < 1 || f.cold_start_penalty < 0)
      out.push_back({ViolationKind::InvalidFunction, "function '" + f.name + "' has invalid parameters"});
  }

  const auto want_kind = storage_kind_for(spec.strategy);
  for (const auto& su : spec.storage_units) {
    if (!names.insert(su.name).second)
      out.push_back({ViolationKind::DuplicateName, "duplicate storage unit '" + su.name + "'"});
    if (su.kind != want_kind)
      out.push_back({ViolationKind::StorageKindMismatch,
                     "storage unit '" + su.name + "' is a " + std::string(to_string(su.kind)) +
                         ", strategy " + std::string(to_string(spec.strategy)) + " needs " +
                         std::string(to_string(want_kind))});
    if (su.capacity && *su.capacity < 1)
      out.push_back({ViolationKind::InvalidCapacity, "storage unit '" + su.name + "' has capacity 0"});
    if (su.feeds_stage && *su.feeds_stage >= spec.stages.size())
      out.push_back({ViolationKind::DanglingStorage,
                     "storage unit '" + su.name + "' feeds missing stage " +
                         std::to_string(*su.feeds_stage)});
  }
  return out;
}

inline std::vector<Violation> validate_infrastructure(const std::vector<Tier>& tiers,
                                                      const std::vector<NetworkLink>& links) {
  std::vector<Violation> out;
  for (const auto& t : tiers) {
    if (t.cpu_cores < 1 || t.disk_read_rate <= 0 || t.disk_write_rate <= 0 || t.mem_capacity == 0)
      out.push_back({ViolationKind::InvalidTier, "tier '" + std::string(to_string(t.kind)) +
                                                     "' needs cpu_cores >= 1 and positive rates"});
  }
  auto has = [&](TierKind a, TierKind b) {
    for (const auto& l : links)
      if (l.from == a && l.to == b) return true;
    return false;
  };
  for (const auto& l : links)
    if (l.bandwidth <= 0 || l.latency < 0)
      out.push_back({ViolationKind::InvalidLink, "link " + std::string(to_string(l.from)) + "->" +
                                                     std::string(to_string(l.to)) +
                                                     " needs bandwidth > 0 and latency >= 0"});
  if (!has(TierKind::Edge, TierKind::Fog))
    out.push_back({ViolationKind::MissingLink, "missing edge->fog link"});
  if (!has(TierKind::Fog, TierKind::Cloud))
    out.push_back({ViolationKind::MissingLink, "missing fog->cloud link"});
  return out;
}

}  // namespace sdpbench
