// Application profiles, request generation and pipeline topologies.

#pragma once

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdpbench/backends/params.hpp"
#include "sdpbench/core/types.hpp"
#include "sdpbench/kernel/kernel.hpp"
#include "sdpbench/sim/run_context.hpp"

namespace sdpbench {

class LoadError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::uint32_t kMinFps = 1;
inline constexpr std::uint32_t kMaxFps = 15;

enum class AppTag : std::uint8_t { LC, BI, LA, CI };

inline std::string_view to_string(AppTag t) {
  switch (t) {
    case AppTag::LC: return "LC";
    case AppTag::BI: return "BI";
    case AppTag::LA: return "LA";
    case AppTag::CI: return "CI";
  }
  return "?";
}

enum class SizeKind : std::uint8_t { Fixed, Uniform, LogNormal };

/// Fixed: a = bytes. Uniform: [a, b] bytes. LogNormal: a = mu, b = sigma of ln(bytes).
struct SizeDistribution {
  SizeKind kind = SizeKind::Fixed;
  double a = 1'000'000;
  double b = 0;

  Bytes draw(std::mt19937_64& rng) const {
    double v = a;
    switch (kind) {
      case SizeKind::Fixed: break;
      case SizeKind::Uniform: v = std::uniform_real_distribution<double>(a, b)(rng); break;
      case SizeKind::LogNormal: v = std::lognormal_distribution<double>(a, b)(rng); break;
    }
    return std::max<Bytes>(1, static_cast<Bytes>(std::llround(v)));
  }
};

/// Cost model of one function as it appears in the calibration.
struct FunctionCost {
  Seconds base_time = 0;
  double per_byte_time = 0;
  Bytes mem_footprint = 0;
  double output_ratio = 1.0;
  std::uint32_t replicas = 1;
  TierKind tier = TierKind::Fog;
  Seconds cold_start_penalty = 0;
};

struct ApplicationProfile {
  Application application = Application::Aeneas;
  SizeDistribution unit_size;
  std::set<AppTag> tags;
  std::map<std::string, FunctionCost> functions;
  Seconds clip_seconds = 10;  // video only
};

struct Calibration {
  std::string version = "1";
  std::vector<Tier> tiers;
  std::vector<NetworkLink> links;
  BackendParams backend;
  std::map<Application, ApplicationProfile> profiles;
  std::vector<std::string> fitted;  // keys whose values were tuned by simulation

  const ApplicationProfile& profile(Application a) const {
    auto it = profiles.find(a);
    if (it == profiles.end())
      throw std::out_of_range("no profile for application " + std::string(to_string(a)));
    return it->second;
  }
};

// ---------------------------------------------------------------------------
// Topologies. Stage names per strategy; storage names are derived from them.

struct StageLayout {
  std::string function;
  /// Storage unit in front of this stage; empty for a direct call.
  std::string input;
  std::uint32_t fan_out = 1;
};

struct TopologyLayout {
  std::vector<StageLayout> stages;
  std::vector<std::string> sinks;  // cloud-side destinations
};

inline TopologyLayout layout_for(Application app, Strategy s) {
  auto queued = [](std::vector<std::string> fns, std::string prefix, std::vector<std::string> sinks) {
    TopologyLayout l;
    for (auto& f : fns) l.stages.push_back({f, prefix + f, 1});
    l.sinks = std::move(sinks);
    return l;
  };
  switch (s) {
    case Strategy::DFT:
      switch (app) {
        case Application::Aeneas: return queued({"fetch_text", "aeneas_align"}, "q.", {"q.sink"});
        case Application::PocketSphinx:
          return queued({"pocketsphinx", "text_search", "to_json"}, "q.", {"q.sink"});
        case Application::Video: return queued({"split", "yolo", "to_json"}, "q.", {"q.sink"});
      }
      break;
    case Strategy::MQTT:
      switch (app) {
        case Application::Aeneas: return queued({"fetch_text", "aeneas_align"}, "t.", {"t.sink"});
        case Application::PocketSphinx:
          return queued({"pocketsphinx", "text_search", "to_json"}, "t.", {"t.sink"});
        case Application::Video: return queued({"split", "yolo", "to_json"}, "t.", {"t.sink"});
      }
      break;
    case Strategy::OSS:
      switch (app) {
        case Application::Aeneas:
          return {{{"decompress", ""},
                   {"fetch_audio", "raw-audio"},
                   {"aeneas_align", ""},
                   {"fetch_syncmap", "syncmap"},
                   {"to_json", ""}},
                  {"aeneas-results"}};
        case Application::PocketSphinx:
          return {{{"decompress", ""},
                   {"fetch_raw", "raw"},
                   {"pocketsphinx", ""},
                   {"fetch_text", "processed"},
                   {"text_search", ""},
                   {"to_json", "output"}},
                  {"success", "failure"}};
        case Application::Video:
          return {{{"decompress", ""},
                   {"split", ""},
                   {"fetch_frame", "unprocessed"},
                   {"yolo", ""},
                   {"fetch_result", "processed"},
                   {"to_json", ""}},
                  {"video-results"}};
      }
      break;
  }
  throw std::logic_error("no layout");
}

/// Frames produced per video chunk by the split stage.
inline std::uint32_t video_stage_multiplier(std::uint32_t fps, Seconds clip_seconds = 10) {
  if (fps < kMinFps || fps > kMaxFps)
    throw LoadError("fps must be in [1, 15], got " + std::to_string(fps));
  if (!(clip_seconds > 0)) throw LoadError("clip_seconds must be positive");
  return static_cast<std::uint32_t>(std::llround(fps * clip_seconds));
}

inline PipelineSpec build_pipeline(const Calibration& cal, Application app, Strategy s, std::uint32_t fps = 1) {
  const auto& prof = cal.profile(app);
  const auto layout = layout_for(app, s);
  PipelineSpec spec;
  spec.application = app;
  spec.strategy = s;
  spec.function_count = layout.stages.size();
  const auto kind = storage_kind_for(s);
  for (std::size_t k = 0; k < layout.stages.size(); ++k) {
    const auto& st = layout.stages[k];
    auto it = prof.functions.find(st.function);
    if (it == prof.functions.end())
      throw std::out_of_range("calibration lacks function '" + st.function + "' for " +
                              std::string(to_string(app)));
    const auto& c = it->second;
    FunctionSpec f;
    f.name = st.function;
    f.tier_placement = c.tier;
    f.base_time = c.base_time;
    f.per_byte_time = c.per_byte_time;
    f.mem_footprint = c.mem_footprint;
    f.output_ratio = c.output_ratio;
    f.replicas = c.replicas;
    f.cold_start_penalty = c.cold_start_penalty;
    f.invocation_mode = s == Strategy::MQTT ? InvocationMode::Async : InvocationMode::Sync;
    if (app == Application::Video && st.function == "split")
      f.fan_out = video_stage_multiplier(fps, prof.clip_seconds);
    spec.stages.push_back(std::move(f));
    if (!st.input.empty()) {
      StorageUnitSpec su;
      su.name = st.input;
      su.kind = kind;
      su.tier_placement = TierKind::Fog;
      su.feeds_stage = k;
      if (s == Strategy::DFT) su.capacity = cal.backend.dft.queue_capacity;
      if (s == Strategy::MQTT) su.capacity = cal.backend.mqtt.topic_capacity;
      spec.storage_units.push_back(std::move(su));
    }
  }
  for (const auto& sink : layout.sinks) {
    StorageUnitSpec su;
    su.name = sink;
    su.kind = kind;
    // The MQTT broker lives on the fog; its sink subscriber ships results to the cloud.
    su.tier_placement = s == Strategy::MQTT ? TierKind::Fog : TierKind::Cloud;
    if (s == Strategy::MQTT) su.capacity = cal.backend.mqtt.topic_capacity;
    spec.storage_units.push_back(std::move(su));
  }
  return spec;
}

// ---------------------------------------------------------------------------
// Load.

enum class ArrivalPattern : std::uint8_t { Burst, Poisson };

struct LoadSpec {
  std::uint32_t n_users = 1;
  ArrivalPattern pattern = ArrivalPattern::Burst;
  double rate = 1.0;  // requests/second, Poisson only
  std::uint32_t fps = 1;
  std::uint64_t seed = 1;
};

struct RequestArrival {
  Seconds at = 0;
  Bytes size = 0;
};

inline void validate_load(const ApplicationProfile& profile, const LoadSpec& load) {
  if (load.n_users < 1) throw LoadError("n_users must be >= 1");
  if (load.pattern == ArrivalPattern::Poisson && !(load.rate > 0))
    throw LoadError("poisson rate must be positive");
  if (profile.application == Application::Video && (load.fps < kMinFps || load.fps > kMaxFps))
    throw LoadError("fps must be in [1, 15], got " + std::to_string(load.fps));
}

/// Seeded request stream, ordered by arrival time.
inline std::vector<RequestArrival> generate_requests(const ApplicationProfile& profile, const LoadSpec& load) {
  validate_load(profile, load);
  RandomStreams streams(load.seed);
  auto arrivals = streams.stream("workload.arrivals");
  auto sizes = streams.stream("workload.sizes");
  std::exponential_distribution<double> gap(load.rate);
  std::vector<RequestArrival> out;
  out.reserve(load.n_users);
  Seconds t = 0;
  for (std::uint32_t i = 0; i < load.n_users; ++i) {
    if (load.pattern == ArrivalPattern::Poisson && i > 0) t += gap(arrivals);
    out.push_back({t, profile.unit_size.draw(sizes)});
  }
  return out;
}

}  // namespace sdpbench
