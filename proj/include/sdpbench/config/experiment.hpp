// Experiment configuration: the calibration in use, the grid to run, and
// where to write results. Sections named like the calibration's (tiers,
// links, backend, profiles) are merged over it field by field.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sdpbench/config/json_fields.hpp"
#include "sdpbench/sim/runner.hpp"
#include "sdpbench/workloads/calibration.hpp"

namespace sdpbench {

inline constexpr std::uint32_t kMaxUsers = 10'000;

struct ExperimentConfig {
  Calibration calibration = default_calibration();
  std::string calibration_path;  // empty: built-in calibration
  std::vector<Strategy> strategies{kAllStrategies.begin(), kAllStrategies.end()};
  std::vector<Application> applications{kAllApplications.begin(), kAllApplications.end()};
  std::vector<std::uint32_t> users{10};
  std::vector<std::uint32_t> fps{1};
  ArrivalPattern pattern = ArrivalPattern::Burst;
  double rate = 1.0;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  std::uint64_t event_budget = Kernel::kDefaultEventBudget;
  unsigned threads = 0;  // 0: one per hardware thread
};

/// "10,50,100", "1..15", "10..300:10", or any comma-separated mix of those.
inline std::vector<std::uint32_t> parse_int_list(const std::string& spec) {
  std::vector<std::uint32_t> out;
  auto to_uint = [&](const std::string& s) -> std::uint32_t {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      throw ParseError("bad number '" + s + "' in list '" + spec + "'");
    const auto v = std::stoull(s);
    if (v > 0xffffffffULL) throw ParseError("number '" + s + "' out of range");
    return static_cast<std::uint32_t>(v);
  };
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_uint(item));
      continue;
    }
    std::string hi = item.substr(dots + 2);
    std::uint32_t step = 1;
    if (auto colon = hi.find(':'); colon != std::string::npos) {
      step = to_uint(hi.substr(colon + 1));
      hi = hi.substr(0, colon);
      if (step == 0) throw ParseError("step must be positive in '" + item + "'");
    }
    const auto a = to_uint(item.substr(0, dots)), b = to_uint(hi);
    if (b < a) throw ParseError("range '" + item + "' is empty");
    for (std::uint64_t v = a; v <= b; v += step) out.push_back(static_cast<std::uint32_t>(v));
  }
  if (out.empty()) throw ParseError("empty list '" + spec + "'");
  return out;
}

inline std::vector<Strategy> parse_strategy_list(const std::string& s) {
  if (detail::lower(s) == "all") return {kAllStrategies.begin(), kAllStrategies.end()};
  std::vector<Strategy> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_strategy(item));
  return out;
}

inline std::vector<Application> parse_application_list(const std::string& s) {
  if (detail::lower(s) == "all") return {kAllApplications.begin(), kAllApplications.end()};
  std::vector<Application> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_application(item));
  return out;
}

inline void check_grid(const ExperimentConfig& c) {
  using config::FieldError;
  if (c.strategies.empty()) throw FieldError("strategies", "must not be empty");
  if (c.applications.empty()) throw FieldError("applications", "must not be empty");
  if (c.users.empty()) throw FieldError("load.users", "must not be empty");
  if (c.fps.empty()) throw FieldError("load.fps", "must not be empty");
  for (auto u : c.users)
    if (u < 1 || u > kMaxUsers) throw FieldError("load.users", "user counts must be in [1, 10000]");
  for (auto f : c.fps)
    if (f < kMinFps || f > kMaxFps) throw FieldError("load.fps", "fps must be in [1, 15]");
  if (c.pattern == ArrivalPattern::Poisson && !(c.rate > 0))
    throw FieldError("load.arrival.rate", "must be > 0");
}

namespace detail {

template <class T, class Parse>
std::vector<T> list_field(const config::Json& v, const std::string& path, Parse parse) {
  std::vector<T> out;
  config::field(path, [&] {
    if (v.is_string()) {
      out = parse(v.get<std::string>());
    } else if (v.is_array()) {
      for (const auto& x : v) {
        auto part = parse(x.is_string() ? x.get<std::string>() : x.dump());
        out.insert(out.end(), part.begin(), part.end());
      }
    } else if (v.is_number_unsigned()) {
      out = parse(v.dump());
    } else {
      throw config::FieldError(path, "expected a list or a string");
    }
    return 0;
  });
  return out;
}

}  // namespace detail

/// Reads an experiment file. Relative calibration paths resolve against the file's directory.
inline ExperimentConfig experiment_from_json(const config::Json& j, const std::filesystem::path& base_dir) {
  using namespace config;
  if (!j.is_object()) throw FieldError("", "experiment config must be a JSON object");
  ExperimentConfig c;
  Json cal = to_json(default_calibration());
  if (auto it = j.find("calibration"); it != j.end()) {
    auto p = std::filesystem::path(text(*it, "calibration"));
    if (p.is_relative()) p = base_dir / p;
    if (!std::filesystem::exists(p)) throw FieldError("calibration", "file '" + p.string() + "' does not exist");
    c.calibration_path = p.string();
    cal = parse_file(p.string());
  }
  Json patch = Json::object();
  for (const char* key : {"tiers", "links", "backend", "profiles"})
    if (auto it = j.find(key); it != j.end()) patch[key] = *it;
  cal.merge_patch(patch);
  c.calibration = calibration_from_json(cal);

  if (auto it = j.find("strategies"); it != j.end())
    c.strategies = detail::list_field<Strategy>(*it, "strategies", parse_strategy_list);
  if (auto it = j.find("applications"); it != j.end())
    c.applications = detail::list_field<Application>(*it, "applications", parse_application_list);
  if (auto it = j.find("seed"); it != j.end()) c.seed = integer(*it, "seed");
  if (auto it = j.find("output_dir"); it != j.end()) c.output_dir = text(*it, "output_dir");
  if (auto it = j.find("threads"); it != j.end()) c.threads = static_cast<unsigned>(integer(*it, "threads"));
  if (auto it = j.find("event_budget"); it != j.end()) c.event_budget = integer(*it, "event_budget", 1);
  if (auto it = j.find("load"); it != j.end()) {
    const auto& load = *it;
    if (!load.is_object()) throw FieldError("load", "expected an object");
    if (auto u = load.find("users"); u != load.end())
      c.users = detail::list_field<std::uint32_t>(*u, "load.users", parse_int_list);
    if (auto f = load.find("fps"); f != load.end())
      c.fps = detail::list_field<std::uint32_t>(*f, "load.fps", parse_int_list);
    if (auto a = load.find("arrival"); a != load.end()) {
      const auto& arr = *a;
      const auto pattern = text(arr.is_object() ? require(arr, "pattern", "load.arrival") : arr, "load.arrival.pattern");
      if (pattern == "burst") {
        c.pattern = ArrivalPattern::Burst;
      } else if (pattern == "poisson") {
        c.pattern = ArrivalPattern::Poisson;
        if (arr.is_object()) c.rate = positive(require(arr, "rate", "load.arrival"), "load.arrival.rate");
      } else {
        throw FieldError("load.arrival.pattern", "expected 'burst' or 'poisson'");
      }
    }
  }
  check_grid(c);
  return c;
}

inline ExperimentConfig load_experiment(const std::string& path) {
  const auto j = config::parse_file(path);
  return experiment_from_json(j, std::filesystem::path(path).parent_path());
}

/// Grid cells in run order: application, strategy, users, fps. Only video varies fps.
inline std::vector<CellSpec> expand_grid(const ExperimentConfig& c) {
  std::vector<CellSpec> out;
  for (auto app : c.applications)
    for (auto s : c.strategies)
      for (auto u : c.users) {
        const std::vector<std::uint32_t> fps = app == Application::Video ? c.fps : std::vector<std::uint32_t>{1};
        for (auto f : fps) {
          CellSpec cell;
          cell.application = app;
          cell.strategy = s;
          cell.load.n_users = u;
          cell.load.fps = f;
          cell.load.pattern = c.pattern;
          cell.load.rate = c.rate;
          cell.load.seed = c.seed;
          cell.event_budget = c.event_budget;
          out.push_back(cell);
        }
      }
  return out;
}

}  // namespace sdpbench
