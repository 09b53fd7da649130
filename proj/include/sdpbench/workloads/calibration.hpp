// Built-in calibration and its JSON form. configs/calibration.json carries the
// same numbers; a test keeps the two in step.

#pragma once

#include <string>

#include "sdpbench/config/json_fields.hpp"
#include "sdpbench/workloads/profiles.hpp"

namespace sdpbench {

inline constexpr Bytes kMB = 1'000'000;
inline constexpr Bytes kGiB = 1ULL << 30;

inline Calibration default_calibration() {
  Calibration c;
  c.version = "2026.10";
  // 4-core fog nodes and a 4-core/8 GB cloud VM on a 1000 Mbps network.
  c.tiers = {
      {TierKind::Edge, 4, 4 * kGiB, 40e6, 20e6},
      {TierKind::Fog, 4, 4 * kGiB, 40e6, 20e6},
      {TierKind::Cloud, 4, 8 * kGiB, 200e6, 200e6},
  };
  c.links = {
      {TierKind::Edge, TierKind::Fog, 125e6, 0.001},
      {TierKind::Fog, TierKind::Cloud, 125e6, 0.005},
      {TierKind::Fog, TierKind::Fog, 125e6, 0.0005},
  };

  auto& b = c.backend;
  b.edge = EdgeParams{0.1, 1e-6, 1.0};
  b.gateway = GatewayConfig{32, std::nullopt};
  b.dft = DftParams{100, std::nullopt, QueuePriority::FIFO, 0.05, 0.5};
  b.oss = OssParams{0.9, 0.5};
  b.mqtt = MqttParams{64, ConnectorMode::Eager, 1.0};
  b.engine_memory = {1536 * kMB, 512 * kMB, 256 * kMB};

  auto fn = [](Seconds base, double per_byte, Bytes mem, double ratio) {
    FunctionCost f;
    f.base_time = base;
    f.per_byte_time = per_byte;
    f.mem_footprint = mem;
    f.output_ratio = ratio;
    return f;
  };
  const auto helper = fn(0.2, 1e-8, 64 * kMB, 1.0);

  ApplicationProfile aeneas;
  aeneas.application = Application::Aeneas;
  aeneas.unit_size = {SizeKind::Fixed, 1e6, 0};
  aeneas.tags = {AppTag::BI};
  aeneas.functions = {
      {"fetch_text", fn(0.05, 1e-8, 64 * kMB, 1.0)},
      {"aeneas_align", fn(0.5, 1e-6, 256 * kMB, 0.05)},
      {"decompress", fn(0.05, 5e-8, 64 * kMB, 2.0)},
      {"fetch_audio", helper},
      {"fetch_syncmap", helper},
      {"to_json", fn(0.05, 1e-8, 64 * kMB, 0.5)},
  };
  c.profiles[Application::Aeneas] = aeneas;

  ApplicationProfile ps;
  ps.application = Application::PocketSphinx;
  ps.unit_size = {SizeKind::Fixed, 5e6, 0};
  ps.tags = {AppTag::BI, AppTag::CI};
  ps.functions = {
      {"pocketsphinx", fn(0.2, 1.5e-6, 512 * kMB, 0.001)},
      {"text_search", fn(0.1, 1e-7, 64 * kMB, 1.0)},
      {"to_json", fn(0.05, 1e-8, 64 * kMB, 1.5)},
      {"decompress", fn(0.05, 5e-8, 64 * kMB, 2.0)},
      {"fetch_raw", helper},
      {"fetch_text", helper},
  };
  c.profiles[Application::PocketSphinx] = ps;

  ApplicationProfile video;
  video.application = Application::Video;
  video.unit_size = {SizeKind::Fixed, 50e6, 0};
  video.tags = {AppTag::BI, AppTag::CI};
  video.clip_seconds = 10;
  video.functions = {
      {"split", fn(5.0, 6e-7, 512 * kMB, 1.0)},
      {"yolo", fn(2.7, 1e-6, 1024 * kMB, 0.001)},
      {"to_json", fn(0.05, 1e-8, 64 * kMB, 2.0)},
      {"decompress", fn(0.2, 5e-8, 256 * kMB, 2.0)},
      {"fetch_frame", helper},
      {"fetch_result", helper},
  };
  c.profiles[Application::Video] = video;

  c.fitted = {
      "backend.edge.base_time",
      "backend.edge.per_byte_time",
      "backend.gateway.capacity",
      "backend.mqtt.topic_capacity",
      "backend.engine_memory",
      "profiles.aeneas.functions.aeneas_align",
      "profiles.pocketsphinx.functions.pocketsphinx",
      "profiles.video.functions.split",
      "profiles.video.functions.yolo",
  };
  return c;
}

// ---------------------------------------------------------------------------
// JSON.

namespace detail {

inline std::string link_key(TierKind from, TierKind to) {
  return std::string(to_string(from)) + "->" + std::string(to_string(to));
}

inline config::Json opt_json(const std::optional<std::size_t>& v) {
  return v ? config::Json(*v) : config::Json(nullptr);
}

// Absent and null both mean unbounded: a merge patch deletes keys set to null.
inline std::optional<std::size_t> opt_count(const config::Json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  return static_cast<std::size_t>(config::integer(*it, config::join_path(path, key), 1));
}

}  // namespace detail

inline config::Json to_json(const Calibration& c) {
  using config::Json;
  Json j = Json::object();
  j["version"] = c.version;
  for (const auto& t : c.tiers)
    j["tiers"][std::string(to_string(t.kind))] = {{"cpu_cores", t.cpu_cores},
                                                  {"mem_capacity", t.mem_capacity},
                                                  {"disk_read_rate", t.disk_read_rate},
                                                  {"disk_write_rate", t.disk_write_rate}};
  for (const auto& l : c.links)
    j["links"][detail::link_key(l.from, l.to)] = {{"bandwidth", l.bandwidth}, {"latency", l.latency}};
  const auto& b = c.backend;
  j["backend"]["edge"] = {{"base_time", b.edge.base_time}, {"per_byte_time", b.edge.per_byte_time}};
  j["backend"]["gateway"] = {
      {"capacity", detail::opt_json(b.gateway.capacity)},
      {"memory_limit", b.gateway.memory_limit ? Json(*b.gateway.memory_limit) : Json(nullptr)}};
  j["backend"]["dft"] = {{"queue_capacity", b.dft.queue_capacity},
                         {"backpressure_threshold", detail::opt_json(b.dft.backpressure_threshold)},
                         {"priority", std::string(to_string(b.dft.priority))},
                         {"per_unit_overhead", b.dft.per_unit_overhead},
                         {"edge_compress_ratio", b.dft.edge_compress_ratio}};
  j["backend"]["oss"] = {{"p_success", b.oss.p_success}, {"edge_compress_ratio", b.oss.edge_compress_ratio}};
  j["backend"]["mqtt"] = {{"topic_capacity", detail::opt_json(b.mqtt.topic_capacity)},
                          {"connector", b.mqtt.connector == ConnectorMode::Eager ? "eager" : "on_demand"},
                          {"edge_compress_ratio", b.mqtt.edge_compress_ratio}};
  for (auto s : kAllStrategies)
    j["backend"]["engine_memory"][std::string(to_string(s))] = b.engine_memory[index_of(s)];
  for (const auto& [app, p] : c.profiles) {
    Json a;
    switch (p.unit_size.kind) {
      case SizeKind::Fixed: a["unit_size"] = {{"kind", "fixed"}, {"bytes", p.unit_size.a}}; break;
      case SizeKind::Uniform:
        a["unit_size"] = {{"kind", "uniform"}, {"min", p.unit_size.a}, {"max", p.unit_size.b}};
        break;
      case SizeKind::LogNormal:
        a["unit_size"] = {{"kind", "lognormal"}, {"mu", p.unit_size.a}, {"sigma", p.unit_size.b}};
        break;
    }
    a["tags"] = Json::array();
    for (auto t : p.tags) a["tags"].push_back(std::string(to_string(t)));
    if (app == Application::Video) a["clip_seconds"] = p.clip_seconds;
    for (const auto& [name, f] : p.functions)
      a["functions"][name] = {{"base_time", f.base_time},
                              {"per_byte_time", f.per_byte_time},
                              {"mem_footprint", f.mem_footprint},
                              {"output_ratio", f.output_ratio},
                              {"replicas", f.replicas},
                              {"tier", std::string(to_string(f.tier))},
                              {"cold_start_penalty", f.cold_start_penalty}};
    j["profiles"][std::string(to_string(app))] = std::move(a);
  }
  j["fitted"] = c.fitted;
  return j;
}

inline Calibration calibration_from_json(const config::Json& j) {
  using namespace config;
  Calibration c;
  if (!j.is_object()) throw FieldError("", "calibration must be a JSON object");
  c.version = text(require(j, "version", ""), "version");

  const auto& tiers = require(j, "tiers", "");
  for (auto k : kAllTiers) {
    const std::string p = "tiers." + std::string(to_string(k));
    const auto& t = require(tiers, std::string(to_string(k)), "tiers");
    Tier tier;
    tier.kind = k;
    tier.cpu_cores = static_cast<std::uint32_t>(integer(require(t, "cpu_cores", p), p + ".cpu_cores", 1));
    tier.mem_capacity = integer(require(t, "mem_capacity", p), p + ".mem_capacity", 1);
    tier.disk_read_rate = positive(require(t, "disk_read_rate", p), p + ".disk_read_rate");
    tier.disk_write_rate = positive(require(t, "disk_write_rate", p), p + ".disk_write_rate");
    c.tiers.push_back(tier);
  }

  const auto& links = require(j, "links", "");
  if (!links.is_object()) throw FieldError("links", "expected an object");
  for (const auto& [key, l] : links.items()) {
    const std::string p = "links." + key;
    const auto arrow = key.find("->");
    if (arrow == std::string::npos) throw FieldError(p, "link key must look like 'edge->fog'");
    NetworkLink link;
    link.from = field(p, [&] { return parse_tier(key.substr(0, arrow)); });
    link.to = field(p, [&] { return parse_tier(key.substr(arrow + 2)); });
    link.bandwidth = positive(require(l, "bandwidth", p), p + ".bandwidth");
    link.latency = non_negative(require(l, "latency", p), p + ".latency");
    c.links.push_back(link);
  }

  const auto& b = require(j, "backend", "");
  auto& be = c.backend;
  const auto& edge = require(b, "edge", "backend");
  be.edge.base_time = non_negative(require(edge, "base_time", "backend.edge"), "backend.edge.base_time");
  be.edge.per_byte_time =
      non_negative(require(edge, "per_byte_time", "backend.edge"), "backend.edge.per_byte_time");
  const auto& gw = require(b, "gateway", "backend");
  if (!gw.is_object()) throw FieldError("backend.gateway", "expected an object");
  be.gateway.capacity = detail::opt_count(gw, "capacity", "backend.gateway");
  if (auto ml = gw.find("memory_limit"); ml != gw.end() && !ml->is_null())
    be.gateway.memory_limit = integer(*ml, "backend.gateway.memory_limit", 1);

  const auto& dft = require(b, "dft", "backend");
  be.dft.queue_capacity =
      static_cast<std::size_t>(integer(require(dft, "queue_capacity", "backend.dft"), "backend.dft.queue_capacity", 1));
  be.dft.backpressure_threshold =
      detail::opt_count(dft, "backpressure_threshold", "backend.dft");
  if (be.dft.backpressure_threshold && *be.dft.backpressure_threshold > be.dft.queue_capacity)
    throw FieldError("backend.dft.backpressure_threshold", "must not exceed queue_capacity");
  be.dft.priority = field("backend.dft.priority", [&] {
    return parse_queue_priority(text(require(dft, "priority", "backend.dft"), "backend.dft.priority"));
  });
  be.dft.per_unit_overhead =
      non_negative(require(dft, "per_unit_overhead", "backend.dft"), "backend.dft.per_unit_overhead");
  be.dft.edge_compress_ratio =
      positive(require(dft, "edge_compress_ratio", "backend.dft"), "backend.dft.edge_compress_ratio");

  const auto& oss = require(b, "oss", "backend");
  be.oss.p_success = number(require(oss, "p_success", "backend.oss"), "backend.oss.p_success");
  if (be.oss.p_success < 0 || be.oss.p_success > 1) throw FieldError("backend.oss.p_success", "must be in [0, 1]");
  be.oss.edge_compress_ratio =
      positive(require(oss, "edge_compress_ratio", "backend.oss"), "backend.oss.edge_compress_ratio");

  const auto& mq = require(b, "mqtt", "backend");
  be.mqtt.topic_capacity =
      detail::opt_count(mq, "topic_capacity", "backend.mqtt");
  const auto mode = text(require(mq, "connector", "backend.mqtt"), "backend.mqtt.connector");
  if (mode == "eager")
    be.mqtt.connector = ConnectorMode::Eager;
  else if (mode == "on_demand")
    be.mqtt.connector = ConnectorMode::OnDemand;
  else
    throw FieldError("backend.mqtt.connector", "expected 'eager' or 'on_demand'");
  be.mqtt.edge_compress_ratio =
      positive(require(mq, "edge_compress_ratio", "backend.mqtt"), "backend.mqtt.edge_compress_ratio");

  const auto& em = require(b, "engine_memory", "backend");
  for (auto s : kAllStrategies) {
    const std::string key(to_string(s));
    be.engine_memory[index_of(s)] = integer(require(em, key, "backend.engine_memory"), "backend.engine_memory." + key);
  }

  const auto& apps = require(j, "profiles", "");
  if (!apps.is_object()) throw FieldError("profiles", "expected an object");
  for (const auto& [key, a] : apps.items()) {
    const std::string p = "profiles." + key;
    ApplicationProfile prof;
    prof.application = field(p, [&] { return parse_application(key); });
    const auto& us = require(a, "unit_size", p);
    const std::string up = p + ".unit_size";
    const auto kind = text(require(us, "kind", up), up + ".kind");
    if (kind == "fixed") {
      prof.unit_size = {SizeKind::Fixed, positive(require(us, "bytes", up), up + ".bytes"), 0};
    } else if (kind == "uniform") {
      prof.unit_size = {SizeKind::Uniform, positive(require(us, "min", up), up + ".min"),
                        positive(require(us, "max", up), up + ".max")};
      if (prof.unit_size.b < prof.unit_size.a) throw FieldError(up + ".max", "must be >= min");
    } else if (kind == "lognormal") {
      prof.unit_size = {SizeKind::LogNormal, number(require(us, "mu", up), up + ".mu"),
                        positive(require(us, "sigma", up), up + ".sigma")};
    } else {
      throw FieldError(up + ".kind", "expected fixed, uniform or lognormal");
    }
    if (auto t = a.find("tags"); t != a.end()) {
      if (!t->is_array()) throw FieldError(p + ".tags", "expected an array");
      for (const auto& tag : *t) {
        const auto s = text(tag, p + ".tags");
        if (s == "LC") prof.tags.insert(AppTag::LC);
        else if (s == "BI") prof.tags.insert(AppTag::BI);
        else if (s == "LA") prof.tags.insert(AppTag::LA);
        else if (s == "CI") prof.tags.insert(AppTag::CI);
        else throw FieldError(p + ".tags", "unknown tag '" + s + "'");
      }
    }
    if (auto cs = a.find("clip_seconds"); cs != a.end()) prof.clip_seconds = positive(*cs, p + ".clip_seconds");
    const auto& fns = require(a, "functions", p);
    if (!fns.is_object()) throw FieldError(p + ".functions", "expected an object");
    for (const auto& [name, f] : fns.items()) {
      const std::string fp = p + ".functions." + name;
      FunctionCost fc;
      fc.base_time = non_negative(require(f, "base_time", fp), fp + ".base_time");
      fc.per_byte_time = non_negative(require(f, "per_byte_time", fp), fp + ".per_byte_time");
      fc.mem_footprint = integer(require(f, "mem_footprint", fp), fp + ".mem_footprint");
      fc.output_ratio = positive(require(f, "output_ratio", fp), fp + ".output_ratio");
      fc.replicas = static_cast<std::uint32_t>(integer(require(f, "replicas", fp), fp + ".replicas", 1));
      fc.tier = field(fp + ".tier", [&] { return parse_tier(text(require(f, "tier", fp), fp + ".tier")); });
      if (auto cp = f.find("cold_start_penalty"); cp != f.end())
        fc.cold_start_penalty = non_negative(*cp, fp + ".cold_start_penalty");
      prof.functions[name] = fc;
    }
    c.profiles[prof.application] = std::move(prof);
  }
  if (auto f = j.find("fitted"); f != j.end()) {
    if (!f->is_array()) throw FieldError("fitted", "expected an array");
    for (const auto& k : *f) c.fitted.push_back(text(k, "fitted"));
  }
  return c;
}

}  // namespace sdpbench
