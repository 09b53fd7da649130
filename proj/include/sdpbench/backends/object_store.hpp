// Object-storage backend: buckets behave as persistent queues and a put into
// a watched bucket calls the next function over a synchronous webhook.
// Retrieval helpers read the object back before handing it on.

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdpbench/backends/params.hpp"

namespace sdpbench {

class StorageError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

enum class BucketEvent : std::uint8_t { Inserted, Accessed, Deleted, Copied };

/// Handler for a bucket notification. It must call `done` when the synchronous call returns.
using WebhookHandler = std::function<void(const DataUnit& object, std::function<void()> done)>;

struct WebhookTrigger {
  std::string bucket;
  BucketEvent event = BucketEvent::Inserted;
  std::string target;
  InvocationMode mode = InvocationMode::Sync;
};

class ObjectStore {
 public:
  explicit ObjectStore(RunContext& ctx) : ctx_(ctx) {}

  ObjectStore(const ObjectStore&) = delete;
  ObjectStore& operator=(const ObjectStore&) = delete;

  /// A sink bucket is the pipeline's destination: storing there completes the unit.
  void create_bucket(const std::string& name, TierKind tier, bool sink = false) {
    if (!buckets_.emplace(name, Bucket{tier, sink, {}, {}}).second)
      throw std::invalid_argument("bucket '" + name + "' already exists");
  }

  bool has_bucket(const std::string& name) const { return buckets_.count(name) != 0; }

  void set_trigger(const WebhookTrigger& trigger, WebhookHandler handler) {
    auto& b = bucket(trigger.bucket);
    if (!b.triggers.emplace(trigger.event, Trigger{trigger, std::move(handler)}).second)
      throw std::invalid_argument("bucket '" + trigger.bucket + "' already has a trigger for this event");
  }

  /// Stores the object. `done` runs after the write and, for a watched bucket,
  /// after the triggered function's synchronous call returns.
  void put_object(const std::string& name, const DataUnit& unit, std::function<void()> done = {}) {
    auto& b = bucket(name);
    if (b.sink) {
      ctx_.deliver_to_sink(unit, name);
      if (done) done();
      return;
    }
    ctx_.emit(EventKind::StorageArrive, unit, name, b.tier);
    const Seconds t = ctx_.disk_write(unit, b.tier, name);
    b.objects[unit.unit_id] = Object{unit, ctx_.now(), false};
    ctx_.kernel().schedule_after(t, [this, name, unit, done = std::move(done)] {
      auto& b = bucket(name);
      auto it = b.triggers.find(BucketEvent::Inserted);
      if (it == b.triggers.end()) {
        if (done) done();
        return;
      }
      ++invocations_;
      it->second.handler(unit, done ? done : std::function<void()>([] {}));
    });
  }

  /// Reads the object back; `done` receives it once the read finishes.
  void get_object(const std::string& name, UnitId id, std::function<void(DataUnit)> done) {
    auto& b = bucket(name);
    auto it = b.objects.find(id);
    if (it == b.objects.end())
      throw StorageError("object " + std::to_string(raw(id)) + " not in bucket '" + name + "'");
    const DataUnit unit = it->second.unit;
    const Seconds t = ctx_.disk_read(unit, b.tier, name);
    ctx_.kernel().schedule_after(t, [this, name, id, unit, done = std::move(done)] {
      auto& obj = bucket(name).objects.at(id);
      if (!obj.retrieved) {
        obj.retrieved = true;
        ctx_.emit(EventKind::StorageDepart, unit, name, bucket(name).tier);
      }
      done(unit);
    });
  }

  std::size_t object_count(const std::string& name) const { return bucket(name).objects.size(); }
  std::size_t trigger_invocations() const { return invocations_; }

 private:
  struct Object {
    DataUnit unit;
    Seconds stored_at;
    bool retrieved;
  };
  struct Trigger {
    WebhookTrigger spec;
    WebhookHandler handler;
  };
  struct Bucket {
    TierKind tier;
    bool sink;
    std::map<UnitId, Object> objects;
    std::map<BucketEvent, Trigger> triggers;
  };

  Bucket& bucket(const std::string& name) {
    auto it = buckets_.find(name);
    if (it == buckets_.end()) throw StorageError("no bucket '" + name + "'");
    return it->second;
  }
  const Bucket& bucket(const std::string& name) const {
    auto it = buckets_.find(name);
    if (it == buckets_.end()) throw StorageError("no bucket '" + name + "'");
    return it->second;
  }

  RunContext& ctx_;
  std::map<std::string, Bucket> buckets_;
  std::size_t invocations_ = 0;
};

class OssBackend {
 public:
  OssBackend(RunContext& ctx, const PipelineSpec& spec, const BackendParams& params, FaasPlatform& faas,
             std::mt19937_64 routing_rng)
      : ctx_(ctx), spec_(spec), params_(params), faas_(faas), store_(ctx),
        edge_(ctx, EdgeParams{params.edge.base_time, params.edge.per_byte_time,
                              params.oss.edge_compress_ratio}),
        rng_(routing_rng) {
    if (spec.strategy != Strategy::OSS) throw std::invalid_argument("OssBackend needs an OSS pipeline");
    input_bucket_.resize(spec.stages.size());
    for (const auto& su : spec.storage_units) {
      const bool sink = !su.feeds_stage;
      store_.create_bucket(su.name, su.tier_placement, sink);
      if (sink) {
        sink_buckets_.push_back(su.name);
        continue;
      }
      const auto k = *su.feeds_stage;
      input_bucket_[k] = su.name;
      store_.set_trigger(WebhookTrigger{su.name, BucketEvent::Inserted, spec.stages[k].name},
                         [this, k, name = su.name](const DataUnit& obj, std::function<void()> done) {
                           triggered(k, name, obj, std::move(done));
                         });
    }
    if (sink_buckets_.empty()) throw std::invalid_argument("OSS pipeline has no sink bucket");
  }

  OssBackend(const OssBackend&) = delete;
  OssBackend& operator=(const OssBackend&) = delete;

  void inject(const DataUnit& unit) {
    edge_.submit(unit, [this, unit](DataUnit packed) {
      // The edge service posts straight to the first function; it decompresses.
      ctx_.transfer(packed, TierKind::Edge, spec_.stages[0].tier_placement, "edge->" + spec_.stages[0].name,
                    [this, packed] { call(0, packed, [] {}); });
    });
  }

  const ObjectStore& store() const { return store_; }

 private:
  /// Direct synchronous HTTP call of stage k; `done` runs when the whole downstream chain returns.
  void call(std::size_t k, const DataUnit& unit, std::function<void()> done) {
    const auto& fn = spec_.stages[k];
    InvocationHooks hooks;
    hooks.on_end = [this, k, done = std::move(done)](DataUnit out, Lease lease) {
      route(k, out, [lease, done] {
        lease.release();
        done();
      });
    };
    faas_.engine_for(fn).invoke(fn.name, unit, InvocationMode::Sync, std::move(hooks));
  }

  /// Webhook from bucket `name`: the target fetches the object before it starts.
  void triggered(std::size_t k, const std::string& name, const DataUnit& obj, std::function<void()> done) {
    const auto& fn = spec_.stages[k];
    auto fetched = std::make_shared<DataUnit>(obj);
    InvocationHooks hooks;
    hooks.before_start = [this, name, fetched](std::function<void()> proceed) {
      store_.get_object(name, fetched->unit_id, [proceed = std::move(proceed)](DataUnit) { proceed(); });
    };
    hooks.on_end = [this, k, done = std::move(done)](DataUnit out, Lease lease) {
      route(k, out, [lease, done] {
        lease.release();
        done();
      });
    };
    faas_.engine_for(fn).invoke(fn.name, obj, InvocationMode::Sync, std::move(hooks));
  }

  /// Hands the output of stage k to whatever consumes it.
  void route(std::size_t k, const DataUnit& out, std::function<void()> done) {
    const auto& fn = spec_.stages[k];
    auto pieces = fn.fan_out > 1 ? ctx_.fan_out(out, fn.fan_out) : std::vector<DataUnit>{out};
    auto remaining = std::make_shared<std::size_t>(pieces.size());
    auto one_done = [remaining, done = std::move(done)] {
      if (--*remaining == 0) done();
    };
    for (const auto& p : pieces) {
      if (k + 1 == spec_.stages.size()) {
        store_final(k, p, one_done);
      } else if (!input_bucket_[k + 1].empty()) {
        const auto& bucket = input_bucket_[k + 1];
        store_.put_object(bucket, p, one_done);
      } else {
        const auto& next = spec_.stages[k + 1];
        ctx_.transfer(p, fn.tier_placement, next.tier_placement, fn.name + "->" + next.name,
                      [this, k, p, one_done] { call(k + 1, p, one_done); });
      }
    }
  }

  void store_final(std::size_t k, const DataUnit& unit, std::function<void()> done) {
    // Two sink buckets mean a success/failure split on the final result.
    std::string target = sink_buckets_.front();
    if (sink_buckets_.size() > 1) {
      std::bernoulli_distribution ok(params_.oss.p_success);
      target = ok(rng_) ? sink_buckets_[0] : sink_buckets_[1];
    }
    ctx_.transfer(unit, spec_.stages[k].tier_placement, TierKind::Cloud, "put->" + target,
                  [this, target, unit, done = std::move(done)] { store_.put_object(target, unit, done); });
  }

  RunContext& ctx_;
  const PipelineSpec& spec_;
  const BackendParams& params_;
  FaasPlatform& faas_;
  ObjectStore store_;
  EdgeAgent edge_;
  std::mt19937_64 rng_;
  std::vector<std::string> input_bucket_;
  std::vector<std::string> sink_buckets_;
};

}  // namespace sdpbench
