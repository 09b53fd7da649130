#pragma once

#include "sdpbench/analyzer/plot.hpp"
#include "sdpbench/analyzer/suitability.hpp"
#include "sdpbench/analyzer/tables.hpp"
#include "sdpbench/backends/flow_queue.hpp"
#include "sdpbench/backends/object_store.hpp"
#include "sdpbench/backends/params.hpp"
#include "sdpbench/backends/pubsub.hpp"
#include "sdpbench/config/experiment.hpp"
#include "sdpbench/config/json_fields.hpp"
#include "sdpbench/core/event_log.hpp"
#include "sdpbench/core/types.hpp"
#include "sdpbench/core/validate.hpp"
#include "sdpbench/faas/engine.hpp"
#include "sdpbench/kernel/kernel.hpp"
#include "sdpbench/kernel/resource_ledger.hpp"
#include "sdpbench/metrics/summary.hpp"
#include "sdpbench/metrics/timings.hpp"
#include "sdpbench/sim/run_context.hpp"
#include "sdpbench/sim/runner.hpp"
#include "sdpbench/workloads/calibration.hpp"
#include "sdpbench/workloads/profiles.hpp"
