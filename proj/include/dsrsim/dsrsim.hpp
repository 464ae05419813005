#pragma once

// Umbrella header: packet-level discrete-event simulation of DSR over an
// idealized wireless channel, with a two-tier (primary/secondary) route
// cache, random-waypoint mobility and CBR traffic.

#include "dsrsim/audit.hpp"
#include "dsrsim/channel.hpp"
#include "dsrsim/errors.hpp"
#include "dsrsim/event_queue.hpp"
#include "dsrsim/geometry.hpp"
#include "dsrsim/metrics.hpp"
#include "dsrsim/mobility.hpp"
#include "dsrsim/node.hpp"
#include "dsrsim/packet.hpp"
#include "dsrsim/route.hpp"
#include "dsrsim/route_cache.hpp"
#include "dsrsim/rng.hpp"
#include "dsrsim/scenario.hpp"
#include "dsrsim/sim_time.hpp"
#include "dsrsim/simulation.hpp"
#include "dsrsim/sweep.hpp"
#include "dsrsim/workload.hpp"
