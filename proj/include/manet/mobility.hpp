#pragma once

#include <limits>

#include "manet/rng.hpp"
#include "manet/sim_time.hpp"

namespace manet {

struct Vec2 {
    double x{0.0};
    double y{0.0};

    bool operator==(const Vec2&) const = default;
};

double Distance(Vec2 a, Vec2 b);

struct MobilityParams {
    double fieldX{1000.0};
    double fieldY{1000.0};
    double vMin{0.0};
    double vMax{0.0};
    SimTime pause{Seconds(10.0)};
    SimTime granularity{Seconds(10.0)};
};

inline constexpr SimTime kNever = std::numeric_limits<SimTime>::max();

/**
 * Random-waypoint leg: the node travels in a straight line from origin to
 * target, arriving at arrival, then rests until pauseUntil.
 */
struct WaypointState {
    Vec2 origin;
    SimTime legStart{0};
    Vec2 target;
    double speed{0.0};
    SimTime arrival{0};
    SimTime pauseUntil{0};
};

/// Draws the initial position uniformly in the field and starts the first leg at t = 0.
WaypointState InitialWaypoint(const MobilityParams& params, RngStream& rng);

/// Starts a leg at `start` from `from` with an explicit target and speed.
WaypointState MakeLeg(Vec2 from, SimTime start, Vec2 target, double speed, SimTime pause);

/// Stationary state at `pos` for all time.
WaypointState StaticWaypoint(Vec2 pos);

/**
 * Advances the state so that the leg covering `now` is current, drawing a new
 * uniform target and uniform speed in [vMin, vMax] each time a pause ends.
 */
void Step(WaypointState& state, const MobilityParams& params, SimTime now, RngStream& rng);

/// Piecewise-linear position on the current leg. `t` must not precede state.legStart.
Vec2 PositionAt(const WaypointState& state, SimTime t);

} // namespace manet
