#include "manet/mobility.hpp"

#include <cmath>

namespace manet {

double Distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

WaypointState MakeLeg(Vec2 from, SimTime start, Vec2 target, double speed, SimTime pause)
{
    WaypointState s;
    s.origin = from;
    s.legStart = start;
    s.target = target;
    s.speed = speed;
    const double dist = Distance(from, target);
    if (dist == 0.0) {
        s.arrival = start;
    } else if (speed <= 0.0) {
        s.arrival = kNever;
    } else {
        // Round the travel time up so the realised speed never exceeds the drawn one.
        s.arrival = start + static_cast<SimTime>(std::ceil(dist / speed * kTicksPerSecond));
    }
    s.pauseUntil = s.arrival == kNever ? kNever : s.arrival + pause;
    return s;
}

WaypointState StaticWaypoint(Vec2 pos)
{
    WaypointState s;
    s.origin = pos;
    s.target = pos;
    s.arrival = 0;
    s.pauseUntil = kNever;
    return s;
}

namespace {

WaypointState NextLeg(Vec2 from, SimTime start, const MobilityParams& params, RngStream& rng)
{
    Vec2 target;
    target.x = rng.Uniform(0.0, params.fieldX);
    target.y = rng.Uniform(0.0, params.fieldY);
    const double speed = rng.Uniform(params.vMin, params.vMax);
    return MakeLeg(from, start, target, speed, params.pause);
}

} // namespace

WaypointState InitialWaypoint(const MobilityParams& params, RngStream& rng)
{
    Vec2 start;
    start.x = rng.Uniform(0.0, params.fieldX);
    start.y = rng.Uniform(0.0, params.fieldY);
    if (params.vMax <= 0.0) {
        return StaticWaypoint(start);
    }
    return NextLeg(start, 0, params, rng);
}

void Step(WaypointState& state, const MobilityParams& params, SimTime now, RngStream& rng)
{
    while (state.pauseUntil != kNever && now >= state.pauseUntil) {
        state = NextLeg(state.target, state.pauseUntil, params, rng);
    }
}

Vec2 PositionAt(const WaypointState& state, SimTime t)
{
    if (t >= state.arrival) {
        return state.target;
    }
    if (t <= state.legStart || state.arrival == kNever) {
        return state.origin;
    }
    const double frac = static_cast<double>(t - state.legStart) /
                        static_cast<double>(state.arrival - state.legStart);
    return {state.origin.x + frac * (state.target.x - state.origin.x),
            state.origin.y + frac * (state.target.y - state.origin.y)};
}

} // namespace manet
