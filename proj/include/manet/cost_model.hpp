#pragma once

#include <span>
#include <stdexcept>

#include "manet/node_state.hpp"
#include "manet/packets.hpp"

namespace manet {

/// The three per-node cost components, each a fraction in [0, 1].
struct CostComponents {
    double bandwidthCost{0.0}; ///< radio busy fraction over the measurement window
    double delayCost{0.0};     ///< interface queue occupancy fraction
    double powerCost{0.0};     ///< fraction of initial energy already consumed

    bool operator==(const CostComponents&) const = default;
};

struct WeightProfile {
    double b{0.0};
    double d{0.0};
    double p{0.0};
};

/// Per-application weights. Type-1 deliberately sums to 0.99.
inline constexpr WeightProfile kType1Weights{0.33, 0.33, 0.33};
inline constexpr WeightProfile kType2Weights{0.30, 0.40, 0.30};

constexpr WeightProfile Weights(AppType app)
{
    return app == AppType::Type1 ? kType1Weights : kType2Weights;
}

class EmptyRoute : public std::logic_error {
  public:
    EmptyRoute()
        : std::logic_error("route cost requested for an empty route")
    {
    }
};

double BandwidthCost(const RadioActivity& radio, SimTime now, SimTime window);
double DelayCost(const FrameQueue& queue);
double PowerCost(const Battery& battery);

double BandwidthCost(const NodeState& node, SimTime now, SimTime window);
double DelayCost(const NodeState& node);
double PowerCost(const NodeState& node);

CostComponents SampleComponents(const NodeState& node, SimTime now, SimTime window);

double NodeCost(const WeightProfile& weights, const CostComponents& c);
double NodeCost(AppType app, const CostComponents& c);

/// Sum of node costs over a route, both endpoints included.
double RouteCost(std::span<const double> nodeCosts);

/// Reference battery-only cost: fraction of initial energy consumed.
double CpaclNodeCost(const NodeState& node);

} // namespace manet
