#include "manet/cost_model.hpp"

#include <algorithm>

namespace manet {

double BandwidthCost(const RadioActivity& radio, SimTime now, SimTime window)
{
    if (window <= 0) {
        return 0.0;
    }
    const SimTime busy = radio.BusyWithin(now - window, now);
    return std::clamp(static_cast<double>(busy) / static_cast<double>(window), 0.0, 1.0);
}

double DelayCost(const FrameQueue& queue)
{
    return static_cast<double>(queue.Size()) / static_cast<double>(queue.Capacity());
}

double PowerCost(const Battery& battery)
{
    const double consumed = static_cast<double>(battery.Initial() - battery.Remaining()) /
                            static_cast<double>(battery.Initial());
    return std::clamp(consumed, 0.0, 1.0);
}

double BandwidthCost(const NodeState& node, SimTime now, SimTime window)
{
    return BandwidthCost(node.radio, now, window);
}

double DelayCost(const NodeState& node) { return DelayCost(node.queue); }

double PowerCost(const NodeState& node) { return PowerCost(node.battery); }

CostComponents SampleComponents(const NodeState& node, SimTime now, SimTime window)
{
    return {BandwidthCost(node, now, window), DelayCost(node), PowerCost(node)};
}

double NodeCost(const WeightProfile& w, const CostComponents& c)
{
    return w.b * c.bandwidthCost + w.d * c.delayCost + w.p * c.powerCost;
}

double NodeCost(AppType app, const CostComponents& c) { return NodeCost(Weights(app), c); }

double RouteCost(std::span<const double> nodeCosts)
{
    if (nodeCosts.empty()) {
        throw EmptyRoute();
    }
    double sum = 0.0;
    for (double c : nodeCosts) {
        sum += c;
    }
    return sum;
}

double CpaclNodeCost(const NodeState& node) { return PowerCost(node); }

} // namespace manet
