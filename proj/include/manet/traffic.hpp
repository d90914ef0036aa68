#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "manet/event_queue.hpp"
#include "manet/packets.hpp"
#include "manet/rng.hpp"

namespace manet {

/// A constant-bit-rate datagram flow.
struct FlowSpec {
    NodeId src{0};
    NodeId dst{1};
    AppType appType{AppType::Type1};
    double rate{1.0}; ///< packets per second
    std::uint32_t sizeBytes{512};
    double start{0.0}; ///< seconds
    double stop{0.0};  ///< seconds
};

bool IsValid(const FlowSpec& flow);

/// floor((stop - start) * rate); zero for an empty interval.
std::uint64_t PacketCount(const FlowSpec& flow);

/// Creation time of the k-th packet: start + k / rate.
SimTime DepartureTime(const FlowSpec& flow, std::uint64_t k);

/**
 * One flow per node towards a destination drawn uniformly among the other
 * nodes. Draws come from a dedicated traffic stream of the master seed.
 */
std::vector<FlowSpec> MakeFlows(std::uint32_t nodes, AppType app, double rate,
                                std::uint32_t sizeBytes, double duration, std::uint64_t seed);

/**
 * Schedules the flow's packets as a chain of TrafficGen events; `emit` is
 * invoked once per packet at its creation time.
 */
void Generate(const FlowSpec& flow, EventQueue& queue, std::function<void(const DataPacket&)> emit);

} // namespace manet
