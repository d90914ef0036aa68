#include "manet/traffic.hpp"

#include <cmath>
#include <memory>

namespace manet {

bool IsValid(const FlowSpec& flow)
{
    return flow.src != flow.dst && flow.rate > 0.0 && flow.sizeBytes > 0 && flow.start <= flow.stop;
}

std::uint64_t PacketCount(const FlowSpec& flow)
{
    if (flow.stop <= flow.start) {
        return 0;
    }
    return static_cast<std::uint64_t>(std::floor((flow.stop - flow.start) * flow.rate));
}

SimTime DepartureTime(const FlowSpec& flow, std::uint64_t k)
{
    return Seconds(flow.start) +
           static_cast<SimTime>(std::llround(static_cast<double>(k) * kTicksPerSecond / flow.rate));
}

std::vector<FlowSpec> MakeFlows(std::uint32_t nodes, AppType app, double rate,
                                std::uint32_t sizeBytes, double duration, std::uint64_t seed)
{
    std::vector<FlowSpec> flows;
    if (nodes < 2) {
        return flows;
    }
    RngStream rng(seed, StreamPurpose::Traffic, 0);
    flows.reserve(nodes);
    for (NodeId src = 0; src < nodes; ++src) {
        auto dst = static_cast<NodeId>(rng.UniformIndex(nodes - 1));
        if (dst >= src) {
            ++dst;
        }
        flows.push_back(FlowSpec{src, dst, app, rate, sizeBytes, 0.0, duration});
    }
    return flows;
}

void Generate(const FlowSpec& flow, EventQueue& queue, std::function<void(const DataPacket&)> emit)
{
    const std::uint64_t count = PacketCount(flow);
    if (count == 0) {
        return;
    }
    struct Chain {
        FlowSpec flow;
        std::uint64_t count;
        std::function<void(const DataPacket&)> emit;
        EventQueue* queue;

        void Fire(std::uint64_t k, const std::shared_ptr<Chain>& self)
        {
            DataPacket packet;
            packet.src = flow.src;
            packet.dst = flow.dst;
            packet.appType = flow.appType;
            packet.seq = static_cast<std::uint32_t>(k);
            packet.sizeBytes = flow.sizeBytes;
            packet.createdAt = DepartureTime(flow, k);
            emit(packet);
            if (k + 1 < count) {
                queue->Schedule(DepartureTime(flow, k + 1), EventKind::TrafficGen,
                                [self, k] { self->Fire(k + 1, self); });
            }
        }
    };
    auto chain = std::make_shared<Chain>(Chain{flow, count, std::move(emit), &queue});
    queue.Schedule(DepartureTime(flow, 0), EventKind::TrafficGen, [chain] { chain->Fire(0, chain); });
}

} // namespace manet
