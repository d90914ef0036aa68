#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "manet/packets.hpp"
#include "manet/sim_time.hpp"

namespace manet {

/// Raw per-run counters; every reported metric is derived from these.
struct MetricsLedger {
    std::uint64_t generated{0};
    std::uint64_t delivered{0};
    std::uint64_t deliveredBits{0};
    SimTime sumDelay{0}; ///< microseconds, summed over delivered packets
    std::uint64_t routingTxCount{0};
    double duration{0.0}; ///< seconds

    // Diagnostics; not part of any reported metric.
    std::uint64_t dataTxCount{0};
    std::uint64_t droppedOverflow{0};
    std::uint64_t droppedNoRoute{0};
    std::uint64_t droppedDiscovery{0};
    std::uint64_t droppedMac{0};
    std::uint64_t droppedSenderDead{0};
    std::uint64_t droppedNoReverseRoute{0};
    std::uint64_t droppedPendingOverflow{0};
    std::uint64_t deadNodes{0};

    /**
     * Counts a delivery once per (source, destination, application, sequence).
     * Returns false for a duplicate, which leaves every counter untouched.
     */
    bool RecordDelivery(const DataPacket& packet, SimTime now);

  private:
    std::set<std::tuple<NodeId, NodeId, AppType, std::uint32_t>> m_deliveredKeys;
};

std::optional<double> AvgEndToEndDelay(const MetricsLedger& ledger);
double Throughput(const MetricsLedger& ledger);
std::optional<double> PacketDeliveryRatio(const MetricsLedger& ledger);
std::optional<double> ControlOverhead(const MetricsLedger& ledger);

/// The four reported metrics of one run. Absent values mean "no deliveries" / "no traffic".
struct RunMetrics {
    std::optional<double> avgDelay;
    double throughput{0.0};
    std::optional<double> pdr;
    std::optional<double> controlOverhead;

    bool operator==(const RunMetrics&) const = default;
};

RunMetrics ComputeMetrics(const MetricsLedger& ledger);

struct AggregateMetrics {
    RunMetrics mean;
    std::size_t runs{0};
    std::size_t excludedDelay{0};    ///< runs without deliveries left out of the delay mean
    std::size_t excludedOverhead{0}; ///< same, for control overhead
    std::size_t excludedPdr{0};
};

/// Per-metric arithmetic mean over runs, skipping runs where a metric is absent.
AggregateMetrics Aggregate(const std::vector<RunMetrics>& runs);

} // namespace manet
