#include "manet/metrics.hpp"

namespace manet {

bool MetricsLedger::RecordDelivery(const DataPacket& packet, SimTime now)
{
    if (!m_deliveredKeys.emplace(packet.src, packet.dst, packet.appType, packet.seq).second) {
        return false;
    }
    ++delivered;
    deliveredBits += static_cast<std::uint64_t>(packet.sizeBytes) * 8;
    sumDelay += now - packet.createdAt;
    return true;
}

std::optional<double> AvgEndToEndDelay(const MetricsLedger& ledger)
{
    if (ledger.delivered == 0) {
        return std::nullopt;
    }
    return ToSeconds(ledger.sumDelay) / static_cast<double>(ledger.delivered);
}

double Throughput(const MetricsLedger& ledger)
{
    return static_cast<double>(ledger.deliveredBits) / ledger.duration;
}

std::optional<double> PacketDeliveryRatio(const MetricsLedger& ledger)
{
    if (ledger.generated == 0) {
        return std::nullopt;
    }
    return static_cast<double>(ledger.delivered) / static_cast<double>(ledger.generated);
}

std::optional<double> ControlOverhead(const MetricsLedger& ledger)
{
    if (ledger.delivered == 0) {
        return std::nullopt;
    }
    return static_cast<double>(ledger.routingTxCount) / static_cast<double>(ledger.delivered);
}

RunMetrics ComputeMetrics(const MetricsLedger& ledger)
{
    return {AvgEndToEndDelay(ledger), Throughput(ledger), PacketDeliveryRatio(ledger),
            ControlOverhead(ledger)};
}

namespace {

struct Mean {
    double sum{0.0};
    std::size_t n{0};

    void Add(double v)
    {
        sum += v;
        ++n;
    }

    std::optional<double> Value() const
    {
        return n == 0 ? std::nullopt : std::optional<double>(sum / static_cast<double>(n));
    }
};

} // namespace

AggregateMetrics Aggregate(const std::vector<RunMetrics>& runs)
{
    AggregateMetrics out;
    out.runs = runs.size();
    Mean delay, throughput, pdr, overhead;
    for (const auto& r : runs) {
        throughput.Add(r.throughput);
        if (r.avgDelay) {
            delay.Add(*r.avgDelay);
        } else {
            ++out.excludedDelay;
        }
        if (r.pdr) {
            pdr.Add(*r.pdr);
        } else {
            ++out.excludedPdr;
        }
        if (r.controlOverhead) {
            overhead.Add(*r.controlOverhead);
        } else {
            ++out.excludedOverhead;
        }
    }
    out.mean.avgDelay = delay.Value();
    out.mean.throughput = throughput.Value().value_or(0.0);
    out.mean.pdr = pdr.Value();
    out.mean.controlOverhead = overhead.Value();
    return out;
}

} // namespace manet
