#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "manet/metrics.hpp"
#include "manet/node_state.hpp"
#include "manet/packets.hpp"

namespace manet {

enum class TraceEvent : std::uint8_t {
    Tx = 1,       ///< frame emission start; peer = MAC destination
    Rx = 2,       ///< physical reception (energy paid); peer = transmitter
    Drop = 3,     ///< packet discarded; peer = DropReason code
    Generate = 4, ///< data packet created by its source
    Deliver = 5,  ///< data packet handed to the destination application
    Death = 6,    ///< battery exhausted; no packet attached
};

/*
 * Record layout (big-endian):
 *   u64 time (microseconds) | u8 event | u32 node | u32 peer | u16 length | packet bytes
 * where the packet bytes use the codec in packets.hpp (length 0 for Death).
 */
struct TraceRecord {
    SimTime time{0};
    TraceEvent event{TraceEvent::Tx};
    NodeId node{0};
    NodeId peer{kBroadcast};
    std::optional<Packet> packet;
};

class TraceWriter {
  public:
    explicit TraceWriter(std::ostream& out)
        : m_out(out)
    {
    }

    void Write(SimTime time, TraceEvent event, NodeId node, NodeId peer, const Packet* packet);

  private:
    std::ostream& m_out;
};

/// Sequential reader; throws MalformedPacket on a truncated record or undecodable packet.
class TraceReader {
  public:
    explicit TraceReader(std::istream& in)
        : m_in(in)
    {
    }

    /// Reads the next record; returns false at a clean end of stream.
    bool Next(TraceRecord& record);

  private:
    std::istream& m_in;
    std::vector<std::uint8_t> m_body;
};

std::vector<TraceRecord> ReadTrace(std::istream& in);

/// Rebuilds the metric counters from a trace, independently of the simulator's ledger.
MetricsLedger LedgerFromTrace(std::istream& in, double duration);

struct EnergyRates {
    EnergyNano initial{EnergyFromUnits(100.0)};
    EnergyNano txPerByte{EnergyFromUnits(0.00002)};
    EnergyNano rxPerByte{EnergyFromUnits(0.00001)};
};

struct EnergyReplay {
    std::vector<EnergyNano> remaining;
    std::vector<EnergyNano> debited;
    std::size_t framesFromDeadSenders{0};
};

/// Replays Tx/Rx records against fresh batteries and checks that no dead node transmits.
EnergyReplay ReplayEnergy(std::istream& in, std::size_t nodes, const EnergyRates& rates);

} // namespace manet
