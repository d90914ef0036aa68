#pragma once

#include <cstdint>
#include <deque>
#include <optional>

#include "manet/mobility.hpp"
#include "manet/packets.hpp"
#include "manet/rng.hpp"
#include "manet/sim_time.hpp"

namespace manet {

/// Energy in integer nano-units (1 unit = 1e9) so that debits add up exactly.
using EnergyNano = std::int64_t;

inline constexpr EnergyNano kNanoPerUnit = 1'000'000'000;

inline EnergyNano EnergyFromUnits(double units)
{
    return static_cast<EnergyNano>(std::llround(units * static_cast<double>(kNanoPerUnit)));
}

inline double EnergyToUnits(EnergyNano e)
{
    return static_cast<double>(e) / static_cast<double>(kNanoPerUnit);
}

class Battery {
  public:
    explicit Battery(EnergyNano initial = EnergyFromUnits(100.0))
        : m_initial(initial),
          m_remaining(initial)
    {
    }

    /// Removes up to `amount`, flooring at zero. Returns the amount actually removed.
    EnergyNano Debit(EnergyNano amount)
    {
        const EnergyNano taken = amount < m_remaining ? amount : m_remaining;
        m_remaining -= taken;
        return taken;
    }

    EnergyNano Initial() const { return m_initial; }
    EnergyNano Remaining() const { return m_remaining; }
    bool Depleted() const { return m_remaining <= 0; }

  private:
    EnergyNano m_initial;
    EnergyNano m_remaining;
};

/**
 * Radio busy time as a list of merged, disjoint intervals. Insertions must
 * arrive in non-decreasing start order, which the event loop guarantees.
 */
class RadioActivity {
  public:
    void MarkBusy(SimTime start, SimTime end);

    /// Total busy time inside [from, to].
    SimTime BusyWithin(SimTime from, SimTime to) const;

    SimTime BusyUntil() const { return m_intervals.empty() ? 0 : m_intervals.back().end; }

    /// Forgets intervals that ended before `t`.
    void Prune(SimTime t);

  private:
    struct Interval {
        SimTime start;
        SimTime end;
    };
    std::deque<Interval> m_intervals;
};

/// A frame waiting for (or undergoing) transmission at a node.
struct Frame {
    Packet packet;
    NodeId macDest{kBroadcast};
    std::uint32_t failedAttempts{0};
};

/// Bounded drop-tail FIFO. The frame on the air stays at the head until done.
class FrameQueue {
  public:
    explicit FrameQueue(std::size_t capacity = 50)
        : m_capacity(capacity)
    {
    }

    bool Push(Frame frame)
    {
        if (m_frames.size() >= m_capacity) {
            return false;
        }
        m_frames.push_back(std::move(frame));
        return true;
    }

    std::size_t Size() const { return m_frames.size(); }
    std::size_t Capacity() const { return m_capacity; }
    bool Empty() const { return m_frames.empty(); }

    Frame& Front() { return m_frames.front(); }
    void PopFront() { m_frames.pop_front(); }

    std::deque<Frame>& Frames() { return m_frames; }
    const std::deque<Frame>& Frames() const { return m_frames; }

  private:
    std::size_t m_capacity;
    std::deque<Frame> m_frames;
};

struct NodeState {
    NodeId id{0};
    Battery battery;
    bool alive{true};
    FrameQueue queue;
    RadioActivity radio;
    WaypointState waypoint;
    RngStream mobilityRng;
    bool transmitting{false};
    bool wakeupPending{false};
};

} // namespace manet
