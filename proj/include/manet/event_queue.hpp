#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "manet/sim_time.hpp"

namespace manet {

enum class EventKind : std::uint8_t { PacketDelivery, TimerFire, MobilityUpdate, TrafficGen };

class PastEvent : public std::logic_error {
  public:
    PastEvent(SimTime when, SimTime now)
        : std::logic_error("event scheduled at " + std::to_string(when) + "us, before now (" +
                           std::to_string(now) + "us)")
    {
    }
};

/**
 * Deterministic event list. Events run in (time, seqNo) order, seqNo being a
 * global counter assigned at scheduling, so equal-time events run FIFO.
 */
class EventQueue {
  public:
    void Schedule(SimTime time, EventKind kind, std::function<void()> action);

    /// Executes events with time <= horizon. Returns the number executed.
    std::uint64_t RunUntil(SimTime horizon);

    SimTime Now() const { return m_now; }
    std::size_t Pending() const { return m_heap.size(); }
    std::uint64_t Executed() const { return m_executed; }

  private:
    struct Event {
        SimTime time;
        std::uint64_t seqNo;
        EventKind kind;
        std::function<void()> action;
    };

    struct Later {
        bool operator()(const Event& a, const Event& b) const
        {
            return a.time != b.time ? a.time > b.time : a.seqNo > b.seqNo;
        }
    };

    std::priority_queue<Event, std::vector<Event>, Later> m_heap;
    SimTime m_now{0};
    std::uint64_t m_nextSeq{0};
    std::uint64_t m_executed{0};
};

} // namespace manet
