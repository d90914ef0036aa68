#include "manet/event_queue.hpp"

#include <utility>

namespace manet {

void EventQueue::Schedule(SimTime time, EventKind kind, std::function<void()> action)
{
    if (time < m_now) {
        throw PastEvent(time, m_now);
    }
    m_heap.push(Event{time, m_nextSeq++, kind, std::move(action)});
}

std::uint64_t EventQueue::RunUntil(SimTime horizon)
{
    std::uint64_t count = 0;
    while (!m_heap.empty() && m_heap.top().time <= horizon) {
        // The top element is removed right away, so moving its action out is safe.
        auto action = std::move(const_cast<Event&>(m_heap.top()).action);
        m_now = m_heap.top().time;
        m_heap.pop();
        action();
        ++count;
        ++m_executed;
    }
    if (m_now < horizon) {
        m_now = horizon;
    }
    return count;
}

} // namespace manet
