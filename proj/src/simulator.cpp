#include "manet/simulator.hpp"

#include <algorithm>
#include <cmath>

namespace manet {

// ---------------------------------------------------------------------------
// RadioActivity
// ---------------------------------------------------------------------------

void RadioActivity::MarkBusy(SimTime start, SimTime end)
{
    if (end <= start) {
        return;
    }
    if (!m_intervals.empty() && start <= m_intervals.back().end) {
        m_intervals.back().end = std::max(m_intervals.back().end, end);
        return;
    }
    m_intervals.push_back({start, end});
}

SimTime RadioActivity::BusyWithin(SimTime from, SimTime to) const
{
    SimTime busy = 0;
    for (auto it = m_intervals.rbegin(); it != m_intervals.rend(); ++it) {
        if (it->end <= from) {
            break;
        }
        const SimTime lo = std::max(it->start, from);
        const SimTime hi = std::min(it->end, to);
        if (hi > lo) {
            busy += hi - lo;
        }
    }
    return busy;
}

void RadioActivity::Prune(SimTime t)
{
    while (!m_intervals.empty() && m_intervals.front().end < t) {
        m_intervals.pop_front();
    }
}

SimTime MediumModel::Airtime(std::uint32_t bytes) const
{
    const double micros = std::ceil(static_cast<double>(bytes) * 8.0 * kTicksPerSecond / bitrate);
    return perFrameOverhead + static_cast<SimTime>(micros);
}

// ---------------------------------------------------------------------------
// Host: the router's view of its node
// ---------------------------------------------------------------------------

class Simulator::Host : public RouterHost {
  public:
    Host(Simulator& sim, NodeId id)
        : m_sim(sim),
          m_id(id)
    {
    }

    SimTime Now() const override { return m_sim.Now(); }

    CostComponents SelfComponents() override { return m_sim.Components(m_id); }

    void Broadcast(Packet packet) override { m_sim.Transmit(m_id, std::move(packet), kBroadcast); }

    void Unicast(Packet packet, NodeId nextHop) override
    {
        m_sim.Transmit(m_id, std::move(packet), nextHop);
    }

    void ScheduleTimer(SimTime delay, std::function<void()> action) override
    {
        Simulator* sim = &m_sim;
        const NodeId id = m_id;
        m_sim.m_events.Schedule(m_sim.Now() + delay, EventKind::TimerFire,
                                [sim, id, action = std::move(action)] {
                                    if (sim->m_nodes[id].alive) {
                                        action();
                                    }
                                });
    }

    void DeliverToApp(const DataPacket& packet) override
    {
        if (m_sim.m_ledger.RecordDelivery(packet, m_sim.Now())) {
            const Packet p = packet;
            m_sim.Trace(TraceEvent::Deliver, m_id, packet.src, &p);
        }
    }

    void Drop(const Packet& packet, DropReason reason) override { m_sim.Drop(m_id, packet, reason); }

  private:
    Simulator& m_sim;
    NodeId m_id;
};

// ---------------------------------------------------------------------------
// Simulator
// ---------------------------------------------------------------------------

Simulator::Simulator(const Scenario& scenario, std::uint64_t seed, TraceWriter* trace)
    : m_scenario(scenario),
      m_seed(seed),
      m_trace(trace),
      m_mobility(scenario.Mobility()),
      m_bandwidthWindow(Seconds(scenario.bandwidthWindow))
{
    ValidateScenario(m_scenario);
    m_medium.range = scenario.range;
    m_medium.bitrate = scenario.bitrate;
    m_medium.perFrameOverhead = static_cast<SimTime>(std::llround(scenario.frameOverheadUs));
    m_rates.initial = EnergyFromUnits(scenario.initialEnergy);
    m_rates.txPerByte = EnergyFromUnits(scenario.eTxPerByte);
    m_rates.rxPerByte = EnergyFromUnits(scenario.eRxPerByte);
    m_ledger.duration = scenario.duration;

    const std::uint32_t n = scenario.nodes;
    m_nodes.reserve(n);
    for (NodeId id = 0; id < n; ++id) {
        NodeState node{.id = id,
                       .battery = Battery(m_rates.initial),
                       .alive = true,
                       .queue = FrameQueue(scenario.queueCapacity),
                       .radio = {},
                       .waypoint = {},
                       .mobilityRng = RngStream(seed, StreamPurpose::Mobility, id)};
        if (!scenario.fixedPositions.empty()) {
            node.waypoint = StaticWaypoint(scenario.fixedPositions[id]);
        } else {
            node.waypoint = InitialWaypoint(m_mobility, node.mobilityRng);
        }
        m_nodes.push_back(std::move(node));
    }
    m_debited.assign(n, 0);

    const RoutingParams routing = scenario.Routing();
    const CostPolicy policy = scenario.Policy();
    for (NodeId id = 0; id < n; ++id) {
        m_hosts.push_back(std::make_unique<Host>(*this, id));
        m_routers.push_back(std::make_unique<Router>(id, routing, policy, *m_hosts.back()));
    }

    const bool moving = scenario.fixedPositions.empty() && scenario.vMax > 0.0;
    if (moving) {
        for (NodeId id = 0; id < n; ++id) {
            ScheduleMobilityTick(id, m_mobility.granularity);
        }
    }

    if (scenario.autoTraffic) {
        m_flows = MakeFlows(n, scenario.trafficType, scenario.sendRate, scenario.packetSize,
                            scenario.duration, seed);
        for (const auto& flow : m_flows) {
            Generate(flow, m_events, [this](const DataPacket& p) { OriginateData(p); });
        }
    }
}

Simulator::~Simulator() = default;

Router& Simulator::RouterOf(NodeId id) { return *m_routers[id]; }

void Simulator::SetLinkBreakObserver(std::function<void(NodeId, NodeId)> observer)
{
    m_linkBreakObserver = std::move(observer);
}

const MetricsLedger& Simulator::Run()
{
    RunUntil(Seconds(m_scenario.duration));
    return m_ledger;
}

void Simulator::RunUntil(SimTime horizon) { m_events.RunUntil(horizon); }

void Simulator::Trace(TraceEvent event, NodeId node, NodeId peer, const Packet* packet)
{
    if (m_trace != nullptr) {
        m_trace->Write(Now(), event, node, peer, packet);
    }
}

void Simulator::AdvanceMobility(NodeId id)
{
    NodeState& node = m_nodes[id];
    Step(node.waypoint, m_mobility, Now(), node.mobilityRng);
}

void Simulator::ScheduleMobilityTick(NodeId id, SimTime at)
{
    if (at > Seconds(m_scenario.duration)) {
        return;
    }
    m_events.Schedule(at, EventKind::MobilityUpdate, [this, id, at] {
        AdvanceMobility(id);
        ScheduleMobilityTick(id, at + m_mobility.granularity);
    });
}

Vec2 Simulator::Position(NodeId id)
{
    AdvanceMobility(id);
    return PositionAt(m_nodes[id].waypoint, Now());
}

CostComponents Simulator::Components(NodeId id)
{
    if (!m_scenario.frozenComponents.empty()) {
        return m_scenario.frozenComponents[id];
    }
    return SampleComponents(m_nodes[id], Now(), m_bandwidthWindow);
}

void Simulator::ScheduleData(SimTime at, NodeId src, NodeId dst, AppType app, std::uint32_t seq)
{
    DataPacket packet;
    packet.src = src;
    packet.dst = dst;
    packet.appType = app;
    packet.seq = seq;
    packet.sizeBytes = m_scenario.packetSize;
    packet.createdAt = at;
    m_events.Schedule(at, EventKind::TrafficGen, [this, packet] { OriginateData(packet); });
}

void Simulator::OriginateData(const DataPacket& packet)
{
    ++m_ledger.generated;
    const Packet p = packet;
    Trace(TraceEvent::Generate, packet.src, packet.dst, &p);
    if (!m_nodes[packet.src].alive) {
        Drop(packet.src, p, DropReason::SenderDead);
        return;
    }
    m_routers[packet.src]->SendData(packet);
}

void Simulator::Drop(NodeId id, const Packet& packet, DropReason reason)
{
    switch (reason) {
    case DropReason::QueueOverflow:
        ++m_ledger.droppedOverflow;
        break;
    case DropReason::NoRoute:
        ++m_ledger.droppedNoRoute;
        break;
    case DropReason::DiscoveryFailed:
        ++m_ledger.droppedDiscovery;
        break;
    case DropReason::MacFailure:
        ++m_ledger.droppedMac;
        break;
    case DropReason::SenderDead:
        ++m_ledger.droppedSenderDead;
        break;
    case DropReason::NoReverseRoute:
        ++m_ledger.droppedNoReverseRoute;
        break;
    case DropReason::PendingOverflow:
        ++m_ledger.droppedPendingOverflow;
        break;
    }
    Trace(TraceEvent::Drop, id, static_cast<NodeId>(reason), &packet);
}

bool Simulator::EnqueueData(NodeId id, const DataPacket& packet, NodeId nextHop)
{
    NodeState& node = m_nodes[id];
    if (!node.queue.Push(Frame{packet, nextHop, 0})) {
        Drop(id, packet, DropReason::QueueOverflow);
        return false;
    }
    TryTransmit(id);
    return true;
}

void Simulator::Transmit(NodeId from, Packet packet, NodeId macDest)
{
    NodeState& node = m_nodes[from];
    if (!node.alive) {
        Drop(from, packet, DropReason::SenderDead);
        return;
    }
    if (!node.queue.Push(Frame{packet, macDest, 0})) {
        Drop(from, packet, DropReason::QueueOverflow);
        return;
    }
    TryTransmit(from);
}

void Simulator::TryTransmit(NodeId id)
{
    NodeState& node = m_nodes[id];
    if (!node.alive || node.transmitting || node.queue.Empty()) {
        return;
    }
    const SimTime busyUntil = node.radio.BusyUntil();
    if (busyUntil > Now()) {
        // Half-duplex radio: wait until the current reception/transmission ends.
        if (!node.wakeupPending) {
            node.wakeupPending = true;
            m_events.Schedule(busyUntil, EventKind::TimerFire, [this, id] {
                m_nodes[id].wakeupPending = false;
                TryTransmit(id);
            });
        }
        return;
    }
    StartTransmission(id);
}

void Simulator::StartTransmission(NodeId id)
{
    NodeState& sender = m_nodes[id];
    const Frame& frame = sender.queue.Front();
    const Packet packet = frame.packet;
    const NodeId macDest = frame.macDest;
    const std::uint32_t bytes = FrameBytes(packet);
    const SimTime now = Now();
    const SimTime end = now + m_medium.Airtime(bytes);

    sender.transmitting = true;
    Trace(TraceEvent::Tx, id, macDest, &packet);
    if (IsControl(packet)) {
        ++m_ledger.routingTxCount;
    } else {
        ++m_ledger.dataTxCount;
    }
    sender.radio.Prune(now - m_bandwidthWindow);
    sender.radio.MarkBusy(now, end);
    ConsumeEnergy(id, bytes, EnergyDirection::Tx);

    const Vec2 origin = Position(id);
    bool acknowledged = false;
    for (NodeId other = 0; other < m_nodes.size(); ++other) {
        if (other == id || !m_nodes[other].alive) {
            continue;
        }
        if (Distance(origin, Position(other)) > m_medium.range) {
            continue;
        }
        NodeState& receiver = m_nodes[other];
        Trace(TraceEvent::Rx, other, id, &packet);
        receiver.radio.Prune(now - m_bandwidthWindow);
        receiver.radio.MarkBusy(now, end);
        ConsumeEnergy(other, bytes, EnergyDirection::Rx);
        if (!receiver.alive) {
            continue;
        }
        if (other == macDest) {
            acknowledged = true;
        }
        m_events.Schedule(end, EventKind::PacketDelivery,
                          [this, other, packet, id, macDest] { Deliver(other, packet, id, macDest); });
    }
    m_events.Schedule(end, EventKind::PacketDelivery,
                      [this, id, acknowledged] { FinishTransmission(id, acknowledged); });
}

void Simulator::FinishTransmission(NodeId id, bool acknowledged)
{
    NodeState& node = m_nodes[id];
    node.transmitting = false;
    if (!node.alive || node.queue.Empty()) {
        return;
    }
    Frame& frame = node.queue.Front();
    if (frame.macDest == kBroadcast || acknowledged) {
        node.queue.PopFront();
        TryTransmit(id);
        return;
    }
    ++frame.failedAttempts;
    if (frame.failedAttempts <= m_scenario.maxMacRetries) {
        TryTransmit(id);
        return;
    }

    // Retries exhausted: the link is considered broken.
    const NodeId broken = frame.macDest;
    auto& frames = node.queue.Frames();
    std::vector<Packet> lost;
    for (auto it = frames.begin(); it != frames.end();) {
        if (it->macDest == broken) {
            lost.push_back(std::move(it->packet));
            it = frames.erase(it);
        } else {
            ++it;
        }
    }
    for (const auto& p : lost) {
        Drop(id, p, DropReason::MacFailure);
    }
    if (m_linkBreakObserver) {
        m_linkBreakObserver(id, broken);
    } else {
        m_routers[id]->HandleLinkBreak(broken);
    }
    TryTransmit(id);
}

void Simulator::Deliver(NodeId receiver, const Packet& packet, NodeId from, NodeId macDest)
{
    if (!m_nodes[receiver].alive) {
        return;
    }
    if (macDest != kBroadcast && macDest != receiver) {
        return;
    }
    m_routers[receiver]->Receive(packet, from);
}

void Simulator::ConsumeEnergy(NodeId id, std::uint32_t bytes, EnergyDirection direction)
{
    NodeState& node = m_nodes[id];
    if (!node.alive) {
        return;
    }
    const EnergyNano perByte = direction == EnergyDirection::Tx ? m_rates.txPerByte : m_rates.rxPerByte;
    m_debited[id] += node.battery.Debit(perByte * static_cast<EnergyNano>(bytes));
    if (node.battery.Depleted()) {
        Kill(id);
    }
}

void Simulator::Kill(NodeId id)
{
    NodeState& node = m_nodes[id];
    if (!node.alive) {
        return;
    }
    node.alive = false;
    ++m_ledger.deadNodes;
    Trace(TraceEvent::Death, id, kBroadcast, nullptr);
}

MetricsLedger RunScenario(const Scenario& scenario, std::uint64_t seed, TraceWriter* trace)
{
    Simulator sim(scenario, seed, trace);
    return sim.Run();
}

} // namespace manet
