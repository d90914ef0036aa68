#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "manet/event_queue.hpp"
#include "manet/metrics.hpp"
#include "manet/node_state.hpp"
#include "manet/routing.hpp"
#include "manet/scenario.hpp"
#include "manet/trace.hpp"
#include "manet/traffic.hpp"

namespace manet {

/// Unit-disk medium with per-frame airtime; collisions are not modelled.
struct MediumModel {
    double range{250.0};
    double bitrate{2'000'000.0};
    SimTime perFrameOverhead{0};

    SimTime Airtime(std::uint32_t bytes) const;
};

enum class EnergyDirection { Tx, Rx };

/**
 * One simulation run: owns the event queue, the nodes and their routers.
 * Strictly single-threaded; identical (scenario, seed) pairs give identical runs.
 */
class Simulator {
  public:
    Simulator(const Scenario& scenario, std::uint64_t seed, TraceWriter* trace = nullptr);
    ~Simulator();

    Simulator(const Simulator&) = delete;
    Simulator& operator=(const Simulator&) = delete;

    /// Runs to the scenario horizon (inclusive) and returns the ledger.
    const MetricsLedger& Run();
    /// Runs to an explicit horizon; may be called repeatedly with increasing horizons.
    void RunUntil(SimTime horizon);

    /// Scripted traffic: the packet is created at `at` by `src`.
    void ScheduleData(SimTime at, NodeId src, NodeId dst, AppType app, std::uint32_t seq = 0);

    /// Queues a frame at a node as the routing layer would.
    void Transmit(NodeId from, Packet packet, NodeId macDest);

    void ConsumeEnergy(NodeId node, std::uint32_t bytes, EnergyDirection direction);
    bool EnqueueData(NodeId node, const DataPacket& packet, NodeId nextHop);

    /// Called when a unicast exhausts its MAC retries; the default forwards to the router.
    void SetLinkBreakObserver(std::function<void(NodeId node, NodeId nextHop)> observer);

    SimTime Now() const { return m_events.Now(); }
    EventQueue& Events() { return m_events; }
    const Scenario& GetScenario() const { return m_scenario; }
    const MediumModel& Medium() const { return m_medium; }
    const MetricsLedger& Ledger() const { return m_ledger; }
    std::size_t NodeCount() const { return m_nodes.size(); }
    NodeState& Node(NodeId id) { return m_nodes[id]; }
    const NodeState& Node(NodeId id) const { return m_nodes[id]; }
    Router& RouterOf(NodeId id);
    Vec2 Position(NodeId id);
    CostComponents Components(NodeId id);
    const std::vector<FlowSpec>& Flows() const { return m_flows; }
    /// Sum of actual energy debits per node, in nano-units.
    const std::vector<EnergyNano>& EnergyDebited() const { return m_debited; }
    EnergyRates Rates() const { return m_rates; }

  private:
    class Host;

    void TryTransmit(NodeId id);
    void StartTransmission(NodeId id);
    void FinishTransmission(NodeId id, bool acknowledged);
    void Deliver(NodeId receiver, const Packet& packet, NodeId from, NodeId macDest);
    void Kill(NodeId id);
    void Drop(NodeId id, const Packet& packet, DropReason reason);
    void OriginateData(const DataPacket& packet);
    void AdvanceMobility(NodeId id);
    void ScheduleMobilityTick(NodeId id, SimTime at);
    void Trace(TraceEvent event, NodeId node, NodeId peer, const Packet* packet);

    Scenario m_scenario;
    std::uint64_t m_seed;
    TraceWriter* m_trace;
    EventQueue m_events;
    MediumModel m_medium;
    MobilityParams m_mobility;
    EnergyRates m_rates;
    SimTime m_bandwidthWindow;
    std::vector<NodeState> m_nodes;
    std::vector<std::unique_ptr<Host>> m_hosts;
    std::vector<std::unique_ptr<Router>> m_routers;
    std::vector<EnergyNano> m_debited;
    std::vector<FlowSpec> m_flows;
    MetricsLedger m_ledger;
    std::function<void(NodeId, NodeId)> m_linkBreakObserver;
};

/// Convenience wrapper: one run of `scenario` with `seed`.
MetricsLedger RunScenario(const Scenario& scenario, std::uint64_t seed, TraceWriter* trace = nullptr);

} // namespace manet
