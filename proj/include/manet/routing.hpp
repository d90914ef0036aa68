#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "manet/cost_model.hpp"
#include "manet/packets.hpp"
#include "manet/sim_time.hpp"

namespace manet {

enum class Protocol { Aodv, Cpacl, Tspba };

const char* ToString(Protocol protocol);
std::optional<Protocol> ParseProtocol(std::string_view name);

enum class DropReason {
    QueueOverflow,
    NoRoute,
    DiscoveryFailed,
    MacFailure,
    SenderDead,
    NoReverseRoute,
    PendingOverflow,
};

struct RoutingParams {
    SimTime activeRouteTimeout{Seconds(10.0)};
    SimTime collectWindow{MilliSeconds(50)};
    SimTime rreqTimeout{Seconds(1.0)};
    std::uint32_t maxRetries{3};
    std::uint32_t ttl{35};
    std::uint32_t rMax{3};
    double costEpsilon{1e-6};
    /// First discovery attempt whose RREQ carries isComputeCost = true.
    std::uint32_t computeCostFromAttempt{2};
    std::size_t pendingCapacity{64};
};

/**
 * How a protocol variant prices a node and how many routing tables it keeps.
 * AODV prices every node at 1 (hop count), CPACL at its consumed-battery
 * fraction, TSPBA with the per-application weighted sum.
 */
struct CostPolicy {
    Protocol protocol{Protocol::Tspba};
    std::optional<WeightProfile> weightsOverride;
    std::optional<bool> dualTablesOverride;

    bool DualTables() const;
    double NodeCostFor(AppType app, const CostComponents& c) const;
};

/// Services a router needs from the node that hosts it.
class RouterHost {
  public:
    virtual ~RouterHost() = default;

    virtual SimTime Now() const = 0;
    virtual CostComponents SelfComponents() = 0;
    virtual void Broadcast(Packet packet) = 0;
    virtual void Unicast(Packet packet, NodeId nextHop) = 0;
    virtual void ScheduleTimer(SimTime delay, std::function<void()> action) = 0;
    virtual void DeliverToApp(const DataPacket& packet) = 0;
    virtual void Drop(const Packet& packet, DropReason reason) = 0;
};

class RouteTable {
  public:
    RouteEntry* Find(NodeId dest);
    const RouteEntry* Find(NodeId dest) const;

    /// Inserts or replaces following freshness, then cost, then hop count. Returns true if changed.
    bool Offer(const RouteEntry& candidate);

    std::map<NodeId, RouteEntry>& Entries() { return m_entries; }
    const std::map<NodeId, RouteEntry>& Entries() const { return m_entries; }

  private:
    std::map<NodeId, RouteEntry> m_entries;
};

/// Sequence-number comparison with wrap-around, as in AODV.
constexpr bool SeqNewer(SeqNo a, SeqNo b) { return static_cast<std::int32_t>(a - b) > 0; }

enum class Filtration { Drop, Accept };

struct RreqKey {
    NodeId source{0};
    std::uint32_t broadcastId{0};
    AppType app{AppType::Type1};

    auto operator<=>(const RreqKey&) const = default;
};

struct RreqSeenRecord {
    RreqKey key;
    double bestCost{0.0};
    std::uint32_t forwardCount{0};
    SimTime firstSeen{0};
};

struct PendingDiscovery {
    NodeId dest{0};
    AppType app{AppType::Type1};
    std::uint32_t attempt{0};
    SimTime deadline{0};
    std::deque<DataPacket> buffered;
};

/**
 * Per-node protocol state machine shared by AODV, CPACL-AODV and TSPBA-AODV.
 * The variants differ only in the injected CostPolicy and the number of tables.
 */
class Router {
  public:
    Router(NodeId self, RoutingParams params, CostPolicy policy, RouterHost& host);

    NodeId Self() const { return m_self; }
    const RoutingParams& Params() const { return m_params; }
    const CostPolicy& Policy() const { return m_policy; }

    /// Entry point for every frame addressed to (or broadcast at) this node.
    void Receive(const Packet& packet, NodeId prevHop);

    /// Data handed down by the local application.
    void SendData(const DataPacket& packet);

    // Route discovery, split into the steps a received RREQ goes through.
    void OriginateDiscovery(NodeId dest, AppType app);
    Filtration RequestFiltration(const Rreq& rreq);
    void SourceEntryRenewal(const Rreq& rreq, NodeId prevHop);
    void ReplyGeneration(const Rreq& rreq, NodeId prevHop);
    std::optional<Rreq> RequestPropagation(const Rreq& rreq);

    void HandleRrep(const Rrep& rrep, NodeId prevHop);
    std::vector<Rerr> HandleLinkBreak(NodeId brokenNextHop);
    void HandleRerr(const Rerr& rerr, NodeId from);

    std::optional<RouteEntry> LookupRoute(NodeId dest, AppType app);

    double OwnCost(AppType app);

    RouteTable& TableFor(AppType app);
    const RouteTable& TableFor(AppType app) const;
    std::size_t TableCount() const { return m_policy.DualTables() ? 2 : 1; }

    const RreqSeenRecord* SeenRecord(const RreqKey& key) const;
    const PendingDiscovery* Pending(NodeId dest, AppType app) const;
    SeqNo OwnSeq() const { return m_seq; }

  private:
    struct ReplyCollection {
        Rreq best;
        NodeId prevHop{0};
        bool open{true};
    };

    void FlushReply(const RreqKey& key);
    void OnDiscoveryTimeout(NodeId dest, AppType app, std::uint64_t discoveryId);
    void ForwardData(const DataPacket& packet);
    void PruneSeen();

    NodeId m_self;
    RoutingParams m_params;
    CostPolicy m_policy;
    RouterHost& m_host;

    std::array<RouteTable, 2> m_tables;
    SeqNo m_seq{0};
    std::uint32_t m_broadcastId{0};
    std::uint64_t m_discoveryCounter{0};

    std::map<RreqKey, RreqSeenRecord> m_seen;
    std::map<RreqKey, ReplyCollection> m_collect;
    std::map<std::pair<NodeId, AppType>, std::pair<PendingDiscovery, std::uint64_t>> m_pending;
};

} // namespace manet
