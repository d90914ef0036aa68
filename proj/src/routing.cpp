#include "manet/routing.hpp"

#include <limits>

namespace manet {

const char* ToString(Protocol protocol)
{
    switch (protocol) {
    case Protocol::Aodv:
        return "aodv";
    case Protocol::Cpacl:
        return "cpacl";
    case Protocol::Tspba:
        return "tspba";
    }
    return "?";
}

std::optional<Protocol> ParseProtocol(std::string_view name)
{
    if (name == "aodv") {
        return Protocol::Aodv;
    }
    if (name == "cpacl") {
        return Protocol::Cpacl;
    }
    if (name == "tspba") {
        return Protocol::Tspba;
    }
    return std::nullopt;
}

bool CostPolicy::DualTables() const
{
    if (dualTablesOverride) {
        return *dualTablesOverride;
    }
    return protocol == Protocol::Tspba;
}

double CostPolicy::NodeCostFor(AppType app, const CostComponents& c) const
{
    switch (protocol) {
    case Protocol::Aodv:
        return 1.0;
    case Protocol::Cpacl:
        return c.powerCost;
    case Protocol::Tspba:
        return NodeCost(weightsOverride ? *weightsOverride : Weights(app), c);
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// RouteTable
// ---------------------------------------------------------------------------

RouteEntry* RouteTable::Find(NodeId dest)
{
    auto it = m_entries.find(dest);
    return it == m_entries.end() ? nullptr : &it->second;
}

const RouteEntry* RouteTable::Find(NodeId dest) const
{
    auto it = m_entries.find(dest);
    return it == m_entries.end() ? nullptr : &it->second;
}

bool RouteTable::Offer(const RouteEntry& candidate)
{
    auto it = m_entries.find(candidate.dest);
    if (it == m_entries.end()) {
        m_entries.emplace(candidate.dest, candidate);
        return true;
    }
    RouteEntry& existing = it->second;
    bool replace = false;
    if (SeqNewer(candidate.destSeq, existing.destSeq)) {
        replace = true;
    } else if (candidate.destSeq == existing.destSeq) {
        if (!existing.valid) {
            replace = true;
        } else if (candidate.cumulativeCost < existing.cumulativeCost) {
            replace = true;
        } else if (candidate.cumulativeCost == existing.cumulativeCost &&
                   candidate.hopCount < existing.hopCount) {
            replace = true;
        }
    }
    if (replace) {
        existing = candidate;
    }
    return replace;
}

// ---------------------------------------------------------------------------
// Router
// ---------------------------------------------------------------------------

Router::Router(NodeId self, RoutingParams params, CostPolicy policy, RouterHost& host)
    : m_self(self),
      m_params(params),
      m_policy(policy),
      m_host(host)
{
    if (m_policy.protocol == Protocol::Aodv) {
        // Plain AODV: the destination answers the first request, duplicates never re-forward.
        m_params.collectWindow = 0;
        m_params.computeCostFromAttempt = std::numeric_limits<std::uint32_t>::max();
    }
}

RouteTable& Router::TableFor(AppType app)
{
    return m_tables[m_policy.DualTables() ? AppIndex(app) : 0];
}

const RouteTable& Router::TableFor(AppType app) const
{
    return m_tables[m_policy.DualTables() ? AppIndex(app) : 0];
}

double Router::OwnCost(AppType app) { return m_policy.NodeCostFor(app, m_host.SelfComponents()); }

const RreqSeenRecord* Router::SeenRecord(const RreqKey& key) const
{
    auto it = m_seen.find(key);
    return it == m_seen.end() ? nullptr : &it->second;
}

const PendingDiscovery* Router::Pending(NodeId dest, AppType app) const
{
    auto it = m_pending.find({dest, app});
    return it == m_pending.end() ? nullptr : &it->second.first;
}

void Router::Receive(const Packet& packet, NodeId prevHop)
{
    if (const auto* rreq = std::get_if<Rreq>(&packet)) {
        if (rreq->sourceAddr == m_self) {
            return;
        }
        if (RequestFiltration(*rreq) == Filtration::Drop) {
            return;
        }
        SourceEntryRenewal(*rreq, prevHop);
        if (rreq->destAddr == m_self) {
            ReplyGeneration(*rreq, prevHop);
        } else if (auto out = RequestPropagation(*rreq)) {
            m_host.Broadcast(*out);
        }
    } else if (const auto* rrep = std::get_if<Rrep>(&packet)) {
        HandleRrep(*rrep, prevHop);
    } else if (const auto* rerr = std::get_if<Rerr>(&packet)) {
        HandleRerr(*rerr, prevHop);
    } else {
        const auto& data = std::get<DataPacket>(packet);
        if (data.dst == m_self) {
            m_host.DeliverToApp(data);
        } else {
            ForwardData(data);
        }
    }
}

void Router::SendData(const DataPacket& packet)
{
    if (auto route = LookupRoute(packet.dst, packet.appType)) {
        m_host.Unicast(packet, route->nextHop);
        return;
    }
    auto it = m_pending.find({packet.dst, packet.appType});
    if (it != m_pending.end()) {
        auto& buffered = it->second.first.buffered;
        if (buffered.size() >= m_params.pendingCapacity) {
            m_host.Drop(packet, DropReason::PendingOverflow);
            return;
        }
        buffered.push_back(packet);
        return;
    }
    PendingDiscovery pending;
    pending.dest = packet.dst;
    pending.app = packet.appType;
    pending.buffered.push_back(packet);
    m_pending.emplace(std::make_pair(packet.dst, packet.appType),
                      std::make_pair(std::move(pending), std::uint64_t{0}));
    OriginateDiscovery(packet.dst, packet.appType);
}

void Router::ForwardData(const DataPacket& packet)
{
    if (auto route = LookupRoute(packet.dst, packet.appType)) {
        m_host.Unicast(packet, route->nextHop);
    } else {
        m_host.Drop(packet, DropReason::NoRoute);
    }
}

void Router::OriginateDiscovery(NodeId dest, AppType app)
{
    auto it = m_pending.find({dest, app});
    if (it == m_pending.end()) {
        PendingDiscovery pending;
        pending.dest = dest;
        pending.app = app;
        it = m_pending.emplace(std::make_pair(dest, app), std::make_pair(std::move(pending), 0))
                 .first;
    }
    PendingDiscovery& pending = it->second.first;
    ++pending.attempt;
    pending.deadline = m_host.Now() + m_params.rreqTimeout;
    const std::uint64_t discoveryId = ++m_discoveryCounter;
    it->second.second = discoveryId;

    ++m_seq;
    Rreq rreq;
    rreq.sourceAddr = m_self;
    rreq.sourceSeq = m_seq;
    rreq.broadcastId = ++m_broadcastId;
    rreq.destAddr = dest;
    if (const RouteEntry* known = TableFor(app).Find(dest)) {
        rreq.destSeq = known->destSeq;
    }
    rreq.hopCount = 0;
    rreq.ttl = m_params.ttl;
    rreq.isComputeCost = pending.attempt >= m_params.computeCostFromAttempt;
    rreq.appType = app;
    rreq.cumulativeCost = OwnCost(app);

    PruneSeen();
    m_host.Broadcast(rreq);
    m_host.ScheduleTimer(m_params.rreqTimeout,
                         [this, dest, app, discoveryId] { OnDiscoveryTimeout(dest, app, discoveryId); });
}

void Router::OnDiscoveryTimeout(NodeId dest, AppType app, std::uint64_t discoveryId)
{
    auto it = m_pending.find({dest, app});
    if (it == m_pending.end() || it->second.second != discoveryId) {
        return;
    }
    if (it->second.first.attempt < m_params.maxRetries) {
        OriginateDiscovery(dest, app);
        return;
    }
    // Discovery failed: everything buffered for this destination is lost.
    std::deque<DataPacket> lost = std::move(it->second.first.buffered);
    m_pending.erase(it);
    for (const auto& packet : lost) {
        m_host.Drop(packet, DropReason::DiscoveryFailed);
    }
}

Filtration Router::RequestFiltration(const Rreq& rreq)
{
    const RreqKey key{rreq.sourceAddr, rreq.broadcastId, rreq.appType};
    auto it = m_seen.find(key);
    if (it == m_seen.end()) {
        RreqSeenRecord record;
        record.key = key;
        record.bestCost = rreq.cumulativeCost;
        record.firstSeen = m_host.Now();
        m_seen.emplace(key, record);
        return Filtration::Accept;
    }
    RreqSeenRecord& record = it->second;

    if (rreq.destAddr == m_self) {
        // The destination keeps collecting copies while its reply window is open.
        auto col = m_collect.find(key);
        if (col != m_collect.end() && col->second.open) {
            if (rreq.cumulativeCost < record.bestCost) {
                record.bestCost = rreq.cumulativeCost;
            }
            return Filtration::Accept;
        }
        return Filtration::Drop;
    }

    if (rreq.isComputeCost && rreq.cumulativeCost + m_params.costEpsilon < record.bestCost &&
        record.forwardCount < m_params.rMax) {
        record.bestCost = rreq.cumulativeCost;
        return Filtration::Accept;
    }
    return Filtration::Drop;
}

void Router::SourceEntryRenewal(const Rreq& rreq, NodeId prevHop)
{
    RouteEntry candidate;
    candidate.dest = rreq.sourceAddr;
    candidate.nextHop = prevHop;
    candidate.destSeq = rreq.sourceSeq;
    candidate.hopCount = rreq.hopCount + 1;
    candidate.expiry = m_host.Now() + m_params.activeRouteTimeout;
    candidate.cumulativeCost = rreq.cumulativeCost;
    TableFor(rreq.appType).Offer(candidate);
}

void Router::ReplyGeneration(const Rreq& rreq, NodeId prevHop)
{
    if (rreq.destAddr != m_self) {
        return;
    }
    const RreqKey key{rreq.sourceAddr, rreq.broadcastId, rreq.appType};
    auto it = m_collect.find(key);
    if (it == m_collect.end()) {
        m_collect.emplace(key, ReplyCollection{rreq, prevHop, true});
        m_host.ScheduleTimer(m_params.collectWindow, [this, key] { FlushReply(key); });
        return;
    }
    ReplyCollection& col = it->second;
    if (col.open && rreq.cumulativeCost < col.best.cumulativeCost) {
        col.best = rreq;
        col.prevHop = prevHop;
    }
}

void Router::FlushReply(const RreqKey& key)
{
    auto it = m_collect.find(key);
    if (it == m_collect.end() || !it->second.open) {
        return;
    }
    ReplyCollection& col = it->second;
    col.open = false;
    const Rreq& best = col.best;

    if (SeqNewer(best.destSeq, m_seq)) {
        m_seq = best.destSeq;
    }
    ++m_seq;

    Rrep rrep;
    rrep.sourceAddr = best.sourceAddr;
    rrep.destAddr = m_self;
    rrep.destSeq = m_seq;
    rrep.hopCount = 0;
    rrep.lifetimeMs = static_cast<std::uint32_t>(m_params.activeRouteTimeout / 1000);
    rrep.appType = best.appType;
    // The destination is an endpoint of the route, so its own cost is part of the total.
    rrep.cumulativeCost = best.cumulativeCost + OwnCost(best.appType);
    m_host.Unicast(rrep, col.prevHop);
}

std::optional<Rreq> Router::RequestPropagation(const Rreq& rreq)
{
    if (rreq.destAddr == m_self || rreq.ttl == 0) {
        return std::nullopt;
    }
    Rreq out = rreq;
    out.hopCount += 1;
    out.ttl -= 1;
    out.cumulativeCost += OwnCost(rreq.appType);

    auto it = m_seen.find(RreqKey{rreq.sourceAddr, rreq.broadcastId, rreq.appType});
    if (it != m_seen.end()) {
        ++it->second.forwardCount;
    }
    return out;
}

void Router::HandleRrep(const Rrep& rrep, NodeId prevHop)
{
    const SimTime now = m_host.Now();
    RouteEntry forward;
    forward.dest = rrep.destAddr;
    forward.nextHop = prevHop;
    forward.destSeq = rrep.destSeq;
    forward.hopCount = rrep.hopCount + 1;
    forward.expiry = now + MilliSeconds(rrep.lifetimeMs);
    forward.cumulativeCost = rrep.cumulativeCost;
    TableFor(rrep.appType).Offer(forward);

    if (rrep.sourceAddr == m_self) {
        auto it = m_pending.find({rrep.destAddr, rrep.appType});
        if (it == m_pending.end()) {
            return;
        }
        std::deque<DataPacket> buffered = std::move(it->second.first.buffered);
        m_pending.erase(it);
        for (const auto& packet : buffered) {
            if (auto route = LookupRoute(packet.dst, packet.appType)) {
                m_host.Unicast(packet, route->nextHop);
            } else {
                m_host.Drop(packet, DropReason::NoRoute);
            }
        }
        return;
    }

    auto reverse = LookupRoute(rrep.sourceAddr, rrep.appType);
    if (!reverse) {
        m_host.Drop(rrep, DropReason::NoReverseRoute);
        return;
    }
    Rrep out = rrep;
    out.hopCount += 1;
    m_host.Unicast(out, reverse->nextHop);
}

std::vector<Rerr> Router::HandleLinkBreak(NodeId brokenNextHop)
{
    std::vector<Rerr> errors;
    const std::array<AppType, 2> apps{AppType::Type1, AppType::Type2};
    for (std::size_t t = 0; t < TableCount(); ++t) {
        Rerr rerr;
        rerr.appType = apps[t];
        for (auto& [dest, entry] : m_tables[t].Entries()) {
            if (entry.valid && entry.nextHop == brokenNextHop) {
                entry.valid = false;
                ++entry.destSeq;
                rerr.unreachable.push_back({dest, entry.destSeq});
            }
        }
        if (!rerr.unreachable.empty()) {
            errors.push_back(std::move(rerr));
        }
    }
    for (const auto& rerr : errors) {
        m_host.Broadcast(rerr);
    }
    return errors;
}

void Router::HandleRerr(const Rerr& rerr, NodeId from)
{
    Rerr out;
    out.appType = rerr.appType;
    RouteTable& table = TableFor(rerr.appType);
    for (const auto& u : rerr.unreachable) {
        RouteEntry* entry = table.Find(u.addr);
        if (entry == nullptr || !entry->valid || entry->nextHop != from) {
            continue;
        }
        entry->valid = false;
        if (SeqNewer(u.seq, entry->destSeq)) {
            entry->destSeq = u.seq;
        }
        out.unreachable.push_back({u.addr, entry->destSeq});
    }
    if (!out.unreachable.empty()) {
        m_host.Broadcast(out);
    }
}

std::optional<RouteEntry> Router::LookupRoute(NodeId dest, AppType app)
{
    RouteEntry* entry = TableFor(app).Find(dest);
    const SimTime now = m_host.Now();
    if (entry == nullptr || !entry->IsUsable(now)) {
        return std::nullopt;
    }
    if (entry->expiry < now + m_params.activeRouteTimeout) {
        entry->expiry = now + m_params.activeRouteTimeout;
    }
    return *entry;
}

void Router::PruneSeen()
{
    constexpr std::size_t kPruneThreshold = 4096;
    if (m_seen.size() < kPruneThreshold) {
        return;
    }
    const SimTime horizon =
        m_host.Now() - 2 * static_cast<SimTime>(m_params.maxRetries) * m_params.rreqTimeout;
    for (auto it = m_seen.begin(); it != m_seen.end();) {
        if (it->second.firstSeen < horizon) {
            m_collect.erase(it->first);
            it = m_seen.erase(it);
        } else {
            ++it;
        }
    }
}

} // namespace manet
