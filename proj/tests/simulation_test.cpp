#include <gtest/gtest.h>

#include <map>
#include <sstream>
#include <tuple>

#include "manet/simulator.hpp"
#include "manet/trace.hpp"
#include "test_support.hpp"

namespace manet {
namespace {

Scenario MidSized(Protocol protocol)
{
    Scenario s;
    s.nodes = 20;
    s.fieldX = 600.0;
    s.fieldY = 600.0;
    s.duration = 60.0;
    s.protocol = protocol;
    s.trafficType = AppType::Type2;
    return s;
}

std::string TraceOf(const Scenario& s, std::uint64_t seed, MetricsLedger* ledger = nullptr)
{
    std::ostringstream out;
    TraceWriter writer(out);
    const MetricsLedger l = RunScenario(s, seed, &writer);
    if (ledger != nullptr) {
        *ledger = l;
    }
    return out.str();
}

TEST(Determinism, SameSeedSameTraceAndMetrics)
{
    for (Protocol p : {Protocol::Aodv, Protocol::Cpacl, Protocol::Tspba}) {
        MetricsLedger a;
        MetricsLedger b;
        const std::string ta = TraceOf(MidSized(p), 9, &a);
        const std::string tb = TraceOf(MidSized(p), 9, &b);
        EXPECT_EQ(ta, tb) << ToString(p);
        EXPECT_EQ(ComputeMetrics(a), ComputeMetrics(b));
        EXPECT_GT(a.delivered, 0u);
    }
}

TEST(Determinism, DifferentSeedsDiffer)
{
    EXPECT_NE(TraceOf(MidSized(Protocol::Tspba), 1), TraceOf(MidSized(Protocol::Tspba), 2));
}

TEST(TraceConsistency, MetricsFromTraceEqualLedgerMetrics)
{
    for (Protocol p : {Protocol::Aodv, Protocol::Cpacl, Protocol::Tspba}) {
        MetricsLedger ledger;
        std::istringstream in(TraceOf(MidSized(p), 5, &ledger));
        const MetricsLedger rebuilt = LedgerFromTrace(in, ledger.duration);
        EXPECT_EQ(ComputeMetrics(rebuilt), ComputeMetrics(ledger)) << ToString(p);
        EXPECT_EQ(rebuilt.generated, ledger.generated);
        EXPECT_EQ(rebuilt.routingTxCount, ledger.routingTxCount);
        EXPECT_EQ(rebuilt.sumDelay, ledger.sumDelay);
    }
}

TEST(EnergyConservation, DebitsReplayExactlyAndDeadNodesStaySilent)
{
    Scenario s = MidSized(Protocol::Tspba);
    s.eTxPerByte = 0.002; // drains batteries within the run
    s.eRxPerByte = 0.001;
    std::ostringstream out;
    TraceWriter writer(out);
    Simulator sim(s, 3, &writer);
    sim.Run();
    ASSERT_GT(sim.Ledger().deadNodes, 0u);

    std::istringstream in(out.str());
    const EnergyReplay replay = ReplayEnergy(in, sim.NodeCount(), sim.Rates());
    EXPECT_EQ(replay.framesFromDeadSenders, 0u);
    for (NodeId id = 0; id < sim.NodeCount(); ++id) {
        const Battery& b = sim.Node(id).battery;
        EXPECT_EQ(b.Initial() - b.Remaining(), sim.EnergyDebited()[id]) << "node " << id;
        EXPECT_EQ(replay.remaining[id], b.Remaining()) << "node " << id;
        EXPECT_EQ(replay.debited[id], sim.EnergyDebited()[id]) << "node " << id;
        EXPECT_GE(b.Remaining(), 0);
        EXPECT_EQ(sim.Node(id).alive, b.Remaining() > 0);
    }
}

TEST(PacketInvariants, RrepCostConstantAndRreqCostMonotone)
{
    Scenario s = MidSized(Protocol::Tspba);
    s.computeCostFromAttempt = 1;
    std::istringstream in(TraceOf(s, 6));
    const auto records = ReadTrace(in);

    std::map<std::tuple<NodeId, NodeId, SeqNo, AppType>, double> rrepCost;
    std::map<std::tuple<NodeId, std::uint32_t, AppType, std::uint32_t>, double> cheapestAtHop;
    std::size_t rreps = 0;
    std::size_t forwardedRreqs = 0;
    for (const auto& rec : records) {
        if (rec.event != TraceEvent::Tx || !rec.packet) {
            continue;
        }
        if (const auto* rrep = std::get_if<Rrep>(&*rec.packet)) {
            const auto key = std::make_tuple(rrep->sourceAddr, rrep->destAddr, rrep->destSeq, rrep->appType);
            auto [it, inserted] = rrepCost.emplace(key, rrep->cumulativeCost);
            if (!inserted) {
                EXPECT_EQ(it->second, rrep->cumulativeCost);
            }
            ++rreps;
        } else if (const auto* rreq = std::get_if<Rreq>(&*rec.packet)) {
            const auto key = std::make_tuple(rreq->sourceAddr, rreq->broadcastId, rreq->appType, rreq->hopCount);
            if (rreq->hopCount > 0) {
                const auto prev = cheapestAtHop.find(
                    std::make_tuple(rreq->sourceAddr, rreq->broadcastId, rreq->appType, rreq->hopCount - 1));
                ASSERT_NE(prev, cheapestAtHop.end());
                EXPECT_GE(rreq->cumulativeCost, prev->second);
                ++forwardedRreqs;
            }
            auto [it, inserted] = cheapestAtHop.emplace(key, rreq->cumulativeCost);
            if (!inserted) {
                it->second = std::min(it->second, rreq->cumulativeCost);
            }
        }
    }
    EXPECT_GT(rreps, 0u);
    EXPECT_GT(forwardedRreqs, 0u);
}

TEST(ProtocolEquivalence, PowerOnlyTspbaOnOneTableMatchesCpacl)
{
    Scenario cpacl = MidSized(Protocol::Cpacl);
    cpacl.eTxPerByte = 0.0002;
    cpacl.eRxPerByte = 0.0001;
    Scenario tspba = cpacl;
    tspba.protocol = Protocol::Tspba;
    tspba.weightsOverride = WeightProfile{0.0, 0.0, 1.0};
    tspba.dualTablesOverride = false;
    for (std::uint64_t seed : {1u, 2u}) {
        MetricsLedger a;
        const std::string ta = TraceOf(cpacl, seed, &a);
        EXPECT_EQ(ta, TraceOf(tspba, seed)) << "seed " << seed;
        EXPECT_GT(a.delivered, 0u);
    }
}

TEST(ProtocolEquivalence, UnitCostsWithoutCollectionMatchAodvNextHops)
{
    std::mt19937_64 gen(77);
    for (int topo = 0; topo < 5; ++topo) {
        const auto positions = testing::RandomConnectedTopology(gen, 10, 600.0, 250.0);
        Scenario aodv = testing::StaticScenario(positions, Protocol::Aodv);
        Scenario tspba = aodv;
        tspba.protocol = Protocol::Tspba;
        tspba.collectWindow = 0.0;
        tspba.frozenComponents.assign(positions.size(), testing::Uniform(1.0));
        Simulator a(aodv, 1);
        Simulator t(tspba, 1);
        for (NodeId src = 0; src < positions.size(); ++src) {
            const NodeId dst = (src + 3) % positions.size();
            a.ScheduleData(Seconds(1.0 + src), src, dst, AppType::Type2, src);
            t.ScheduleData(Seconds(1.0 + src), src, dst, AppType::Type2, src);
        }
        a.RunUntil(Seconds(20.0));
        t.RunUntil(Seconds(20.0));
        for (NodeId n = 0; n < positions.size(); ++n) {
            const auto& ea = a.RouterOf(n).TableFor(AppType::Type2).Entries();
            const auto& et = t.RouterOf(n).TableFor(AppType::Type2).Entries();
            ASSERT_EQ(ea.size(), et.size()) << "topology " << topo << " node " << n;
            for (const auto& [dest, entry] : ea) {
                ASSERT_EQ(et.count(dest), 1u);
                EXPECT_EQ(et.at(dest).nextHop, entry.nextHop);
            }
        }
    }
}

TEST(Mobility, MovingNodesChangeNeighbourhoods)
{
    Scenario s = MidSized(Protocol::Tspba);
    s.vMin = 10.0;
    s.vMax = 20.0;
    Simulator sim(s, 2);
    const Vec2 before = sim.Position(0);
    sim.RunUntil(Seconds(30.0));
    EXPECT_NE(sim.Position(0), before);
}

} // namespace
} // namespace manet
