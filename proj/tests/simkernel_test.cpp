#include <gtest/gtest.h>

#include <sstream>
#include <utility>
#include <vector>

#include "manet/cost_model.hpp"
#include "manet/simulator.hpp"
#include "manet/trace.hpp"
#include "test_support.hpp"

namespace manet {
namespace {

DataPacket Payload(NodeId src, NodeId dst, std::uint32_t bytes)
{
    DataPacket p;
    p.src = src;
    p.dst = dst;
    p.sizeBytes = bytes;
    return p;
}

Scenario Pair(double distance)
{
    Scenario s = testing::StaticScenario({{0, 0}, {distance, 0}}, Protocol::Tspba);
    s.frameOverheadUs = 0.0;
    s.eTxPerByte = 0.002;
    s.eRxPerByte = 0.001;
    return s;
}

TEST(Medium, AirtimeOf512BytesAt2Mbps)
{
    MediumModel m;
    m.bitrate = 2'000'000.0;
    m.perFrameOverhead = 0;
    EXPECT_EQ(m.Airtime(512), 2048);
    m.perFrameOverhead = 200;
    EXPECT_EQ(m.Airtime(512), 2248);
}

TEST(Medium, IsolatedBroadcastReachesNobodyButCostsEnergy)
{
    std::stringstream buffer;
    TraceWriter writer(buffer);
    Simulator sim(Pair(1000.0), 1, &writer);
    sim.Transmit(0, Payload(0, 1, 1000), kBroadcast);
    sim.RunUntil(Seconds(1.0));
    EXPECT_EQ(sim.Node(0).battery.Remaining(), EnergyFromUnits(98.0));
    EXPECT_EQ(sim.Node(1).battery.Remaining(), EnergyFromUnits(100.0));
    std::size_t rx = 0;
    for (const auto& rec : ReadTrace(buffer)) {
        rx += rec.event == TraceEvent::Rx ? 1 : 0;
    }
    EXPECT_EQ(rx, 0u);
}

TEST(Medium, RangeBoundaryIsInclusive)
{
    Simulator sim(Pair(250.0), 1);
    sim.Transmit(0, Payload(0, 1, 100), 1);
    sim.RunUntil(Seconds(1.0));
    EXPECT_EQ(sim.Ledger().delivered, 1u);
}

TEST(Medium, DeliveryHappensAfterExactlyOneAirtime)
{
    Simulator sim(Pair(100.0), 1);
    sim.Transmit(0, Payload(0, 1, 512), 1);
    sim.RunUntil(Seconds(1.0));
    ASSERT_EQ(sim.Ledger().delivered, 1u);
    EXPECT_EQ(sim.Ledger().sumDelay, 2048);
}

TEST(Medium, UnicastOutOfRangeRetriesThenReportsLinkBreak)
{
    Simulator sim(Pair(251.0), 1);
    std::vector<std::pair<NodeId, NodeId>> breaks;
    sim.SetLinkBreakObserver([&](NodeId node, NodeId next) { breaks.emplace_back(node, next); });
    sim.Transmit(0, Payload(0, 1, 512), 1);
    sim.RunUntil(Seconds(1.0));
    EXPECT_EQ(sim.Ledger().dataTxCount, 4u); // first attempt plus three retries
    ASSERT_EQ(breaks.size(), 1u);
    EXPECT_EQ(breaks[0], std::make_pair(NodeId{0}, NodeId{1}));
    EXPECT_EQ(sim.Ledger().droppedMac, 1u);
    EXPECT_TRUE(sim.Node(0).queue.Empty());
}

TEST(Medium, UnicastIsOverheardButProcessedOnlyByAddressee)
{
    Scenario s = testing::StaticScenario({{0, 0}, {100, 0}, {0, 100}}, Protocol::Tspba);
    s.eRxPerByte = 0.001;
    Simulator sim(s, 1);
    sim.Transmit(0, Payload(0, 1, 1000), 1);
    sim.RunUntil(Seconds(1.0));
    EXPECT_EQ(sim.Ledger().delivered, 1u);
    EXPECT_EQ(sim.Ledger().droppedNoRoute, 0u); // node 2 never tried to forward
    EXPECT_EQ(sim.Node(2).battery.Remaining(), EnergyFromUnits(99.0));
}

TEST(Energy, ZeroBytesChangeNothing)
{
    Simulator sim(Pair(100.0), 1);
    sim.ConsumeEnergy(0, 0, EnergyDirection::Tx);
    EXPECT_EQ(sim.Node(0).battery.Remaining(), EnergyFromUnits(100.0));
}

TEST(Energy, ThousandBytesAtTwoMilliunitsCostTwoUnits)
{
    Simulator sim(Pair(100.0), 1);
    sim.ConsumeEnergy(0, 1000, EnergyDirection::Tx);
    EXPECT_EQ(sim.Node(0).battery.Remaining(), EnergyFromUnits(98.0));
    sim.ConsumeEnergy(0, 1000, EnergyDirection::Rx);
    EXPECT_EQ(sim.Node(0).battery.Remaining(), EnergyFromUnits(97.0));
}

TEST(Energy, DeathBoundaryAndSenderDead)
{
    Simulator sim(Pair(100.0), 1);
    sim.ConsumeEnergy(0, 49750, EnergyDirection::Tx);
    ASSERT_EQ(sim.Node(0).battery.Remaining(), EnergyFromUnits(0.5));
    ASSERT_TRUE(sim.Node(0).alive);

    sim.Transmit(0, Payload(0, 1, 1000), kBroadcast);
    EXPECT_EQ(sim.Node(0).battery.Remaining(), 0);
    EXPECT_FALSE(sim.Node(0).alive);
    EXPECT_EQ(sim.EnergyDebited()[0], EnergyFromUnits(100.0));

    sim.Transmit(0, Payload(0, 1, 1000), kBroadcast);
    EXPECT_EQ(sim.Ledger().droppedSenderDead, 1u);
    sim.RunUntil(Seconds(1.0));
    EXPECT_EQ(sim.Ledger().dataTxCount, 1u);
    EXPECT_EQ(sim.Ledger().deadNodes, 1u);
}

TEST(Energy, DeadNodeNeitherReceivesNorPays)
{
    Simulator sim(Pair(100.0), 1);
    sim.ConsumeEnergy(1, 100000, EnergyDirection::Tx);
    ASSERT_FALSE(sim.Node(1).alive);
    sim.Transmit(0, Payload(0, 1, 512), 1);
    sim.RunUntil(Seconds(1.0));
    EXPECT_EQ(sim.Ledger().delivered, 0u);
    EXPECT_EQ(sim.Node(1).battery.Remaining(), 0);
}

TEST(Queue, EnqueueBoundaries)
{
    Scenario s = Pair(100.0);
    s.queueCapacity = 50;
    Simulator sim(s, 1);
    const DataPacket p = Payload(0, 1, 512);
    EXPECT_TRUE(sim.EnqueueData(0, p, 1)); // occupancy 0
    for (int i = 1; i < 49; ++i) {
        ASSERT_TRUE(sim.EnqueueData(0, p, 1));
    }
    ASSERT_EQ(sim.Node(0).queue.Size(), 49u);
    EXPECT_TRUE(sim.EnqueueData(0, p, 1)); // occupancy Q-1
    EXPECT_DOUBLE_EQ(DelayCost(sim.Node(0)), 1.0);
    EXPECT_FALSE(sim.EnqueueData(0, p, 1)); // occupancy Q
    EXPECT_EQ(sim.Ledger().droppedOverflow, 1u);
}

TEST(Radio, HalfDuplexNodeWaitsForReceptionToEnd)
{
    // Node 1 is receiving a 2048 us frame when it is asked to send.
    Simulator sim(Pair(100.0), 1);
    sim.Transmit(0, Payload(0, 0, 512), kBroadcast);
    sim.Transmit(1, Payload(1, 0, 512), 0);
    sim.RunUntil(Seconds(1.0));
    ASSERT_EQ(sim.Ledger().delivered, 1u);
    EXPECT_EQ(sim.Ledger().sumDelay, 2 * 2048);
}

} // namespace
} // namespace manet
