#include <gtest/gtest.h>

#include "manet/metrics.hpp"
#include "manet/simulator.hpp"
#include "test_support.hpp"

namespace manet {
namespace {

DataPacket Data(std::uint32_t seq, SimTime createdAt = 0, std::uint32_t bytes = 512)
{
    DataPacket d;
    d.src = 0;
    d.dst = 1;
    d.seq = seq;
    d.sizeBytes = bytes;
    d.createdAt = createdAt;
    return d;
}

TEST(AvgDelay, SingleAndMean)
{
    MetricsLedger one;
    one.RecordDelivery(Data(0), MilliSeconds(200));
    EXPECT_DOUBLE_EQ(*AvgEndToEndDelay(one), 0.2);

    MetricsLedger two;
    two.RecordDelivery(Data(0), MilliSeconds(100));
    two.RecordDelivery(Data(1), MilliSeconds(300));
    EXPECT_DOUBLE_EQ(*AvgEndToEndDelay(two), 0.2);
}

TEST(AvgDelay, AbsentWithoutDeliveries)
{
    EXPECT_FALSE(AvgEndToEndDelay(MetricsLedger{}).has_value());
}

TEST(ThroughputTest, Examples)
{
    MetricsLedger none;
    none.duration = 600.0;
    EXPECT_EQ(Throughput(none), 0.0);

    MetricsLedger full;
    full.duration = 600.0;
    for (std::uint32_t i = 0; i < 600; ++i) {
        full.RecordDelivery(Data(i), Seconds(i + 1.0));
    }
    EXPECT_DOUBLE_EQ(Throughput(full), 4096.0);
    full.duration = 1200.0;
    EXPECT_DOUBLE_EQ(Throughput(full), 2048.0);
}

TEST(Pdr, Examples)
{
    MetricsLedger l;
    EXPECT_FALSE(PacketDeliveryRatio(l).has_value());
    l.generated = 100;
    for (std::uint32_t i = 0; i < 80; ++i) {
        l.RecordDelivery(Data(i), 1);
    }
    EXPECT_DOUBLE_EQ(*PacketDeliveryRatio(l), 0.8);
    for (std::uint32_t i = 80; i < 100; ++i) {
        l.RecordDelivery(Data(i), 1);
    }
    EXPECT_DOUBLE_EQ(*PacketDeliveryRatio(l), 1.0);
}

TEST(Pdr, DuplicateDeliveriesAreCountedOnce)
{
    MetricsLedger l;
    l.generated = 1;
    EXPECT_TRUE(l.RecordDelivery(Data(0), 10));
    EXPECT_FALSE(l.RecordDelivery(Data(0), 20));
    EXPECT_EQ(l.delivered, 1u);
    EXPECT_EQ(l.sumDelay, 10);
    EXPECT_DOUBLE_EQ(*PacketDeliveryRatio(l), 1.0);
}

TEST(Pdr, ScriptedDuplicateDeliveryDoesNotInflate)
{
    Scenario s = testing::StaticScenario({{0, 0}, {100, 0}}, Protocol::Tspba);
    Simulator sim(s, 1);
    sim.ScheduleData(0, 0, 1, AppType::Type1, 0); // counted as generated, routed normally
    sim.RunUntil(Seconds(1.0));
    ASSERT_EQ(sim.Ledger().delivered, 1u);
    DataPacket copy = Data(0);
    copy.appType = AppType::Type1;
    sim.Transmit(0, copy, 1); // the same packet arrives a second time
    sim.RunUntil(Seconds(2.0));
    EXPECT_EQ(sim.Ledger().delivered, 1u);
    EXPECT_DOUBLE_EQ(*PacketDeliveryRatio(sim.Ledger()), 1.0);
}

TEST(Overhead, PerEmissionArithmetic)
{
    MetricsLedger l;
    l.routingTxCount = 12 + 3;
    for (std::uint32_t i = 0; i < 10; ++i) {
        l.RecordDelivery(Data(i), 1);
    }
    EXPECT_DOUBLE_EQ(*ControlOverhead(l), 1.5);
    l.routingTxCount = 0;
    EXPECT_EQ(*ControlOverhead(l), 0.0);
    EXPECT_FALSE(ControlOverhead(MetricsLedger{}).has_value());
}

TEST(Overhead, BroadcastCountsOncePerEmission)
{
    // One RREQ from the centre of a five-node star: five receivers, one emission.
    Scenario s = testing::StaticScenario({{500, 500}, {600, 500}, {400, 500}, {500, 600}, {500, 400}, {700, 700}},
                                         Protocol::Tspba);
    s.ttl = 0;
    Simulator sim(s, 1);
    sim.RouterOf(0).OriginateDiscovery(99, AppType::Type1);
    sim.RunUntil(MilliSeconds(100));
    EXPECT_EQ(sim.Ledger().routingTxCount, 1u);
}

TEST(Overhead, HandCountOnFourNodeLine)
{
    // 0 - 1 - 2 - 3: the flood is emitted by 0, 1 and 2; the reply crosses three hops.
    Scenario s = testing::StaticScenario({{0, 0}, {200, 0}, {400, 0}, {600, 0}}, Protocol::Tspba);
    Simulator sim(s, 1);
    for (std::uint32_t i = 0; i < 10; ++i) {
        sim.ScheduleData(Seconds(1.0 + i), 0, 3, AppType::Type1, i);
    }
    sim.RunUntil(Seconds(20.0));
    EXPECT_EQ(sim.Ledger().delivered, 10u);
    EXPECT_EQ(sim.Ledger().routingTxCount, 3u + 3u);
    EXPECT_DOUBLE_EQ(*ControlOverhead(sim.Ledger()), 0.6);
}

TEST(AggregateTest, Examples)
{
    RunMetrics a;
    a.pdr = 0.8;
    a.throughput = 100.0;
    a.avgDelay = 0.1;
    a.controlOverhead = 2.0;
    const auto single = Aggregate({a});
    EXPECT_EQ(single.mean, a);
    EXPECT_EQ(single.runs, 1u);

    RunMetrics b;
    b.pdr = 0.6;
    b.throughput = 50.0;
    const auto pair = Aggregate({a, b});
    EXPECT_DOUBLE_EQ(*pair.mean.pdr, 0.7);
    EXPECT_DOUBLE_EQ(pair.mean.throughput, 75.0);
    EXPECT_DOUBLE_EQ(*pair.mean.avgDelay, 0.1);
    EXPECT_EQ(pair.excludedDelay, 1u);
    EXPECT_EQ(pair.excludedOverhead, 1u);
    EXPECT_EQ(pair.excludedPdr, 0u);
}

TEST(AggregateTest, MeanOfTenRuns)
{
    std::vector<RunMetrics> runs(10);
    for (int i = 0; i < 10; ++i) {
        runs[i].pdr = i / 10.0;
        runs[i].throughput = i;
    }
    const auto agg = Aggregate(runs);
    EXPECT_EQ(agg.runs, 10u);
    EXPECT_NEAR(*agg.mean.pdr, 0.45, 1e-12);
    EXPECT_NEAR(agg.mean.throughput, 4.5, 1e-12);
}

TEST(MetricInvariants, ThroughputMatchesPdrForUniformSizes)
{
    Scenario s;
    s.nodes = 20;
    s.duration = 60.0;
    s.fieldX = 600.0;
    s.fieldY = 600.0;
    const MetricsLedger l = RunScenario(s, 4);
    const RunMetrics m = ComputeMetrics(l);
    ASSERT_TRUE(m.pdr.has_value());
    EXPECT_GE(*m.pdr, 0.0);
    EXPECT_LE(*m.pdr, 1.0);
    EXPECT_LE(l.delivered, l.generated);
    EXPECT_NEAR(m.throughput, *m.pdr * l.generated * s.packetSize * 8.0 / s.duration, 1e-9);
}

} // namespace
} // namespace manet
