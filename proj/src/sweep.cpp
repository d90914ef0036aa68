#include "manet/sweep.hpp"

#include <atomic>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <thread>

#include "manet/simulator.hpp"

namespace manet {

namespace {

std::string Num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string Opt(const std::optional<double>& v) { return v ? Num(*v) : std::string{}; }

std::string CellPrefix(const SweepCell& cell)
{
    return std::string(ToString(cell.protocol)) + "," + ToString(cell.traffic) + "," + Num(cell.vMin) +
           "," + Num(cell.vMax) + "," + Num(cell.sendRate);
}

std::string MetricColumns(const RunMetrics& m)
{
    return Opt(m.avgDelay) + "," + Num(m.throughput) + "," + Opt(m.pdr) + "," + Opt(m.controlOverhead);
}

} // namespace

std::string CsvRow(const SweepCell& cell, const RunRecord& record)
{
    return CellPrefix(cell) + "," + std::to_string(record.run) + "," + std::to_string(record.seed) + "," +
           MetricColumns(record.metrics);
}

std::string CsvMeanRow(const SweepCell& cell, const AggregateMetrics& aggregate)
{
    return CellPrefix(cell) + ",mean,," + MetricColumns(aggregate.mean);
}

Scenario CellScenario(const Scenario& base, const SweepCell& cell)
{
    Scenario s = base;
    s.protocol = cell.protocol;
    s.trafficType = cell.traffic;
    s.vMin = cell.vMin;
    s.vMax = cell.vMax;
    s.sendRate = cell.sendRate;
    return s;
}

CellResult RunCell(const Scenario& base, const SweepCell& cell, unsigned threads, const RunCallback& onRun)
{
    const Scenario scenario = CellScenario(base, cell);
    ValidateScenario(scenario);
    CellResult result;
    result.cell = cell;
    result.runs.resize(scenario.runs);

    std::atomic<std::uint32_t> next{0};
    std::mutex callbackMutex;
    auto worker = [&] {
        for (std::uint32_t run = next++; run < scenario.runs; run = next++) {
            RunRecord record;
            record.run = run;
            record.seed = scenario.seed + run;
            record.metrics = ComputeMetrics(RunScenario(scenario, record.seed));
            result.runs[run] = record;
            if (onRun) {
                std::lock_guard lock(callbackMutex);
                onRun(cell, record);
            }
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, scenario.runs));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < workers; ++i) {
            pool.emplace_back(worker);
        }
    }

    std::vector<RunMetrics> metrics;
    metrics.reserve(result.runs.size());
    for (const auto& r : result.runs) {
        metrics.push_back(r.metrics);
    }
    result.aggregate = Aggregate(metrics);
    return result;
}

std::vector<SweepCell> SpeedSweepCells(const Scenario& base,
                                       const std::vector<std::pair<double, double>>& speedRanges,
                                       const std::vector<Protocol>& protocols,
                                       const std::vector<AppType>& traffics)
{
    std::vector<SweepCell> cells;
    for (const auto& [vMin, vMax] : speedRanges) {
        if (vMin < 0.0 || vMin > vMax) {
            throw ConfigError(ConfigError::Kind::InvalidValue, 0, "ranges",
                              "speed range " + Num(vMin) + ":" + Num(vMax) + " is not ordered");
        }
        for (AppType traffic : traffics) {
            for (Protocol protocol : protocols) {
                cells.push_back({protocol, traffic, vMin, vMax, base.sendRate});
            }
        }
    }
    return cells;
}

std::vector<SweepCell> RateSweepCells(const Scenario& base, const std::vector<double>& rates,
                                      const std::vector<Protocol>& protocols,
                                      const std::vector<AppType>& traffics)
{
    std::vector<SweepCell> cells;
    for (double rate : rates) {
        if (!(rate > 0.0)) {
            throw ConfigError(ConfigError::Kind::InvalidValue, 0, "rates",
                              "send rate " + Num(rate) + " must be positive");
        }
        for (AppType traffic : traffics) {
            for (Protocol protocol : protocols) {
                cells.push_back({protocol, traffic, base.vMin, base.vMax, rate});
            }
        }
    }
    return cells;
}

std::vector<CellResult> RunSweep(const Scenario& base, const std::vector<SweepCell>& cells,
                                 std::ostream& csv, unsigned threads, const RunCallback& onRun)
{
    std::vector<CellResult> results;
    csv << kCsvHeader << '\n';
    for (const auto& cell : cells) {
        CellResult result = RunCell(base, cell, threads, onRun);
        for (const auto& record : result.runs) {
            csv << CsvRow(cell, record) << '\n';
        }
        csv << CsvMeanRow(cell, result.aggregate) << '\n';
        csv.flush();
        results.push_back(std::move(result));
    }
    return results;
}

std::vector<CellResult> RunSpeedSweep(const Scenario& base,
                                      const std::vector<std::pair<double, double>>& speedRanges,
                                      const std::vector<Protocol>& protocols,
                                      const std::vector<AppType>& traffics, std::ostream& csv,
                                      unsigned threads, const RunCallback& onRun)
{
    return RunSweep(base, SpeedSweepCells(base, speedRanges, protocols, traffics), csv, threads, onRun);
}

std::vector<CellResult> RunSendRateSweep(const Scenario& base, const std::vector<double>& rates,
                                         const std::vector<Protocol>& protocols,
                                         const std::vector<AppType>& traffics, std::ostream& csv,
                                         unsigned threads, const RunCallback& onRun)
{
    Scenario slowBase = base;
    slowBase.vMin = 2.0;
    slowBase.vMax = 6.0;
    return RunSweep(slowBase, RateSweepCells(slowBase, rates, protocols, traffics), csv, threads, onRun);
}

} // namespace manet
