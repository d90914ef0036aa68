#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "manet/metrics.hpp"
#include "manet/scenario.hpp"

namespace manet {

/// One point of an experiment grid.
struct SweepCell {
    Protocol protocol{Protocol::Tspba};
    AppType traffic{AppType::Type1};
    double vMin{0.0};
    double vMax{0.0};
    double sendRate{1.0};
};

struct RunRecord {
    std::uint32_t run{0};
    std::uint64_t seed{0};
    RunMetrics metrics;
};

struct CellResult {
    SweepCell cell;
    std::vector<RunRecord> runs;
    AggregateMetrics aggregate;
};

inline constexpr const char* kCsvHeader =
    "protocol,traffic_type,v_min,v_max,send_rate,run,seed,avg_delay_s,throughput_bps,pdr,control_overhead";

std::string CsvRow(const SweepCell& cell, const RunRecord& record);
std::string CsvMeanRow(const SweepCell& cell, const AggregateMetrics& aggregate);

/// Scenario for one cell: base parameters with the cell's protocol, traffic, speeds and rate.
Scenario CellScenario(const Scenario& base, const SweepCell& cell);

using RunCallback = std::function<void(const SweepCell&, const RunRecord&)>;

/**
 * Runs `base.runs` seeded simulations of a cell (seed = base.seed + run index).
 * Runs may execute on `threads` workers; results are always returned in run order.
 */
CellResult RunCell(const Scenario& base, const SweepCell& cell, unsigned threads = 1,
                   const RunCallback& onRun = {});

std::vector<SweepCell> SpeedSweepCells(const Scenario& base,
                                       const std::vector<std::pair<double, double>>& speedRanges,
                                       const std::vector<Protocol>& protocols,
                                       const std::vector<AppType>& traffics);

std::vector<SweepCell> RateSweepCells(const Scenario& base, const std::vector<double>& rates,
                                      const std::vector<Protocol>& protocols,
                                      const std::vector<AppType>& traffics);

/// Writes the CSV header, then per cell one row per run followed by its mean row.
std::vector<CellResult> RunSweep(const Scenario& base, const std::vector<SweepCell>& cells,
                                 std::ostream& csv, unsigned threads = 1,
                                 const RunCallback& onRun = {});

std::vector<CellResult> RunSpeedSweep(const Scenario& base,
                                      const std::vector<std::pair<double, double>>& speedRanges,
                                      const std::vector<Protocol>& protocols,
                                      const std::vector<AppType>& traffics, std::ostream& csv,
                                      unsigned threads = 1, const RunCallback& onRun = {});

/// The rate sweep keeps node speeds in [2, 6] m/s.
std::vector<CellResult> RunSendRateSweep(const Scenario& base, const std::vector<double>& rates,
                                         const std::vector<Protocol>& protocols,
                                         const std::vector<AppType>& traffics, std::ostream& csv,
                                         unsigned threads = 1, const RunCallback& onRun = {});

} // namespace manet
