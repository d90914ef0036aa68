// Command-line driver: single scenarios and the node-speed / send-rate sweeps.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "manet/scenario.hpp"
#include "manet/simulator.hpp"
#include "manet/sweep.hpp"
#include "manet/trace.hpp"

using namespace manet;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitInternal = 2;

Scenario LoadScenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(ConfigError::Kind::Syntax, 0, "", "cannot open config file '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ParseScenario(ss.str());
}

std::vector<std::string> SplitList(const std::vector<std::string>& items)
{
    std::vector<std::string> out;
    for (const auto& item : items) {
        std::stringstream ss(item);
        std::string part;
        while (std::getline(ss, part, ',')) {
            if (!part.empty()) {
                out.push_back(part);
            }
        }
    }
    return out;
}

double ParseNumber(const std::string& text, const std::string& what)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || text.empty()) {
        throw ConfigError(ConfigError::Kind::MalformedValue, 0, what, "cannot parse '" + text + "'");
    }
    return v;
}

std::vector<std::pair<double, double>> ParseRanges(const std::vector<std::string>& items)
{
    std::vector<std::pair<double, double>> ranges;
    for (const auto& item : SplitList(items)) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            throw ConfigError(ConfigError::Kind::MalformedValue, 0, "ranges",
                              "expected vmin:vmax, got '" + item + "'");
        }
        ranges.emplace_back(ParseNumber(item.substr(0, colon), "ranges"),
                            ParseNumber(item.substr(colon + 1), "ranges"));
    }
    return ranges;
}

std::vector<Protocol> ParseProtocols(const std::vector<std::string>& items)
{
    std::vector<Protocol> out;
    for (const auto& name : SplitList(items)) {
        auto p = ParseProtocol(name);
        if (!p) {
            throw ConfigError(ConfigError::Kind::MalformedValue, 0, "protocols", "unknown protocol '" + name + "'");
        }
        out.push_back(*p);
    }
    return out;
}

std::vector<AppType> ParseTraffic(const std::vector<std::string>& items, AppType fallback)
{
    std::vector<AppType> out;
    for (const auto& name : SplitList(items)) {
        if (name == "type1") {
            out.push_back(AppType::Type1);
        } else if (name == "type2") {
            out.push_back(AppType::Type2);
        } else {
            throw ConfigError(ConfigError::Kind::MalformedValue, 0, "traffic", "unknown traffic type '" + name + "'");
        }
    }
    if (out.empty()) {
        out.push_back(fallback);
    }
    return out;
}

struct CommonOptions {
    std::string config;
    std::string out;
    std::string trace;
    std::optional<std::uint64_t> seed;
    unsigned threads{1};
};

void AddCommon(CLI::App* cmd, CommonOptions& opts)
{
    cmd->add_option("config", opts.config, "scenario file (key=value lines)")->required();
    cmd->add_option("--out", opts.out, "CSV output path (default: stdout)");
    cmd->add_option("--seed", opts.seed, "master seed, overrides the config");
    cmd->add_option("--threads", opts.threads, "parallel runs per cell")->check(CLI::PositiveNumber);
}

class Output {
  public:
    explicit Output(const std::string& path)
    {
        if (!path.empty()) {
            m_file.open(path);
            if (!m_file) {
                throw std::runtime_error("cannot open output file '" + path + "'");
            }
        }
    }

    std::ostream& Csv() { return m_file.is_open() ? static_cast<std::ostream&>(m_file) : std::cout; }
    std::ostream& Progress() { return m_file.is_open() ? std::cout : std::cerr; }

  private:
    std::ofstream m_file;
};

int Simulate(const CommonOptions& opts)
{
    Scenario scenario = LoadScenario(opts.config);
    if (opts.seed) {
        scenario.seed = *opts.seed;
    }
    Output output(opts.out);
    const SweepCell cell{scenario.protocol, scenario.trafficType, scenario.vMin, scenario.vMax,
                         scenario.sendRate};
    std::vector<RunMetrics> all;
    output.Csv() << kCsvHeader << '\n';
    for (std::uint32_t run = 0; run < scenario.runs; ++run) {
        RunRecord record;
        record.run = run;
        record.seed = scenario.seed + run;
        if (!opts.trace.empty()) {
            const std::string path = scenario.runs == 1 ? opts.trace : opts.trace + ".run" + std::to_string(run);
            std::ofstream traceFile(path, std::ios::binary);
            if (!traceFile) {
                throw std::runtime_error("cannot open trace file '" + path + "'");
            }
            TraceWriter writer(traceFile);
            record.metrics = ComputeMetrics(RunScenario(scenario, record.seed, &writer));
        } else {
            record.metrics = ComputeMetrics(RunScenario(scenario, record.seed));
        }
        all.push_back(record.metrics);
        output.Csv() << CsvRow(cell, record) << '\n';
        output.Progress() << "run " << run << " seed " << record.seed << " done\n";
    }
    output.Csv() << CsvMeanRow(cell, Aggregate(all)) << '\n';
    return kExitOk;
}

RunCallback ProgressPrinter(std::ostream& os)
{
    return [&os](const SweepCell& cell, const RunRecord& record) {
        os << ToString(cell.protocol) << ' ' << ToString(cell.traffic) << " v=" << cell.vMin << ':'
           << cell.vMax << " rate=" << cell.sendRate << " run " << record.run << " done" << std::endl;
    };
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Packet-level MANET simulator comparing AODV, CPACL-AODV and TSPBA-AODV"};
    app.require_subcommand(1);

    CommonOptions simOpts;
    auto* simulate = app.add_subcommand("simulate", "run one scenario `runs` times");
    AddCommon(simulate, simOpts);
    simulate->add_option("--trace", simOpts.trace, "binary trace path (suffix .runN when runs > 1)");

    CommonOptions speedOpts;
    std::vector<std::string> ranges{"0:2", "2:6", "6:11", "11:17"};
    std::vector<std::string> speedProtocols{"cpacl,tspba"};
    std::vector<std::string> speedTraffic;
    auto* sweepSpeed = app.add_subcommand("sweep-speed", "vary the node speed range");
    AddCommon(sweepSpeed, speedOpts);
    sweepSpeed->add_option("--ranges", ranges, "speed ranges as vmin:vmax (m/s)");
    sweepSpeed->add_option("--protocols", speedProtocols, "protocols to compare");
    sweepSpeed->add_option("--traffic", speedTraffic, "traffic types (default: config traffic_type)");

    CommonOptions rateOpts;
    std::vector<std::string> rates{"0.5", "1", "2", "4"};
    std::vector<std::string> rateProtocols{"cpacl,tspba"};
    std::vector<std::string> rateTraffic;
    auto* sweepRate = app.add_subcommand("sweep-rate", "vary the per-node send rate at 2-6 m/s");
    AddCommon(sweepRate, rateOpts);
    sweepRate->add_option("--rates", rates, "send rates in packets/s/node");
    sweepRate->add_option("--protocols", rateProtocols, "protocols to compare");
    sweepRate->add_option("--traffic", rateTraffic, "traffic types (default: config traffic_type)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (simulate->parsed()) {
            return Simulate(simOpts);
        }
        if (sweepSpeed->parsed()) {
            Scenario base = LoadScenario(speedOpts.config);
            if (speedOpts.seed) {
                base.seed = *speedOpts.seed;
            }
            const auto parsedRanges = ParseRanges(ranges);
            const auto protocols = ParseProtocols(speedProtocols);
            const auto traffic = ParseTraffic(speedTraffic, base.trafficType);
            Output output(speedOpts.out);
            RunSpeedSweep(base, parsedRanges, protocols, traffic, output.Csv(), speedOpts.threads,
                          ProgressPrinter(output.Progress()));
            return kExitOk;
        }
        if (sweepRate->parsed()) {
            Scenario base = LoadScenario(rateOpts.config);
            if (rateOpts.seed) {
                base.seed = *rateOpts.seed;
            }
            std::vector<double> parsedRates;
            for (const auto& r : SplitList(rates)) {
                parsedRates.push_back(ParseNumber(r, "rates"));
            }
            const auto protocols = ParseProtocols(rateProtocols);
            const auto traffic = ParseTraffic(rateTraffic, base.trafficType);
            Output output(rateOpts.out);
            RunSendRateSweep(base, parsedRates, protocols, traffic, output.Csv(), rateOpts.threads,
                             ProgressPrinter(output.Progress()));
            return kExitOk;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitInternal;
}
