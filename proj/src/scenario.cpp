#include "manet/scenario.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>

namespace manet {

namespace {

std::string_view Trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void Malformed(std::size_t line, std::string_view key, std::string_view value)
{
    throw ConfigError(ConfigError::Kind::MalformedValue, line, std::string(key),
                      "cannot parse value '" + std::string(value) + "'");
}

[[noreturn]] void Invalid(std::size_t line, std::string_view key, const std::string& why)
{
    throw ConfigError(ConfigError::Kind::InvalidValue, line, std::string(key), why);
}

double ParseDouble(std::string_view key, std::string_view value, std::size_t line)
{
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(v)) {
        Malformed(line, key, value);
    }
    return v;
}

std::int64_t ParseInt(std::string_view key, std::string_view value, std::size_t line)
{
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        Malformed(line, key, value);
    }
    return v;
}

std::uint32_t PositiveCount(std::string_view key, std::string_view value, std::size_t line)
{
    const std::int64_t v = ParseInt(key, value, line);
    if (v <= 0 || v > 0xFFFFFFFFll) {
        Invalid(line, key, "must be a positive integer");
    }
    return static_cast<std::uint32_t>(v);
}

std::uint32_t NonNegativeCount(std::string_view key, std::string_view value, std::size_t line)
{
    const std::int64_t v = ParseInt(key, value, line);
    if (v < 0 || v > 0xFFFFFFFFll) {
        Invalid(line, key, "must be a non-negative integer");
    }
    return static_cast<std::uint32_t>(v);
}

double Positive(std::string_view key, std::string_view value, std::size_t line)
{
    const double v = ParseDouble(key, value, line);
    if (v <= 0.0) {
        Invalid(line, key, "must be positive");
    }
    return v;
}

double NonNegative(std::string_view key, std::string_view value, std::size_t line)
{
    const double v = ParseDouble(key, value, line);
    if (v < 0.0) {
        Invalid(line, key, "must be non-negative");
    }
    return v;
}

using Setter = std::function<void(Scenario&, std::string_view, std::string_view, std::size_t)>;

const std::map<std::string, Setter, std::less<>>& Setters()
{
    // clang-format off
    static const std::map<std::string, Setter, std::less<>> setters{
        {"nodes", [](Scenario& s, auto k, auto v, auto l) { s.nodes = PositiveCount(k, v, l); }},
        {"field_x", [](Scenario& s, auto k, auto v, auto l) { s.fieldX = Positive(k, v, l); }},
        {"field_y", [](Scenario& s, auto k, auto v, auto l) { s.fieldY = Positive(k, v, l); }},
        {"duration", [](Scenario& s, auto k, auto v, auto l) { s.duration = Positive(k, v, l); }},
        {"v_min", [](Scenario& s, auto k, auto v, auto l) { s.vMin = NonNegative(k, v, l); }},
        {"v_max", [](Scenario& s, auto k, auto v, auto l) { s.vMax = NonNegative(k, v, l); }},
        {"pause", [](Scenario& s, auto k, auto v, auto l) { s.pause = NonNegative(k, v, l); }},
        {"granularity", [](Scenario& s, auto k, auto v, auto l) { s.granularity = Positive(k, v, l); }},
        {"send_rate", [](Scenario& s, auto k, auto v, auto l) { s.sendRate = Positive(k, v, l); }},
        {"packet_size", [](Scenario& s, auto k, auto v, auto l) { s.packetSize = PositiveCount(k, v, l); }},
        {"protocol", [](Scenario& s, auto k, auto v, auto l) {
             auto p = ParseProtocol(v);
             if (!p) {
                 Malformed(l, k, v);
             }
             s.protocol = *p;
         }},
        {"traffic_type", [](Scenario& s, auto k, auto v, auto l) {
             if (v == "type1") {
                 s.trafficType = AppType::Type1;
             } else if (v == "type2") {
                 s.trafficType = AppType::Type2;
             } else {
                 Malformed(l, k, v);
             }
         }},
        {"seed", [](Scenario& s, auto k, auto v, auto l) {
             std::uint64_t seed = 0;
             auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), seed);
             if (ec != std::errc() || ptr != v.data() + v.size()) {
                 Malformed(l, k, v);
             }
             s.seed = seed;
         }},
        {"runs", [](Scenario& s, auto k, auto v, auto l) { s.runs = PositiveCount(k, v, l); }},
        {"range", [](Scenario& s, auto k, auto v, auto l) { s.range = Positive(k, v, l); }},
        {"bitrate", [](Scenario& s, auto k, auto v, auto l) { s.bitrate = Positive(k, v, l); }},
        {"frame_overhead_us", [](Scenario& s, auto k, auto v, auto l) { s.frameOverheadUs = NonNegative(k, v, l); }},
        {"max_mac_retries", [](Scenario& s, auto k, auto v, auto l) { s.maxMacRetries = NonNegativeCount(k, v, l); }},
        {"initial_energy", [](Scenario& s, auto k, auto v, auto l) { s.initialEnergy = Positive(k, v, l); }},
        {"e_tx_per_byte", [](Scenario& s, auto k, auto v, auto l) { s.eTxPerByte = NonNegative(k, v, l); }},
        {"e_rx_per_byte", [](Scenario& s, auto k, auto v, auto l) { s.eRxPerByte = NonNegative(k, v, l); }},
        {"queue_capacity", [](Scenario& s, auto k, auto v, auto l) { s.queueCapacity = PositiveCount(k, v, l); }},
        {"bandwidth_window", [](Scenario& s, auto k, auto v, auto l) { s.bandwidthWindow = Positive(k, v, l); }},
        {"collect_window", [](Scenario& s, auto k, auto v, auto l) { s.collectWindow = NonNegative(k, v, l); }},
        {"active_route_timeout", [](Scenario& s, auto k, auto v, auto l) { s.activeRouteTimeout = Positive(k, v, l); }},
        {"rreq_timeout", [](Scenario& s, auto k, auto v, auto l) { s.rreqTimeout = Positive(k, v, l); }},
        {"max_retries", [](Scenario& s, auto k, auto v, auto l) { s.maxRetries = PositiveCount(k, v, l); }},
        {"ttl", [](Scenario& s, auto k, auto v, auto l) { s.ttl = PositiveCount(k, v, l); }},
        {"r_max", [](Scenario& s, auto k, auto v, auto l) { s.rMax = NonNegativeCount(k, v, l); }},
        {"cost_epsilon", [](Scenario& s, auto k, auto v, auto l) { s.costEpsilon = NonNegative(k, v, l); }},
        {"compute_cost_from_attempt", [](Scenario& s, auto k, auto v, auto l) { s.computeCostFromAttempt = PositiveCount(k, v, l); }},
    };
    // clang-format on
    return setters;
}

} // namespace

ConfigError::ConfigError(Kind kind, std::size_t line, std::string key, const std::string& detail)
    : std::runtime_error("config line " + std::to_string(line) + (key.empty() ? "" : ", key '" + key + "'") +
                         ": " + detail),
      m_kind(kind),
      m_line(line),
      m_key(std::move(key))
{
}

MobilityParams Scenario::Mobility() const
{
    MobilityParams m;
    m.fieldX = fieldX;
    m.fieldY = fieldY;
    m.vMin = vMin;
    m.vMax = vMax;
    m.pause = Seconds(pause);
    m.granularity = Seconds(granularity);
    return m;
}

RoutingParams Scenario::Routing() const
{
    RoutingParams r;
    r.activeRouteTimeout = Seconds(activeRouteTimeout);
    r.collectWindow = Seconds(collectWindow);
    r.rreqTimeout = Seconds(rreqTimeout);
    r.maxRetries = maxRetries;
    r.ttl = ttl;
    r.rMax = rMax;
    r.costEpsilon = costEpsilon;
    r.computeCostFromAttempt = computeCostFromAttempt;
    return r;
}

CostPolicy Scenario::Policy() const
{
    CostPolicy p;
    p.protocol = protocol;
    p.weightsOverride = weightsOverride;
    p.dualTablesOverride = dualTablesOverride;
    return p;
}

void ApplySetting(Scenario& scenario, std::string_view key, std::string_view value, std::size_t line)
{
    const auto& setters = Setters();
    auto it = setters.find(key);
    if (it == setters.end()) {
        throw ConfigError(ConfigError::Kind::UnknownKey, line, std::string(key), "unknown key");
    }
    it->second(scenario, key, value, line);
}

void ValidateScenario(const Scenario& s)
{
    if (s.vMin > s.vMax) {
        Invalid(0, "v_min", "v_min must not exceed v_max");
    }
    if (s.nodes < 2 && s.autoTraffic) {
        Invalid(0, "nodes", "traffic needs at least two nodes");
    }
    if (!s.fixedPositions.empty() && s.fixedPositions.size() != s.nodes) {
        Invalid(0, "nodes", "fixed position count does not match node count");
    }
    if (!s.frozenComponents.empty() && s.frozenComponents.size() != s.nodes) {
        Invalid(0, "nodes", "frozen component count does not match node count");
    }
}

Scenario ParseScenario(std::string_view text)
{
    Scenario scenario;
    std::size_t lineNo = 0;
    while (!text.empty()) {
        ++lineNo;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = Trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(ConfigError::Kind::Syntax, lineNo, std::string(line), "expected key=value");
        }
        const std::string_view key = Trim(line.substr(0, eq));
        const std::string_view value = Trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(ConfigError::Kind::Syntax, lineNo, "", "empty key");
        }
        ApplySetting(scenario, key, value, lineNo);
    }
    ValidateScenario(scenario);
    return scenario;
}

} // namespace manet
