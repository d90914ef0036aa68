#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "manet/cost_model.hpp"
#include "manet/mobility.hpp"
#include "manet/packets.hpp"
#include "manet/routing.hpp"

namespace manet {

/// Full description of one simulation cell. Defaults reproduce the 60-node, 1 km², 600 s setup.
struct Scenario {
    std::uint32_t nodes{60};
    double fieldX{1000.0};
    double fieldY{1000.0};
    double duration{600.0};
    double vMin{2.0};
    double vMax{6.0};
    double pause{10.0};
    double granularity{10.0};
    double sendRate{1.0};
    std::uint32_t packetSize{512};
    Protocol protocol{Protocol::Tspba};
    AppType trafficType{AppType::Type1};
    std::uint64_t seed{1};
    std::uint32_t runs{10};

    // medium
    double range{250.0};
    double bitrate{2'000'000.0};
    double frameOverheadUs{200.0};
    std::uint32_t maxMacRetries{3};

    // energy and queue
    double initialEnergy{100.0};
    double eTxPerByte{0.00002};
    double eRxPerByte{0.00001};
    std::uint32_t queueCapacity{50};
    double bandwidthWindow{1.0};

    // routing
    double collectWindow{0.05};
    double activeRouteTimeout{10.0};
    double rreqTimeout{1.0};
    std::uint32_t maxRetries{3};
    std::uint32_t ttl{35};
    std::uint32_t rMax{3};
    double costEpsilon{1e-6};
    std::uint32_t computeCostFromAttempt{2};

    // Programmatic overrides used by scripted experiments; not settable from config text.
    bool autoTraffic{true};
    std::vector<Vec2> fixedPositions;
    std::vector<CostComponents> frozenComponents;
    std::optional<WeightProfile> weightsOverride;
    std::optional<bool> dualTablesOverride;

    MobilityParams Mobility() const;
    RoutingParams Routing() const;
    CostPolicy Policy() const;
};

class ConfigError : public std::runtime_error {
  public:
    enum class Kind { UnknownKey, MalformedValue, InvalidValue, Syntax };

    ConfigError(Kind kind, std::size_t line, std::string key, const std::string& detail);

    Kind GetKind() const { return m_kind; }
    std::size_t Line() const { return m_line; }
    const std::string& Key() const { return m_key; }

  private:
    Kind m_kind;
    std::size_t m_line;
    std::string m_key;
};

/**
 * Parses a line-oriented `key=value` document. Blank lines and text after
 * '#' are ignored; unknown keys are rejected; absent keys keep their defaults.
 */
Scenario ParseScenario(std::string_view text);

/// Applies a single key/value pair; `line` is only used for error reporting.
void ApplySetting(Scenario& scenario, std::string_view key, std::string_view value, std::size_t line);

/// Checks cross-field invariants (positive counts, vMin <= vMax, ...). Throws ConfigError.
void ValidateScenario(const Scenario& scenario);

} // namespace manet
