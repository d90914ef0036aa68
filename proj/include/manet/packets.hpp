#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "manet/sim_time.hpp"

namespace manet {

using NodeId = std::uint32_t;
using SeqNo = std::uint32_t;

inline constexpr NodeId kBroadcast = 0xFFFFFFFFu;

/**
 * Application class of a flow. Each class has its own routing table and its
 * own control packets under TSPBA-AODV.
 */
enum class AppType : std::uint8_t {
    Type1 = 1, ///< loss tolerant, delay insensitive
    Type2 = 2, ///< loss tolerant, delay sensitive
};

constexpr std::size_t AppIndex(AppType app) { return app == AppType::Type1 ? 0 : 1; }
const char* ToString(AppType app);

struct Rreq {
    NodeId sourceAddr{0};
    SeqNo sourceSeq{0};
    std::uint32_t broadcastId{0};
    NodeId destAddr{0};
    SeqNo destSeq{0}; ///< 0 means unknown
    std::uint32_t hopCount{0};
    std::uint32_t ttl{0};
    bool isComputeCost{false};
    AppType appType{AppType::Type1};
    double cumulativeCost{0.0};

    bool operator==(const Rreq&) const = default;
};

struct Rrep {
    NodeId sourceAddr{0}; ///< originator of the discovery
    NodeId destAddr{0};
    SeqNo destSeq{0};
    std::uint32_t hopCount{0};
    std::uint32_t lifetimeMs{0};
    AppType appType{AppType::Type1};
    double cumulativeCost{0.0};

    bool operator==(const Rrep&) const = default;
};

struct UnreachableDest {
    NodeId addr{0};
    SeqNo seq{0};

    bool operator==(const UnreachableDest&) const = default;
};

struct Rerr {
    std::vector<UnreachableDest> unreachable;
    AppType appType{AppType::Type1};

    bool operator==(const Rerr&) const = default;
};

struct DataPacket {
    NodeId src{0};
    NodeId dst{0};
    AppType appType{AppType::Type1};
    std::uint32_t seq{0};
    std::uint32_t sizeBytes{1};
    SimTime createdAt{0};

    bool operator==(const DataPacket&) const = default;
};

using Packet = std::variant<Rreq, Rrep, Rerr, DataPacket>;

enum class PacketKind : std::uint8_t { Rreq = 1, Rrep = 2, Rerr = 3, Data = 4 };

PacketKind KindOf(const Packet& packet);
bool IsControl(const Packet& packet);
AppType AppTypeOf(const Packet& packet);

/// Bytes a frame occupies on the air: payload size for data, encoded size for control.
std::uint32_t FrameBytes(const Packet& packet);

class MalformedPacket : public std::runtime_error {
  public:
    explicit MalformedPacket(const std::string& what)
        : std::runtime_error("malformed packet: " + what)
    {
    }
};

/*
 * Wire layout (all integers big-endian):
 *   u8 kind | u8 flags (bit0 isComputeCost, bit1 appType: 0=Type1, 1=Type2) | fields
 * RREQ: u32 x7 (sourceAddr..ttl), f64 cumulativeCost            -> 38 bytes
 * RREP: u32 x5 (sourceAddr..lifetimeMs), f64 cumulativeCost     -> 30 bytes
 * RERR: u32 count, then count x (u32 addr, u32 seq)             -> 6 + 8n bytes
 * DATA: u32 x4 (src, dst, seq, sizeBytes), u64 createdAt (us)   -> 26 bytes
 */
inline constexpr std::size_t kRreqWireSize = 38;
inline constexpr std::size_t kRrepWireSize = 30;
inline constexpr std::size_t kRerrHeaderSize = 6;
inline constexpr std::size_t kDataWireSize = 26;

std::vector<std::uint8_t> Encode(const Packet& packet);
Packet Decode(std::span<const std::uint8_t> bytes);

struct RouteEntry {
    NodeId dest{0};
    NodeId nextHop{0};
    SeqNo destSeq{0};
    std::uint32_t hopCount{0};
    SimTime expiry{0};
    double cumulativeCost{0.0};
    bool valid{true};

    bool IsUsable(SimTime now) const { return valid && expiry > now; }
};

} // namespace manet
