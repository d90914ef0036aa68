#include "manet/packets.hpp"

#include <bit>
#include <cstring>

namespace manet {

namespace {

constexpr std::uint8_t kFlagComputeCost = 0x01;
constexpr std::uint8_t kFlagType2 = 0x02;

class ByteWriter {
  public:
    explicit ByteWriter(std::size_t reserve) { m_buf.reserve(reserve); }

    void U8(std::uint8_t v) { m_buf.push_back(v); }

    void U32(std::uint32_t v)
    {
        for (int shift = 24; shift >= 0; shift -= 8) {
            m_buf.push_back(static_cast<std::uint8_t>(v >> shift));
        }
    }

    void U64(std::uint64_t v)
    {
        for (int shift = 56; shift >= 0; shift -= 8) {
            m_buf.push_back(static_cast<std::uint8_t>(v >> shift));
        }
    }

    void F64(double v) { U64(std::bit_cast<std::uint64_t>(v)); }

    std::vector<std::uint8_t> Take() { return std::move(m_buf); }

  private:
    std::vector<std::uint8_t> m_buf;
};

class ByteReader {
  public:
    explicit ByteReader(std::span<const std::uint8_t> bytes)
        : m_bytes(bytes)
    {
    }

    std::uint8_t U8() { return m_bytes[m_pos++]; }

    std::uint32_t U32()
    {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v = (v << 8) | m_bytes[m_pos++];
        }
        return v;
    }

    std::uint64_t U64()
    {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) {
            v = (v << 8) | m_bytes[m_pos++];
        }
        return v;
    }

    double F64() { return std::bit_cast<double>(U64()); }

  private:
    std::span<const std::uint8_t> m_bytes;
    std::size_t m_pos{0};
};

std::uint8_t AppFlag(AppType app) { return app == AppType::Type2 ? kFlagType2 : 0; }

AppType AppFromFlags(std::uint8_t flags)
{
    return (flags & kFlagType2) ? AppType::Type2 : AppType::Type1;
}

void ExpectSize(std::span<const std::uint8_t> bytes, std::size_t expected, const char* kind)
{
    if (bytes.size() != expected) {
        throw MalformedPacket(std::string(kind) + " length " + std::to_string(bytes.size()) +
                              ", expected " + std::to_string(expected));
    }
}

} // namespace

const char* ToString(AppType app) { return app == AppType::Type1 ? "type1" : "type2"; }

PacketKind KindOf(const Packet& packet)
{
    return static_cast<PacketKind>(packet.index() + 1);
}

bool IsControl(const Packet& packet) { return !std::holds_alternative<DataPacket>(packet); }

AppType AppTypeOf(const Packet& packet)
{
    return std::visit([](const auto& p) { return p.appType; }, packet);
}

std::uint32_t FrameBytes(const Packet& packet)
{
    if (const auto* data = std::get_if<DataPacket>(&packet)) {
        return data->sizeBytes;
    }
    if (const auto* rerr = std::get_if<Rerr>(&packet)) {
        return static_cast<std::uint32_t>(kRerrHeaderSize + 8 * rerr->unreachable.size());
    }
    return static_cast<std::uint32_t>(std::holds_alternative<Rreq>(packet) ? kRreqWireSize
                                                                          : kRrepWireSize);
}

std::vector<std::uint8_t> Encode(const Packet& packet)
{
    struct Visitor {
        std::vector<std::uint8_t> operator()(const Rreq& p) const
        {
            ByteWriter w(kRreqWireSize);
            w.U8(static_cast<std::uint8_t>(PacketKind::Rreq));
            w.U8(static_cast<std::uint8_t>((p.isComputeCost ? kFlagComputeCost : 0) |
                                           AppFlag(p.appType)));
            w.U32(p.sourceAddr);
            w.U32(p.sourceSeq);
            w.U32(p.broadcastId);
            w.U32(p.destAddr);
            w.U32(p.destSeq);
            w.U32(p.hopCount);
            w.U32(p.ttl);
            w.F64(p.cumulativeCost);
            return w.Take();
        }

        std::vector<std::uint8_t> operator()(const Rrep& p) const
        {
            ByteWriter w(kRrepWireSize);
            w.U8(static_cast<std::uint8_t>(PacketKind::Rrep));
            w.U8(AppFlag(p.appType));
            w.U32(p.sourceAddr);
            w.U32(p.destAddr);
            w.U32(p.destSeq);
            w.U32(p.hopCount);
            w.U32(p.lifetimeMs);
            w.F64(p.cumulativeCost);
            return w.Take();
        }

        std::vector<std::uint8_t> operator()(const Rerr& p) const
        {
            ByteWriter w(kRerrHeaderSize + 8 * p.unreachable.size());
            w.U8(static_cast<std::uint8_t>(PacketKind::Rerr));
            w.U8(AppFlag(p.appType));
            w.U32(static_cast<std::uint32_t>(p.unreachable.size()));
            for (const auto& u : p.unreachable) {
                w.U32(u.addr);
                w.U32(u.seq);
            }
            return w.Take();
        }

        std::vector<std::uint8_t> operator()(const DataPacket& p) const
        {
            ByteWriter w(kDataWireSize);
            w.U8(static_cast<std::uint8_t>(PacketKind::Data));
            w.U8(AppFlag(p.appType));
            w.U32(p.src);
            w.U32(p.dst);
            w.U32(p.seq);
            w.U32(p.sizeBytes);
            w.U64(static_cast<std::uint64_t>(p.createdAt));
            return w.Take();
        }
    };
    return std::visit(Visitor{}, packet);
}

Packet Decode(std::span<const std::uint8_t> bytes)
{
    if (bytes.size() < 2) {
        throw MalformedPacket("truncated header (" + std::to_string(bytes.size()) + " bytes)");
    }
    const std::uint8_t kind = bytes[0];
    const std::uint8_t flags = bytes[1];
    const std::uint8_t allowed =
        kind == static_cast<std::uint8_t>(PacketKind::Rreq) ? (kFlagComputeCost | kFlagType2)
                                                            : kFlagType2;
    if (kind >= 1 && kind <= 4 && (flags & ~allowed) != 0) {
        throw MalformedPacket("reserved flag bits set");
    }

    ByteReader r(bytes.subspan(2));
    switch (kind) {
    case static_cast<std::uint8_t>(PacketKind::Rreq): {
        ExpectSize(bytes, kRreqWireSize, "RREQ");
        Rreq p;
        p.isComputeCost = (flags & kFlagComputeCost) != 0;
        p.appType = AppFromFlags(flags);
        p.sourceAddr = r.U32();
        p.sourceSeq = r.U32();
        p.broadcastId = r.U32();
        p.destAddr = r.U32();
        p.destSeq = r.U32();
        p.hopCount = r.U32();
        p.ttl = r.U32();
        p.cumulativeCost = r.F64();
        return p;
    }
    case static_cast<std::uint8_t>(PacketKind::Rrep): {
        ExpectSize(bytes, kRrepWireSize, "RREP");
        Rrep p;
        p.appType = AppFromFlags(flags);
        p.sourceAddr = r.U32();
        p.destAddr = r.U32();
        p.destSeq = r.U32();
        p.hopCount = r.U32();
        p.lifetimeMs = r.U32();
        p.cumulativeCost = r.F64();
        return p;
    }
    case static_cast<std::uint8_t>(PacketKind::Rerr): {
        if (bytes.size() < kRerrHeaderSize) {
            throw MalformedPacket("RERR shorter than its header");
        }
        Rerr p;
        p.appType = AppFromFlags(flags);
        const std::uint32_t count = r.U32();
        if (count == 0) {
            throw MalformedPacket("RERR with empty unreachable list");
        }
        if ((bytes.size() - kRerrHeaderSize) % 8 != 0 ||
            (bytes.size() - kRerrHeaderSize) / 8 != count) {
            throw MalformedPacket("RERR length does not match count " + std::to_string(count));
        }
        p.unreachable.reserve(count);
        for (std::uint32_t i = 0; i < count; ++i) {
            UnreachableDest u;
            u.addr = r.U32();
            u.seq = r.U32();
            p.unreachable.push_back(u);
        }
        return p;
    }
    case static_cast<std::uint8_t>(PacketKind::Data): {
        ExpectSize(bytes, kDataWireSize, "DATA");
        DataPacket p;
        p.appType = AppFromFlags(flags);
        p.src = r.U32();
        p.dst = r.U32();
        p.seq = r.U32();
        p.sizeBytes = r.U32();
        p.createdAt = static_cast<SimTime>(r.U64());
        if (p.sizeBytes == 0) {
            throw MalformedPacket("DATA with zero size");
        }
        return p;
    }
    default:
        throw MalformedPacket("unknown kind byte " + std::to_string(kind));
    }
}

} // namespace manet
