#include "manet/trace.hpp"

#include <array>
#include <istream>
#include <ostream>

namespace manet {

namespace {

constexpr std::size_t kRecordHeader = 8 + 1 + 4 + 4 + 2;

template <typename T>
void PutBigEndian(std::array<std::uint8_t, kRecordHeader>& buf, std::size_t& pos, T v)
{
    for (int shift = static_cast<int>(sizeof(T) * 8) - 8; shift >= 0; shift -= 8) {
        buf[pos++] = static_cast<std::uint8_t>(static_cast<std::uint64_t>(v) >> shift);
    }
}

template <typename T>
T GetBigEndian(const std::uint8_t* p)
{
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        v = (v << 8) | p[i];
    }
    return static_cast<T>(v);
}

} // namespace

void TraceWriter::Write(SimTime time, TraceEvent event, NodeId node, NodeId peer, const Packet* packet)
{
    std::vector<std::uint8_t> body;
    if (packet != nullptr) {
        body = Encode(*packet);
    }
    std::array<std::uint8_t, kRecordHeader> header{};
    std::size_t pos = 0;
    PutBigEndian(header, pos, static_cast<std::uint64_t>(time));
    PutBigEndian(header, pos, static_cast<std::uint8_t>(event));
    PutBigEndian(header, pos, node);
    PutBigEndian(header, pos, peer);
    PutBigEndian(header, pos, static_cast<std::uint16_t>(body.size()));
    m_out.write(reinterpret_cast<const char*>(header.data()), header.size());
    m_out.write(reinterpret_cast<const char*>(body.data()), static_cast<std::streamsize>(body.size()));
}

bool TraceReader::Next(TraceRecord& rec)
{
    std::array<std::uint8_t, kRecordHeader> header{};
    if (!m_in.read(reinterpret_cast<char*>(header.data()), header.size())) {
        if (m_in.gcount() != 0) {
            throw MalformedPacket("trace header truncated");
        }
        return false;
    }
    rec.time = static_cast<SimTime>(GetBigEndian<std::uint64_t>(header.data()));
    rec.event = static_cast<TraceEvent>(header[8]);
    rec.node = GetBigEndian<std::uint32_t>(header.data() + 9);
    rec.peer = GetBigEndian<std::uint32_t>(header.data() + 13);
    const auto length = GetBigEndian<std::uint16_t>(header.data() + 17);
    rec.packet.reset();
    if (length > 0) {
        m_body.resize(length);
        if (!m_in.read(reinterpret_cast<char*>(m_body.data()), length)) {
            throw MalformedPacket("trace record truncated");
        }
        rec.packet = Decode(m_body);
    }
    return true;
}

std::vector<TraceRecord> ReadTrace(std::istream& in)
{
    std::vector<TraceRecord> records;
    TraceReader reader(in);
    TraceRecord rec;
    while (reader.Next(rec)) {
        records.push_back(rec);
    }
    return records;
}

MetricsLedger LedgerFromTrace(std::istream& in, double duration)
{
    MetricsLedger ledger;
    ledger.duration = duration;
    TraceReader reader(in);
    TraceRecord rec;
    while (reader.Next(rec)) {
        switch (rec.event) {
        case TraceEvent::Tx:
            if (rec.packet && IsControl(*rec.packet)) {
                ++ledger.routingTxCount;
            } else if (rec.packet) {
                ++ledger.dataTxCount;
            }
            break;
        case TraceEvent::Generate:
            ++ledger.generated;
            break;
        case TraceEvent::Deliver:
            if (rec.packet) {
                ledger.RecordDelivery(std::get<DataPacket>(*rec.packet), rec.time);
            }
            break;
        case TraceEvent::Death:
            ++ledger.deadNodes;
            break;
        default:
            break;
        }
    }
    return ledger;
}

EnergyReplay ReplayEnergy(std::istream& in, std::size_t nodes, const EnergyRates& rates)
{
    EnergyReplay out;
    std::vector<Battery> batteries(nodes, Battery(rates.initial));
    std::vector<bool> dead(nodes, false);
    out.debited.assign(nodes, 0);
    TraceReader reader(in);
    TraceRecord rec;
    while (reader.Next(rec)) {
        if (rec.node >= nodes) {
            continue;
        }
        if (rec.event == TraceEvent::Death) {
            dead[rec.node] = true;
            continue;
        }
        if ((rec.event != TraceEvent::Tx && rec.event != TraceEvent::Rx) || !rec.packet) {
            continue;
        }
        if (rec.event == TraceEvent::Tx && dead[rec.node]) {
            ++out.framesFromDeadSenders;
        }
        const EnergyNano perByte = rec.event == TraceEvent::Tx ? rates.txPerByte : rates.rxPerByte;
        out.debited[rec.node] +=
            batteries[rec.node].Debit(perByte * static_cast<EnergyNano>(FrameBytes(*rec.packet)));
    }
    out.remaining.reserve(nodes);
    for (const auto& b : batteries) {
        out.remaining.push_back(b.Remaining());
    }
    return out;
}

} // namespace manet
