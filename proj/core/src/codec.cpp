#include "shardsim/codec.hpp"

#include <cstdio>
#include <fstream>

namespace shardsim {

void ByteWriter::u8(uint8_t v) { buf_.push_back(v); }

void ByteWriter::u32(uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void ByteWriter::u64(uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void ByteWriter::bytes(const uint8_t* data, size_t n) { buf_.insert(buf_.end(), data, data + n); }

void ByteReader::need(size_t n) {
    if (pos_ + n > size_) throw CodecError("truncated message");
}

uint8_t ByteReader::u8() {
    need(1);
    return data_[pos_++];
}

uint32_t ByteReader::u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(data_[pos_++]) << (8 * i);
    return v;
}

uint64_t ByteReader::u64() {
    need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(data_[pos_++]) << (8 * i);
    return v;
}

namespace {

void put_object_id(ByteWriter& w, const ObjectId& id) {
    w.u64(id.raw);
    w.u8(id.dummy ? 1 : 0);
}

ObjectId get_object_id(ByteReader& r) {
    ObjectId id;
    id.raw = r.u64();
    id.dummy = r.u8() != 0;
    return id;
}

void put_cert(ByteWriter& w, const QuorumCert& c) {
    w.u32(c.shard);
    w.u32(static_cast<uint32_t>(c.nodes.size()));
    for (auto n : c.nodes) w.u32(n);
    w.u64(c.payload_digest);
}

QuorumCert get_cert(ByteReader& r) {
    QuorumCert c;
    c.shard = r.u32();
    uint32_t n = r.u32();
    c.nodes.reserve(n);
    for (uint32_t i = 0; i < n; ++i) c.nodes.push_back(r.u32());
    c.payload_digest = r.u64();
    return c;
}

void put_vote_cert(ByteWriter& w, const VoteCert& v) {
    w.u32(v.shard);
    w.u8(v.pre_accept ? 1 : 0);
    w.u64(v.tx_seq);
    w.u32(static_cast<uint32_t>(v.input_seqs.size()));
    for (const auto& [oid, seq] : v.input_seqs) {
        put_object_id(w, oid);
        w.u64(seq);
    }
    put_cert(w, v.cert);
}

VoteCert get_vote_cert(ByteReader& r) {
    VoteCert v;
    v.shard = r.u32();
    v.pre_accept = r.u8() != 0;
    v.tx_seq = r.u64();
    uint32_t n = r.u32();
    v.input_seqs.reserve(n);
    for (uint32_t i = 0; i < n; ++i) {
        ObjectId oid = get_object_id(r);
        SeqNo seq = r.u64();
        v.input_seqs.emplace_back(oid, seq);
    }
    v.cert = get_cert(r);
    return v;
}

void put_txn(ByteWriter& w, const Transaction& t) {
    w.u64(t.id);
    w.u32(static_cast<uint32_t>(t.inputs.size()));
    for (const auto& in : t.inputs) put_object_id(w, in);
    w.u32(static_cast<uint32_t>(t.outputs.size()));
    for (const auto& out : t.outputs) {
        put_object_id(w, out.id);
        w.u32(out.shard);
    }
}

Transaction get_txn(ByteReader& r) {
    Transaction t;
    t.id = r.u64();
    uint32_t ni = r.u32();
    t.inputs.reserve(ni);
    for (uint32_t i = 0; i < ni; ++i) t.inputs.push_back(get_object_id(r));
    uint32_t no = r.u32();
    t.outputs.reserve(no);
    for (uint32_t i = 0; i < no; ++i) {
        OutputSpec spec;
        spec.id = get_object_id(r);
        spec.shard = r.u32();
        t.outputs.push_back(spec);
    }
    return t;
}

}  // namespace

std::vector<uint8_t> encode_message(const Message& msg) {
    ByteWriter w;
    w.u8(static_cast<uint8_t>(msg.kind));
    w.u8(static_cast<uint8_t>(msg.role));
    w.u32(msg.sender_shard);
    w.u8(msg.txn ? 1 : 0);
    if (msg.txn) put_txn(w, *msg.txn);
    w.u64(msg.tx_seq);
    put_cert(w, msg.cert);
    w.u32(static_cast<uint32_t>(msg.votes.size()));
    for (const auto& v : msg.votes) put_vote_cert(w, v);
    w.u8(msg.committed ? 1 : 0);
    return w.take();
}

Message decode_message(const std::vector<uint8_t>& bytes) {
    ByteReader r(bytes);
    Message msg;
    msg.kind = static_cast<MsgKind>(r.u8());
    msg.role = static_cast<SenderRole>(r.u8());
    msg.sender_shard = r.u32();
    if (r.u8()) msg.txn = std::make_shared<Transaction>(get_txn(r));
    msg.tx_seq = r.u64();
    msg.cert = get_cert(r);
    uint32_t nv = r.u32();
    msg.votes.reserve(nv);
    for (uint32_t i = 0; i < nv; ++i) msg.votes.push_back(get_vote_cert(r));
    msg.committed = r.u8() != 0;
    if (!r.done()) throw CodecError("trailing bytes after message");
    return msg;
}

std::vector<uint8_t> encode_recording_log(const std::vector<RecordedMessage>& log) {
    ByteWriter w;
    w.u8('S');
    w.u8('S');
    w.u8('R');
    w.u8('L');
    w.u8(kRecordingLogVersion);
    w.u32(static_cast<uint32_t>(log.size()));
    for (const auto& rec : log) {
        w.u32(rec.origin);
        w.u32(rec.target);
        w.u64(rec.recorded_at);
        auto payload = encode_message(rec.msg);
        w.u32(static_cast<uint32_t>(payload.size()));
        w.bytes(payload.data(), payload.size());
    }
    return w.take();
}

std::vector<RecordedMessage> decode_recording_log(const std::vector<uint8_t>& bytes) {
    ByteReader r(bytes);
    if (r.u8() != 'S' || r.u8() != 'S' || r.u8() != 'R' || r.u8() != 'L')
        throw CodecError("bad recording log magic");
    if (r.u8() != kRecordingLogVersion) throw CodecError("unsupported recording log version");
    uint32_t count = r.u32();
    std::vector<RecordedMessage> log;
    log.reserve(count);
    for (uint32_t i = 0; i < count; ++i) {
        RecordedMessage rec;
        rec.origin = r.u32();
        rec.target = r.u32();
        rec.recorded_at = r.u64();
        uint32_t len = r.u32();
        std::vector<uint8_t> payload;
        payload.reserve(len);
        for (uint32_t b = 0; b < len; ++b) payload.push_back(r.u8());
        rec.msg = decode_message(payload);
        log.push_back(std::move(rec));
    }
    if (!r.done()) throw CodecError("trailing bytes after recording log");
    return log;
}

void save_recording_log(const std::string& path, const std::vector<RecordedMessage>& log) {
    auto bytes = encode_recording_log(log);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw CodecError("cannot open recording log for writing: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

std::vector<RecordedMessage> load_recording_log(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CodecError("cannot open recording log: " + path);
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_recording_log(bytes);
}

uint64_t fnv1a(const uint8_t* data, size_t n, uint64_t seed) {
    uint64_t hash = seed;
    for (size_t i = 0; i < n; ++i) {
        hash ^= data[i];
        hash *= 1099511628211ull;
    }
    return hash;
}

uint64_t recording_digest(const std::vector<RecordedMessage>& log) {
    auto bytes = encode_recording_log(log);
    return fnv1a(bytes.data(), bytes.size());
}

std::string hex64(uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace shardsim
