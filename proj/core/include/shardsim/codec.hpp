#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shardsim/message.hpp"

namespace shardsim {

// Canonical little-endian binary encoding. Replay fidelity depends on this
// round-tripping bit-exactly, so every field is written in declaration order
// with fixed widths and u32 length prefixes for sequences.

struct CodecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class ByteWriter {
  public:
    void u8(uint8_t v);
    void u32(uint32_t v);
    void u64(uint64_t v);
    void bytes(const uint8_t* data, size_t n);
    const std::vector<uint8_t>& data() const { return buf_; }
    std::vector<uint8_t> take() { return std::move(buf_); }

  private:
    std::vector<uint8_t> buf_;
};

class ByteReader {
  public:
    ByteReader(const uint8_t* data, size_t n) : data_(data), size_(n) {}
    explicit ByteReader(const std::vector<uint8_t>& v) : data_(v.data()), size_(v.size()) {}
    uint8_t u8();
    uint32_t u32();
    uint64_t u64();
    bool done() const { return pos_ == size_; }

  private:
    void need(size_t n);
    const uint8_t* data_;
    size_t size_;
    size_t pos_ = 0;
};

std::vector<uint8_t> encode_message(const Message& msg);
Message decode_message(const std::vector<uint8_t>& bytes);

// One recorded wire message, as the adversary's tap saw it.
struct RecordedMessage {
    ActorId origin = 0;
    ActorId target = 0;
    Tick recorded_at = 0;
    Message msg;
};

constexpr uint8_t kRecordingLogVersion = 1;

std::vector<uint8_t> encode_recording_log(const std::vector<RecordedMessage>& log);
std::vector<RecordedMessage> decode_recording_log(const std::vector<uint8_t>& bytes);

void save_recording_log(const std::string& path, const std::vector<RecordedMessage>& log);
std::vector<RecordedMessage> load_recording_log(const std::string& path);

uint64_t fnv1a(const uint8_t* data, size_t n, uint64_t seed = 14695981039346656037ull);
uint64_t recording_digest(const std::vector<RecordedMessage>& log);
std::string hex64(uint64_t v);

}  // namespace shardsim
