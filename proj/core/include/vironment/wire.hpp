#pragma once

// Device-to-display framing for scan frames.
//
// Layout, little-endian:
//   [0]      sync 0xAA
//   [1]      version 0x01
//   [2..3]   seq
//   [4..7]   timestamp_ms
//   [8..31]  12 x u16 readings in mm (0xFFFF = no echo)
//   [32]     alert flags, bit0 = LED/horn
//   [33..34] CRC-16/CCITT-FALSE over bytes [1..32]

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "vironment/mux.hpp"

namespace vironment::wire {

inline constexpr std::uint8_t kSync = 0xAA;
inline constexpr std::uint8_t kVersion = 0x01;
inline constexpr std::size_t kFrameSize = 35;
inline constexpr std::size_t kReadingsOffset = 8;
inline constexpr std::size_t kFlagsOffset = 32;
inline constexpr std::size_t kCrcOffset = 33;
inline constexpr std::uint8_t kAlertBit = 0x01;

using FrameBytes = std::array<std::uint8_t, kFrameSize>;

/// CRC-16/CCITT-FALSE: poly 0x1021, init 0xFFFF, no reflection, no final xor.
std::uint16_t crc16(std::span<const std::uint8_t> bytes);
std::uint16_t crc16(std::string_view text);

FrameBytes encode_frame(const ScanFrame& frame, bool alert);

struct DecodedFrame {
  ScanFrame frame;
  bool alert = false;

  friend bool operator==(const DecodedFrame&, const DecodedFrame&) = default;
};

enum class ErrorKind {
  kCrcMismatch,
  kUnknownVersion,
  kTruncatedTail,
  kUnsynchronized,  // bytes before the first sync byte
};

std::string_view to_string(ErrorKind kind);

/// One contiguous run of discarded bytes. `kind` is the reason the first
/// byte of the run was rejected.
struct DecodeError {
  ErrorKind kind;
  std::uint64_t offset = 0;  // stream offset of the first discarded byte
  std::uint64_t length = 0;

  friend bool operator==(const DecodeError&, const DecodeError&) = default;
};

using DecodeEvent = std::variant<DecodedFrame, DecodeError>;

/// Incremental resynchronizing decoder. Decisions depend only on stream
/// content, never on how the stream was chunked.
class StreamDecoder {
 public:
  /// Appends decoded frames and closed error regions to `out`.
  void feed(std::span<const std::uint8_t> chunk, std::vector<DecodeEvent>& out);

  /// Flushes the open error region or reports a truncated tail.
  void finish(std::vector<DecodeEvent>& out);

  std::uint64_t frames_decoded() const { return frames_; }
  std::uint64_t errors_reported() const { return errors_; }

 private:
  void discard(std::size_t count, ErrorKind reason);
  void close_region(std::vector<DecodeEvent>& out);

  // Unconsumed bytes are buffer_[head_..]; at most one partial frame
  // survives between feed() calls.
  std::vector<std::uint8_t> buffer_;
  std::size_t head_ = 0;
  std::uint64_t head_offset_ = 0;  // stream offset of buffer_[head_]
  bool region_open_ = false;
  DecodeError region_{};
  std::uint64_t frames_ = 0;
  std::uint64_t errors_ = 0;
};

/// Convenience wrapper: decodes a complete stream in one call.
std::vector<DecodeEvent> decode_stream(std::span<const std::uint8_t> bytes);

}  // namespace vironment::wire
