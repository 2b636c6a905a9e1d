#include "vironment/wire.hpp"

#include <algorithm>

namespace vironment::wire {

namespace {

void put_u16(std::uint8_t* p, std::uint16_t v) {
  p[0] = static_cast<std::uint8_t>(v & 0xFF);
  p[1] = static_cast<std::uint8_t>(v >> 8);
}

void put_u32(std::uint8_t* p, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) p[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

std::uint16_t get_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}

}  // namespace

std::uint16_t crc16(std::span<const std::uint8_t> bytes) {
  std::uint16_t crc = 0xFFFF;
  for (std::uint8_t b : bytes) {
    crc ^= static_cast<std::uint16_t>(b) << 8;
    for (int bit = 0; bit < 8; ++bit) {
      crc = (crc & 0x8000) ? static_cast<std::uint16_t>((crc << 1) ^ 0x1021)
                           : static_cast<std::uint16_t>(crc << 1);
    }
  }
  return crc;
}

std::uint16_t crc16(std::string_view text) {
  return crc16(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

FrameBytes encode_frame(const ScanFrame& frame, bool alert) {
  FrameBytes out{};
  out[0] = kSync;
  out[1] = kVersion;
  put_u16(&out[2], frame.seq);
  put_u32(&out[4], frame.timestamp_ms);
  for (int i = 0; i < kSensorCount; ++i) {
    put_u16(&out[kReadingsOffset + 2 * i], frame.readings[i]);
  }
  out[kFlagsOffset] = alert ? kAlertBit : 0;
  put_u16(&out[kCrcOffset], crc16(std::span(out).subspan(1, kCrcOffset - 1)));
  return out;
}

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kCrcMismatch: return "crc-mismatch";
    case ErrorKind::kUnknownVersion: return "unknown-version";
    case ErrorKind::kTruncatedTail: return "truncated-tail";
    case ErrorKind::kUnsynchronized: return "unsynchronized";
  }
  return "unknown";
}

void StreamDecoder::close_region(std::vector<DecodeEvent>& out) {
  if (!region_open_) return;
  out.emplace_back(region_);
  ++errors_;
  region_open_ = false;
}

void StreamDecoder::discard(std::size_t count, ErrorKind reason) {
  if (!region_open_) {
    region_open_ = true;
    region_ = {reason, head_offset_, 0};
  }
  region_.length += count;
  head_ += count;
  head_offset_ += count;
}

void StreamDecoder::feed(std::span<const std::uint8_t> chunk, std::vector<DecodeEvent>& out) {
  buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(head_));
  head_ = 0;
  buffer_.insert(buffer_.end(), chunk.begin(), chunk.end());

  for (;;) {
    const std::size_t avail = buffer_.size() - head_;
    if (avail == 0) return;
    const std::uint8_t* p = buffer_.data() + head_;

    if (p[0] != kSync) {
      const auto* sync = std::find(p, p + avail, kSync);
      discard(static_cast<std::size_t>(sync - p), ErrorKind::kUnsynchronized);
      continue;
    }
    if (avail < 2) return;
    if (p[1] != kVersion) {
      discard(1, ErrorKind::kUnknownVersion);
      continue;
    }
    if (avail < kFrameSize) return;

    const std::uint16_t expected = get_u16(p + kCrcOffset);
    if (crc16(std::span(p + 1, kCrcOffset - 1)) != expected) {
      discard(1, ErrorKind::kCrcMismatch);
      continue;
    }

    close_region(out);
    DecodedFrame f;
    f.frame.seq = get_u16(p + 2);
    f.frame.timestamp_ms = get_u32(p + 4);
    for (int i = 0; i < kSensorCount; ++i) {
      f.frame.readings[i] = get_u16(p + kReadingsOffset + 2 * i);
    }
    f.alert = (p[kFlagsOffset] & kAlertBit) != 0;
    out.emplace_back(f);
    ++frames_;
    head_ += kFrameSize;
    head_offset_ += kFrameSize;
  }
}

void StreamDecoder::finish(std::vector<DecodeEvent>& out) {
  const std::size_t tail = buffer_.size() - head_;
  if (tail > 0) {
    if (!region_open_) {
      region_open_ = true;
      region_ = {ErrorKind::kTruncatedTail, head_offset_, 0};
    }
    region_.length += tail;
    head_offset_ += tail;
  }
  buffer_.clear();
  head_ = 0;
  close_region(out);
}

std::vector<DecodeEvent> decode_stream(std::span<const std::uint8_t> bytes) {
  StreamDecoder decoder;
  std::vector<DecodeEvent> out;
  decoder.feed(bytes, out);
  decoder.finish(out);
  return out;
}

}  // namespace vironment::wire
