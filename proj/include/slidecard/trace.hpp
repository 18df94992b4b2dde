#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace slidecard {

struct IpPairRecord {
  std::uint64_t timestamp_us = 0;
  std::uint32_t aip = 0;  // monitored host
  std::uint32_t bip = 0;  // opposite host

  friend bool operator==(const IpPairRecord&, const IpPairRecord&) = default;
};

enum class TraceFormat : std::uint8_t {
  Text,    // CSV lines "timestamp_us,aip,bip" with dotted-quad addresses
  Binary,  // 16-byte little-endian records: u64 timestamp, u32 aip, u32 bip
};

inline constexpr std::size_t kBinaryRecordBytes = 16;

std::optional<std::uint32_t> parse_ipv4(std::string_view text) noexcept;
std::string format_ipv4(std::uint32_t address);

// Sequential reader. Throws ParseError on malformed input and OrderError when
// a timestamp goes backwards.
class TraceReader {
 public:
  TraceReader(std::istream& in, TraceFormat format);

  std::optional<IpPairRecord> next();

 private:
  std::optional<IpPairRecord> next_text();
  std::optional<IpPairRecord> next_binary();

  std::istream& in_;
  TraceFormat format_;
  std::uint64_t line_ = 0;
  std::uint64_t offset_ = 0;
  std::optional<std::uint64_t> last_timestamp_;
  std::string buffer_;
};

class TraceWriter {
 public:
  TraceWriter(std::ostream& out, TraceFormat format);
  void write(const IpPairRecord& r);

 private:
  std::ostream& out_;
  TraceFormat format_;
};

struct SliceBatch {
  std::uint64_t index = 0;
  std::vector<IpPairRecord> records;
};

// Groups an ordered record stream into consecutive slices. Slice t covers
// [t0 + t*d, t0 + (t+1)*d) where t0 is the first timestamp rounded down to a
// multiple of d. Slices without records come out as empty batches.
class SliceStream {
 public:
  SliceStream(TraceReader& reader, std::uint64_t slice_duration_us);

  std::optional<SliceBatch> next();

  std::uint64_t slice_of(std::uint64_t timestamp_us) const noexcept {
    return (timestamp_us - origin_) / duration_;
  }

 private:
  TraceReader& reader_;
  std::uint64_t duration_;
  std::uint64_t origin_ = 0;
  std::uint64_t next_index_ = 0;
  bool started_ = false;
  std::optional<IpPairRecord> pending_;
};

}  // namespace slidecard
