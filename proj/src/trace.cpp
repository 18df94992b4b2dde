#include "slidecard/trace.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>

#include "slidecard/errors.hpp"

namespace slidecard {

std::optional<std::uint32_t> parse_ipv4(std::string_view text) noexcept {
  std::uint32_t address = 0;
  const char* p = text.data();
  const char* end = text.data() + text.size();
  for (int octet = 0; octet < 4; ++octet) {
    if (octet > 0) {
      if (p == end || *p != '.') return std::nullopt;
      ++p;
    }
    unsigned value = 0;
    auto [next, ec] = std::from_chars(p, end, value);
    if (ec != std::errc{} || next == p || next - p > 3 || value > 255) return std::nullopt;
    address = (address << 8) | value;
    p = next;
  }
  if (p != end) return std::nullopt;
  return address;
}

std::string format_ipv4(std::uint32_t a) {
  return std::to_string(a >> 24) + '.' + std::to_string((a >> 16) & 0xff) + '.' +
         std::to_string((a >> 8) & 0xff) + '.' + std::to_string(a & 0xff);
}

TraceReader::TraceReader(std::istream& in, TraceFormat format) : in_(in), format_(format) {}

std::optional<IpPairRecord> TraceReader::next() {
  auto r = format_ == TraceFormat::Text ? next_text() : next_binary();
  if (r) {
    if (last_timestamp_ && r->timestamp_us < *last_timestamp_) {
      throw OrderError("timestamp " + std::to_string(r->timestamp_us) + " precedes " +
                       std::to_string(*last_timestamp_) + " at " +
                       (format_ == TraceFormat::Text ? "line " + std::to_string(line_)
                                                     : "byte " + std::to_string(offset_ - kBinaryRecordBytes)));
    }
    last_timestamp_ = r->timestamp_us;
  }
  return r;
}

std::optional<IpPairRecord> TraceReader::next_text() {
  while (std::getline(in_, buffer_)) {
    ++line_;
    std::string_view line(buffer_);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string_view::npos) throw ParseError("expected timestamp_us,aip,bip", line_);

    IpPairRecord r;
    const std::string_view ts = line.substr(0, c1);
    auto [ptr, ec] = std::from_chars(ts.data(), ts.data() + ts.size(), r.timestamp_us);
    if (ec != std::errc{} || ptr != ts.data() + ts.size() || ts.empty()) {
      throw ParseError("bad timestamp '" + std::string(ts) + "'", line_);
    }
    const auto aip = parse_ipv4(line.substr(c1 + 1, c2 - c1 - 1));
    const auto bip = parse_ipv4(line.substr(c2 + 1));
    if (!aip || !bip) throw ParseError("bad IPv4 address", line_);
    r.aip = *aip;
    r.bip = *bip;
    return r;
  }
  if (in_.bad()) throw ParseError("read failure", line_);
  return std::nullopt;
}

std::optional<IpPairRecord> TraceReader::next_binary() {
  std::array<unsigned char, kBinaryRecordBytes> buf{};
  in_.read(reinterpret_cast<char*>(buf.data()), buf.size());
  const auto got = static_cast<std::size_t>(in_.gcount());
  if (got == 0) return std::nullopt;
  if (got != buf.size()) throw ParseError("truncated binary record", offset_);
  offset_ += got;

  auto le = [&](std::size_t at, std::size_t n) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < n; ++i) v |= std::uint64_t{buf[at + i]} << (8 * i);
    return v;
  };
  IpPairRecord r;
  r.timestamp_us = le(0, 8);
  r.aip = static_cast<std::uint32_t>(le(8, 4));
  r.bip = static_cast<std::uint32_t>(le(12, 4));
  return r;
}

TraceWriter::TraceWriter(std::ostream& out, TraceFormat format) : out_(out), format_(format) {}

void TraceWriter::write(const IpPairRecord& r) {
  if (format_ == TraceFormat::Text) {
    out_ << r.timestamp_us << ',' << format_ipv4(r.aip) << ',' << format_ipv4(r.bip) << '\n';
    return;
  }
  std::array<char, kBinaryRecordBytes> buf{};
  auto put = [&](std::size_t at, std::uint64_t v, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) buf[at + i] = static_cast<char>((v >> (8 * i)) & 0xff);
  };
  put(0, r.timestamp_us, 8);
  put(8, r.aip, 4);
  put(12, r.bip, 4);
  out_.write(buf.data(), buf.size());
}

SliceStream::SliceStream(TraceReader& reader, std::uint64_t slice_duration_us)
    : reader_(reader), duration_(slice_duration_us) {
  if (duration_ == 0) throw ConfigError("slice duration must be positive");
}

std::optional<SliceBatch> SliceStream::next() {
  if (!started_) {
    started_ = true;
    pending_ = reader_.next();
    if (pending_) origin_ = pending_->timestamp_us / duration_ * duration_;
  }
  if (!pending_) return std::nullopt;

  SliceBatch batch;
  batch.index = next_index_++;
  while (pending_ && slice_of(pending_->timestamp_us) == batch.index) {
    batch.records.push_back(*pending_);
    pending_ = reader_.next();
  }
  return batch;
}

}  // namespace slidecard
