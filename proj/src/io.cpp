#include "eventaug/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "eventaug/error.hpp"

namespace eventaug {

namespace {

constexpr char kStreamMagic[4] = {'E', 'V', 'S', 'T'};
constexpr char kFrameMagic[4] = {'E', 'V', 'F', 'R'};

template <typename U> void put_le(Bytes &out, U value) {
  for (std::size_t i = 0; i < sizeof(U); ++i)
    out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
}

template <typename U> U get_le(std::span<const std::uint8_t> in, std::size_t at) {
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i)
    value |= static_cast<U>(in[at + i]) << (8 * i);
  return value;
}

std::int8_t decode_polarity(long long raw, PolarityEncoding encoding, bool &ok) {
  ok = true;
  if (encoding == PolarityEncoding::NegOneOne) {
    if (raw == -1 || raw == 1)
      return static_cast<std::int8_t>(raw);
  } else {
    if (raw == 0)
      return -1;
    if (raw == 1)
      return 1;
  }
  ok = false;
  return 0;
}

template <typename Int> bool parse_int(std::string_view token, Int &out) {
  if (!token.empty() && token.front() == '+')
    token.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc{} && ptr == token.data() + token.size();
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
      ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r')
      ++j;
    if (j > i)
      tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

} // namespace

EventStream parse_text_stream(std::string_view text, PolarityEncoding encoding) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  auto next_line = [&](std::string_view &line) {
    if (pos >= text.size())
      return false;
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos)
      end = text.size();
    line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    return true;
  };

  std::string_view line;
  if (!next_line(line))
    throw FormatError("missing header", 1);
  auto header = split_ws(line);
  // The leading '#' is optional on the header line.
  if (!header.empty() && header.front() == "#")
    header.erase(header.begin());
  else if (!header.empty() && header.front().starts_with('#'))
    header.front().remove_prefix(1);
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  if (header.size() != 2 || !parse_int(header[0], width) ||
      !parse_int(header[1], height) || width == 0 || height == 0 ||
      width > std::numeric_limits<std::uint16_t>::max() ||
      height > std::numeric_limits<std::uint16_t>::max())
    throw FormatError("malformed header", line_no);

  std::vector<Event> events;
  while (next_line(line)) {
    auto tokens = split_ws(line);
    if (tokens.empty() || tokens.front().starts_with('#'))
      continue;
    if (tokens.size() != 4)
      throw FormatError("expected 4 fields, found " + std::to_string(tokens.size()),
                        line_no);
    std::uint64_t t = 0;
    std::uint32_t x = 0;
    std::uint32_t y = 0;
    long long p = 0;
    if (!parse_int(tokens[0], t) || !parse_int(tokens[1], x) ||
        !parse_int(tokens[2], y) || !parse_int(tokens[3], p))
      throw FormatError("non-numeric field", line_no);
    bool ok = false;
    std::int8_t polarity = decode_polarity(p, encoding, ok);
    if (!ok)
      throw FormatError("invalid polarity", line_no);
    if (x >= width || y >= height)
      throw FormatError("coordinate out of range", line_no);
    events.push_back(Event{t, static_cast<std::uint16_t>(x),
                           static_cast<std::uint16_t>(y), polarity});
  }
  return EventStream(static_cast<std::uint16_t>(width),
                     static_cast<std::uint16_t>(height), std::move(events));
}

std::string write_text_stream(const EventStream &stream) {
  std::string out = "# " + std::to_string(stream.width()) + " " +
                    std::to_string(stream.height()) + "\n";
  out.reserve(out.size() + stream.size() * 24);
  for (const Event &e : stream.events()) {
    out += std::to_string(e.t);
    out += ' ';
    out += std::to_string(e.x);
    out += ' ';
    out += std::to_string(e.y);
    out += e.p > 0 ? " 1\n" : " -1\n";
  }
  return out;
}

EventStream parse_binary_stream(std::span<const std::uint8_t> bytes,
                                PolarityEncoding encoding) {
  if (bytes.size() < kStreamHeaderSize)
    throw FormatError("truncated stream header");
  if (std::memcmp(bytes.data(), kStreamMagic, 4) != 0)
    throw FormatError("bad magic: not an EVST stream");
  if (auto version = get_le<std::uint16_t>(bytes, 4); version != kStreamVersion)
    throw FormatError("unsupported stream version " + std::to_string(version));
  const auto width = get_le<std::uint16_t>(bytes, 6);
  const auto height = get_le<std::uint16_t>(bytes, 8);
  if (get_le<std::uint16_t>(bytes, 10) != 0)
    throw FormatError("reserved header field is not zero");
  const auto declared = get_le<std::uint64_t>(bytes, 12);
  if (width == 0 || height == 0)
    throw FormatError("stream geometry must be at least 1x1");

  const std::size_t payload = bytes.size() - kStreamHeaderSize;
  if (payload % kStreamRecordSize != 0)
    throw FormatError("truncated record");
  if (payload / kStreamRecordSize != declared)
    throw FormatError("declared event count " + std::to_string(declared) +
                      " does not match " +
                      std::to_string(payload / kStreamRecordSize) + " records");

  std::vector<Event> events;
  events.reserve(declared);
  for (std::size_t i = 0; i < declared; ++i) {
    const std::size_t at = kStreamHeaderSize + i * kStreamRecordSize;
    bool ok = false;
    const auto raw_p = static_cast<std::int8_t>(bytes[at + 12]);
    std::int8_t polarity = decode_polarity(raw_p, encoding, ok);
    if (!ok)
      throw FormatError("invalid polarity in record " + std::to_string(i));
    if (bytes[at + 13] != 0 || bytes[at + 14] != 0 || bytes[at + 15] != 0)
      throw FormatError("nonzero padding in record " + std::to_string(i));
    Event e{get_le<std::uint64_t>(bytes, at), get_le<std::uint16_t>(bytes, at + 8),
            get_le<std::uint16_t>(bytes, at + 10), polarity};
    if (e.x >= width || e.y >= height)
      throw FormatError("coordinate out of range in record " + std::to_string(i));
    events.push_back(e);
  }
  return EventStream(width, height, std::move(events));
}

Bytes write_binary_stream(const EventStream &stream) {
  Bytes out;
  out.reserve(kStreamHeaderSize + stream.size() * kStreamRecordSize);
  out.insert(out.end(), std::begin(kStreamMagic), std::end(kStreamMagic));
  put_le<std::uint16_t>(out, kStreamVersion);
  put_le<std::uint16_t>(out, stream.width());
  put_le<std::uint16_t>(out, stream.height());
  put_le<std::uint16_t>(out, 0);
  put_le<std::uint64_t>(out, stream.size());
  for (const Event &e : stream.events()) {
    put_le<std::uint64_t>(out, e.t);
    put_le<std::uint16_t>(out, e.x);
    put_le<std::uint16_t>(out, e.y);
    out.push_back(static_cast<std::uint8_t>(e.p));
    out.insert(out.end(), 3, 0);
  }
  return out;
}

Bytes write_frame_tensor(const FrameTensor &frames) {
  Bytes out;
  out.reserve(kFrameHeaderSize + frames.counts().size() * 4);
  out.insert(out.end(), std::begin(kFrameMagic), std::end(kFrameMagic));
  put_le<std::uint16_t>(out, kFrameVersion);
  put_le<std::uint32_t>(out, frames.num_slices());
  put_le<std::uint32_t>(out, FrameTensor::kChannels);
  put_le<std::uint32_t>(out, frames.height());
  put_le<std::uint32_t>(out, frames.width());
  for (std::uint32_t c : frames.counts())
    put_le<std::uint32_t>(out, c);
  return out;
}

FrameTensor read_frame_tensor(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kFrameHeaderSize)
    throw FormatError("truncated frame header");
  if (std::memcmp(bytes.data(), kFrameMagic, 4) != 0)
    throw FormatError("bad magic: not an EVFR tensor");
  if (auto version = get_le<std::uint16_t>(bytes, 4); version != kFrameVersion)
    throw FormatError("unsupported frame version " + std::to_string(version));
  const auto slices = get_le<std::uint32_t>(bytes, 6);
  const auto channels = get_le<std::uint32_t>(bytes, 10);
  const auto height = get_le<std::uint32_t>(bytes, 14);
  const auto width = get_le<std::uint32_t>(bytes, 18);
  if (channels != FrameTensor::kChannels)
    throw FormatError("unsupported channel count " + std::to_string(channels));
  auto cells = frame_element_count(slices, height, width);
  if (!cells || *cells > std::numeric_limits<std::size_t>::max() / 4)
    throw FormatError("frame dimensions overflow");
  const std::size_t payload = bytes.size() - kFrameHeaderSize;
  if (payload < *cells * 4)
    throw FormatError("truncated payload");
  if (payload > *cells * 4)
    throw FormatError("trailing bytes after frame payload");
  std::vector<std::uint32_t> counts(*cells);
  for (std::size_t i = 0; i < counts.size(); ++i)
    counts[i] = get_le<std::uint32_t>(bytes, kFrameHeaderSize + 4 * i);
  return FrameTensor(slices, height, width, std::move(counts));
}

std::optional<StreamFormat> stream_format_for(const std::filesystem::path &path) {
  const auto ext = path.extension();
  if (ext == ".txt")
    return StreamFormat::Text;
  if (ext == ".evs")
    return StreamFormat::Binary;
  return std::nullopt;
}

Bytes read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot open " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path &path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw Error("cannot write " + path.string());
  out.write(reinterpret_cast<const char *>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out)
    throw Error("short write to " + path.string());
}

EventStream decode_stream(std::span<const std::uint8_t> bytes, StreamFormat format,
                          PolarityEncoding encoding) {
  if (format == StreamFormat::Binary)
    return parse_binary_stream(bytes, encoding);
  return parse_text_stream(
      std::string_view(reinterpret_cast<const char *>(bytes.data()), bytes.size()),
      encoding);
}

Bytes encode_stream(const EventStream &stream, StreamFormat format) {
  if (format == StreamFormat::Binary)
    return write_binary_stream(stream);
  std::string text = write_text_stream(stream);
  return Bytes(text.begin(), text.end());
}

EventStream load_stream(const std::filesystem::path &path, PolarityEncoding encoding) {
  auto format = stream_format_for(path);
  if (!format)
    throw InvalidArgument("unsupported stream extension: " + path.string());
  return decode_stream(read_file(path), *format, encoding);
}

void save_stream(const std::filesystem::path &path, const EventStream &stream) {
  auto format = stream_format_for(path);
  if (!format)
    throw InvalidArgument("unsupported stream extension: " + path.string());
  write_file(path, encode_stream(stream, *format));
}

FrameTensor load_frame_tensor(const std::filesystem::path &path) {
  return read_frame_tensor(read_file(path));
}

void save_frame_tensor(const std::filesystem::path &path, const FrameTensor &frames) {
  write_file(path, write_frame_tensor(frames));
}

} // namespace eventaug
