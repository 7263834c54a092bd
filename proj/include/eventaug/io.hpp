#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eventaug/event.hpp"

namespace eventaug {

using Bytes = std::vector<std::uint8_t>;

// Binary stream layout (little-endian):
//   "EVST" | u16 version=1 | u16 width | u16 height | u16 reserved=0 | u64 N
//   N x { u64 t | u16 x | u16 y | i8 p | 3 zero bytes }
inline constexpr std::size_t kStreamHeaderSize = 20;
inline constexpr std::size_t kStreamRecordSize = 16;
inline constexpr std::uint16_t kStreamVersion = 1;

// Binary frame layout (little-endian):
//   "EVFR" | u16 version=1 | u32 T | u32 C=2 | u32 H | u32 W
//   T*2*H*W u32 counts, slice-major, then channel, row, column
inline constexpr std::size_t kFrameHeaderSize = 22;
inline constexpr std::uint16_t kFrameVersion = 1;

/// Text stream: "# <width> <height>" header, then "<t> <x> <y> <p>" lines.
/// Later lines starting with '#' and blank lines are ignored. Unsorted
/// input is stably sorted by timestamp.
EventStream parse_text_stream(std::string_view text,
                              PolarityEncoding encoding = PolarityEncoding::NegOneOne);
std::string write_text_stream(const EventStream &stream);

EventStream parse_binary_stream(std::span<const std::uint8_t> bytes,
                                PolarityEncoding encoding = PolarityEncoding::NegOneOne);
Bytes write_binary_stream(const EventStream &stream);

Bytes write_frame_tensor(const FrameTensor &frames);
FrameTensor read_frame_tensor(std::span<const std::uint8_t> bytes);

enum class StreamFormat { Text, Binary };

/// ".txt" is text, ".evs" is binary; anything else is unsupported.
std::optional<StreamFormat> stream_format_for(const std::filesystem::path &path);

Bytes read_file(const std::filesystem::path &path);
void write_file(const std::filesystem::path &path, std::span<const std::uint8_t> bytes);

EventStream load_stream(const std::filesystem::path &path,
                        PolarityEncoding encoding = PolarityEncoding::NegOneOne);
void save_stream(const std::filesystem::path &path, const EventStream &stream);

EventStream decode_stream(std::span<const std::uint8_t> bytes, StreamFormat format,
                          PolarityEncoding encoding = PolarityEncoding::NegOneOne);
Bytes encode_stream(const EventStream &stream, StreamFormat format);

FrameTensor load_frame_tensor(const std::filesystem::path &path);
void save_frame_tensor(const std::filesystem::path &path, const FrameTensor &frames);

} // namespace eventaug
