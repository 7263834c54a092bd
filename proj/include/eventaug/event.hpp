#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace eventaug {

/// One brightness change reported by the sensor. `p` is -1 or +1,
/// `t` is in microseconds.
struct Event {
  std::uint64_t t = 0;
  std::uint16_t x = 0;
  std::uint16_t y = 0;
  std::int8_t p = 1;

  friend bool operator==(const Event &, const Event &) = default;
};

/// Frame channel an event polarity integrates into: -1 -> 0, +1 -> 1.
constexpr int polarity_channel(std::int8_t p) noexcept { return p > 0 ? 1 : 0; }

/// How polarities are written in an input file.
enum class PolarityEncoding { NegOneOne, ZeroOne };

/// A timestamp-sorted event sequence with its sensor geometry.
///
/// The constructor validates every event against the geometry and stably
/// sorts by timestamp if needed, so a constructed stream always satisfies
/// its invariants. Instances are immutable.
class EventStream {
public:
  EventStream(std::uint16_t width, std::uint16_t height,
              std::vector<Event> events = {});

  std::uint16_t width() const noexcept { return width_; }
  std::uint16_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return events_.size(); }
  bool empty() const noexcept { return events_.empty(); }

  std::span<const Event> events() const noexcept { return events_; }
  const Event &operator[](std::size_t i) const noexcept { return events_[i]; }

  friend bool operator==(const EventStream &, const EventStream &) = default;

private:
  std::uint16_t width_;
  std::uint16_t height_;
  std::vector<Event> events_;
};

/// Number of cells in a T x 2 x H x W tensor, or nullopt if it does not fit
/// in size_t.
std::optional<std::size_t> frame_element_count(std::uint32_t num_slices,
                                               std::uint32_t height,
                                               std::uint32_t width) noexcept;

/// Dense integrated counts indexed [slice][channel][y][x], two channels.
class FrameTensor {
public:
  static constexpr std::uint32_t kChannels = 2;

  /// Zero-filled tensor.
  FrameTensor(std::uint32_t num_slices, std::uint32_t height,
              std::uint32_t width);

  /// Takes ownership of `counts`, which must hold exactly
  /// num_slices * 2 * height * width values.
  FrameTensor(std::uint32_t num_slices, std::uint32_t height,
              std::uint32_t width, std::vector<std::uint32_t> counts);

  /// Builds a tensor from wider counts; any value above 2^32-1 is rejected.
  static FrameTensor from_wide_counts(std::uint32_t num_slices,
                                      std::uint32_t height, std::uint32_t width,
                                      std::span<const std::uint64_t> counts);

  std::uint32_t num_slices() const noexcept { return num_slices_; }
  std::uint32_t height() const noexcept { return height_; }
  std::uint32_t width() const noexcept { return width_; }

  std::size_t slice_stride() const noexcept {
    return std::size_t{kChannels} * height_ * width_;
  }
  std::size_t index(std::size_t slice, std::size_t channel, std::size_t y,
                    std::size_t x) const noexcept {
    return ((slice * kChannels + channel) * height_ + y) * width_ + x;
  }
  std::uint32_t at(std::size_t slice, std::size_t channel, std::size_t y,
                   std::size_t x) const noexcept {
    return counts_[index(slice, channel, y, x)];
  }

  std::span<const std::uint32_t> counts() const noexcept { return counts_; }
  std::span<const std::uint32_t> slice(std::size_t j) const noexcept {
    return std::span<const std::uint32_t>(counts_).subspan(j * slice_stride(),
                                                           slice_stride());
  }
  std::uint64_t slice_sum(std::size_t j) const noexcept;

  friend bool operator==(const FrameTensor &, const FrameTensor &) = default;

private:
  std::uint32_t num_slices_;
  std::uint32_t height_;
  std::uint32_t width_;
  std::vector<std::uint32_t> counts_;
};

} // namespace eventaug
