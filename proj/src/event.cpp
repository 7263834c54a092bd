#include "eventaug/event.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "eventaug/error.hpp"

namespace eventaug {

EventStream::EventStream(std::uint16_t width, std::uint16_t height,
                         std::vector<Event> events)
    : width_(width), height_(height), events_(std::move(events)) {
  if (width_ == 0 || height_ == 0)
    throw InvalidArgument("stream geometry must be at least 1x1");
  for (std::size_t i = 0; i < events_.size(); ++i) {
    const Event &e = events_[i];
    if (e.x >= width_ || e.y >= height_)
      throw InvalidArgument("event " + std::to_string(i) +
                            " lies outside the sensor geometry");
    if (e.p != 1 && e.p != -1)
      throw InvalidArgument("event " + std::to_string(i) +
                            " has polarity other than -1/+1");
  }
  auto by_time = [](const Event &a, const Event &b) { return a.t < b.t; };
  if (!std::is_sorted(events_.begin(), events_.end(), by_time))
    std::stable_sort(events_.begin(), events_.end(), by_time);
}

std::optional<std::size_t> frame_element_count(std::uint32_t num_slices,
                                               std::uint32_t height,
                                               std::uint32_t width) noexcept {
  std::size_t n = FrameTensor::kChannels;
  for (std::size_t dim : {std::size_t{num_slices}, std::size_t{height},
                          std::size_t{width}}) {
    if (dim != 0 && n > std::numeric_limits<std::size_t>::max() / dim)
      return std::nullopt;
    n *= dim;
  }
  return n;
}

namespace {

std::size_t checked_count(std::uint32_t t, std::uint32_t h, std::uint32_t w) {
  auto n = frame_element_count(t, h, w);
  if (!n)
    throw InvalidArgument("frame tensor dimensions overflow");
  return *n;
}

} // namespace

FrameTensor::FrameTensor(std::uint32_t num_slices, std::uint32_t height,
                         std::uint32_t width)
    : num_slices_(num_slices), height_(height), width_(width),
      counts_(checked_count(num_slices, height, width), 0) {}

FrameTensor::FrameTensor(std::uint32_t num_slices, std::uint32_t height,
                         std::uint32_t width, std::vector<std::uint32_t> counts)
    : num_slices_(num_slices), height_(height), width_(width),
      counts_(std::move(counts)) {
  if (counts_.size() != checked_count(num_slices, height, width))
    throw InvalidArgument("frame tensor payload does not match its shape");
}

FrameTensor FrameTensor::from_wide_counts(std::uint32_t num_slices,
                                          std::uint32_t height,
                                          std::uint32_t width,
                                          std::span<const std::uint64_t> counts) {
  std::vector<std::uint32_t> narrow(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] > std::numeric_limits<std::uint32_t>::max())
      throw InvalidArgument("frame count " + std::to_string(counts[i]) +
                            " exceeds the 32-bit cell range");
    narrow[i] = static_cast<std::uint32_t>(counts[i]);
  }
  return FrameTensor(num_slices, height, width, std::move(narrow));
}

std::uint64_t FrameTensor::slice_sum(std::size_t j) const noexcept {
  auto s = slice(j);
  return std::accumulate(s.begin(), s.end(), std::uint64_t{0});
}

} // namespace eventaug
