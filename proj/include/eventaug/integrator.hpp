#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "eventaug/event.hpp"

namespace eventaug {

/// Half-open event index range [start, end).
struct SliceBounds {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - start; }
  friend bool operator==(const SliceBounds &, const SliceBounds &) = default;
};

/// Assignment of event indices to frame slices.
///
/// `slice_stream` produces the count-based plan where slice j covers
/// [floor(N/T)*j, floor(N/T)*(j+1)) and the trailing N mod T events belong to
/// no slice. `from_boundaries` accepts any ordered, non-overlapping set of
/// ranges, which is how unequal (e.g. time-based) slicings are supplied.
class SlicePlan {
public:
  static SlicePlan from_boundaries(std::size_t event_count,
                                   std::vector<SliceBounds> boundaries);

  std::uint32_t num_slices() const noexcept {
    return static_cast<std::uint32_t>(boundaries_.size());
  }
  std::size_t event_count() const noexcept { return event_count_; }
  std::span<const SliceBounds> boundaries() const noexcept { return boundaries_; }
  const SliceBounds &operator[](std::size_t j) const noexcept { return boundaries_[j]; }

  /// Number of events covered by some slice.
  std::size_t assigned_events() const noexcept;

  friend bool operator==(const SlicePlan &, const SlicePlan &) = default;

private:
  SlicePlan(std::size_t event_count, std::vector<SliceBounds> boundaries)
      : event_count_(event_count), boundaries_(std::move(boundaries)) {}

  std::size_t event_count_;
  std::vector<SliceBounds> boundaries_;
};

/// Count-based slicing. Throws InvalidArgument for T = 0 and for T > N when
/// the stream is non-empty.
SlicePlan slice_stream(const EventStream &stream, std::uint32_t num_slices);

/// Carries a plan over to the subsequence of events whose `kept` flag is
/// set. Each slice keeps exactly its surviving events, so the result
/// describes the same slice membership on the filtered stream.
SlicePlan remap_plan(const SlicePlan &plan, std::span<const std::uint8_t> kept);

/// Per-pixel, per-polarity event counts for every slice of `plan`.
FrameTensor integrate(const EventStream &stream, const SlicePlan &plan);

/// Multi-scale integration policy: a short-term variant at 1/n of the base
/// window (n * base slices), the base scale, and a long-term variant at m
/// times the window (ceil(base / m) slices).
struct MstiSpec {
  std::uint32_t base_slices = 10;
  std::uint32_t n = 2;
  std::uint32_t m = 2;

  void validate() const;
  std::uint32_t short_term_slices() const noexcept { return n * base_slices; }
  std::uint32_t long_term_slices() const noexcept {
    return (base_slices + m - 1) / m;
  }
};

struct MstiVariants {
  FrameTensor short_term;
  FrameTensor base;
  FrameTensor long_term;
};

MstiVariants msti_variants(const EventStream &stream, const MstiSpec &spec);

} // namespace eventaug
