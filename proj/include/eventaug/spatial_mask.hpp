#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "eventaug/event.hpp"
#include "eventaug/integrator.hpp"

namespace eventaug {

inline constexpr std::uint32_t kDefaultPatchSize = 16;

/// Square patch tiling of the sensor. Patches on the right and bottom edges
/// are smaller when the geometry is not a multiple of the patch size.
/// Patch indices are row-major.
class PatchGrid {
public:
  PatchGrid(std::uint32_t width, std::uint32_t height,
            std::uint32_t patch_size = kDefaultPatchSize);

  static PatchGrid for_stream(const EventStream &stream,
                              std::uint32_t patch_size = kDefaultPatchSize) {
    return PatchGrid(stream.width(), stream.height(), patch_size);
  }

  std::uint32_t width() const noexcept { return width_; }
  std::uint32_t height() const noexcept { return height_; }
  std::uint32_t patch_size() const noexcept { return patch_size_; }
  std::uint32_t cols() const noexcept { return cols_; }
  std::uint32_t rows() const noexcept { return rows_; }
  std::size_t count() const noexcept { return std::size_t{rows_} * cols_; }

  std::size_t patch_of(std::uint32_t x, std::uint32_t y) const noexcept {
    return std::size_t{y / patch_size_} * cols_ + x / patch_size_;
  }
  std::uint32_t row_of(std::size_t patch) const noexcept {
    return static_cast<std::uint32_t>(patch / cols_);
  }
  std::uint32_t col_of(std::size_t patch) const noexcept {
    return static_cast<std::uint32_t>(patch % cols_);
  }

  friend bool operator==(const PatchGrid &, const PatchGrid &) = default;

private:
  std::uint32_t width_;
  std::uint32_t height_;
  std::uint32_t patch_size_;
  std::uint32_t cols_;
  std::uint32_t rows_;
};

/// Event counts per unit (patch or slice) and the units ordered by count,
/// densest first. Equal counts keep ascending unit order.
struct SaliencyRanking {
  std::vector<std::uint64_t> densities;
  std::vector<std::size_t> order;

  static SaliencyRanking from_densities(std::vector<std::uint64_t> densities);

  /// rank_of()[unit] is the unit's position in `order`.
  std::vector<std::size_t> ranks() const;
  std::uint64_t total() const noexcept;
};

/// Patch-level mask. A patch is masked iff its density is strictly greater
/// than the threshold; an absent threshold masks nothing.
class SpatialMask {
public:
  SpatialMask(PatchGrid grid, std::vector<std::uint8_t> masked,
              std::optional<std::uint64_t> epsilon);

  const PatchGrid &grid() const noexcept { return grid_; }
  std::optional<std::uint64_t> epsilon() const noexcept { return epsilon_; }
  std::span<const std::uint8_t> masked() const noexcept { return masked_; }
  bool is_masked_patch(std::size_t patch) const noexcept { return masked_[patch] != 0; }
  bool is_masked_pixel(std::uint32_t x, std::uint32_t y) const noexcept {
    return masked_[grid_.patch_of(x, y)] != 0;
  }
  std::size_t masked_count() const noexcept;

  /// Multiplicative pixel mask, H*W row-major: 0 on masked patches, else 1.
  std::vector<std::uint8_t> pixel_view() const;

  friend bool operator==(const SpatialMask &, const SpatialMask &) = default;

private:
  PatchGrid grid_;
  std::vector<std::uint8_t> masked_;
  std::optional<std::uint64_t> epsilon_;
};

/// Per-patch event counts over all of `events`.
SaliencyRanking spatial_saliency(std::span<const Event> events, const PatchGrid &grid);
inline SaliencyRanking spatial_saliency(const EventStream &stream, const PatchGrid &grid) {
  return spatial_saliency(stream.events(), grid);
}

/// Threshold at the density of the floor(k*r)-th most salient patch, then
/// mask every patch strictly denser than it. floor(k*r) = 0 masks nothing.
SpatialMask ssem_mask(const SaliencyRanking &ranking, const PatchGrid &grid, double rate);

/// Number of patches ranked above the threshold for k patches at rate r.
std::size_t ssem_threshold_rank(std::size_t patches, double rate);

/// Zeroes every cell of a masked patch, in every slice and channel.
FrameTensor apply_frame_mask(const FrameTensor &frames, const SpatialMask &mask);

/// Drops every event that falls in a masked patch; order is preserved.
EventStream ssem_filter_events(const EventStream &stream, const SpatialMask &mask);

/// Keep flags (1 = survives) for `ssem_filter_events`.
std::vector<std::uint8_t> ssem_keep_flags(const EventStream &stream, const SpatialMask &mask);

// Per-frame variant: one ranking and mask per slice of a plan.

std::vector<SpatialMask> per_frame_ssem_masks(const EventStream &stream,
                                              const SlicePlan &plan,
                                              const PatchGrid &grid, double rate);

/// masks[j] is applied to slice j.
FrameTensor apply_frame_masks(const FrameTensor &frames, std::span<const SpatialMask> masks);

/// Events of slice j are filtered by masks[j]; events outside every slice
/// are kept.
EventStream ssem_filter_events_per_frame(const EventStream &stream, const SlicePlan &plan,
                                         std::span<const SpatialMask> masks);

} // namespace eventaug
