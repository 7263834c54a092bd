#include "eventaug/spatial_mask.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "eventaug/error.hpp"
#include "eventaug/kernels.hpp"

namespace eventaug {

PatchGrid::PatchGrid(std::uint32_t width, std::uint32_t height, std::uint32_t patch_size)
    : width_(width), height_(height), patch_size_(patch_size) {
  if (patch_size == 0)
    throw InvalidArgument("patch size must be at least 1");
  if (width == 0 || height == 0)
    throw InvalidArgument("patch grid geometry must be at least 1x1");
  cols_ = (width + patch_size - 1) / patch_size;
  rows_ = (height + patch_size - 1) / patch_size;
}

SaliencyRanking SaliencyRanking::from_densities(std::vector<std::uint64_t> densities) {
  std::vector<std::size_t> order(densities.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return densities[a] > densities[b];
  });
  return SaliencyRanking{std::move(densities), std::move(order)};
}

std::vector<std::size_t> SaliencyRanking::ranks() const {
  std::vector<std::size_t> rank(order.size());
  for (std::size_t r = 0; r < order.size(); ++r)
    rank[order[r]] = r;
  return rank;
}

std::uint64_t SaliencyRanking::total() const noexcept {
  return std::accumulate(densities.begin(), densities.end(), std::uint64_t{0});
}

SpatialMask::SpatialMask(PatchGrid grid, std::vector<std::uint8_t> masked,
                         std::optional<std::uint64_t> epsilon)
    : grid_(grid), masked_(std::move(masked)), epsilon_(epsilon) {
  if (masked_.size() != grid_.count())
    throw InvalidArgument("mask has " + std::to_string(masked_.size()) +
                          " entries for a grid of " + std::to_string(grid_.count()) +
                          " patches");
}

std::size_t SpatialMask::masked_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(masked_.begin(), masked_.end(),
                                                [](std::uint8_t m) { return m != 0; }));
}

std::vector<std::uint8_t> SpatialMask::pixel_view() const {
  std::vector<std::uint8_t> view(std::size_t{grid_.width()} * grid_.height());
  for (std::uint32_t y = 0; y < grid_.height(); ++y)
    for (std::uint32_t x = 0; x < grid_.width(); ++x)
      view[std::size_t{y} * grid_.width() + x] = is_masked_pixel(x, y) ? 0 : 1;
  return view;
}

SaliencyRanking spatial_saliency(std::span<const Event> events, const PatchGrid &grid) {
  std::vector<std::uint64_t> densities(grid.count());
  kernels::patch_histogram(events, grid, densities);
  return SaliencyRanking::from_densities(std::move(densities));
}

std::size_t ssem_threshold_rank(std::size_t patches, double rate) {
  if (!(rate >= 0.0 && rate <= 1.0))
    throw InvalidArgument("mask rate r must lie in [0, 1]");
  // Slack absorbs representation error, e.g. 0.29 * 100 = 28.999999999999996.
  const double scaled = std::floor(static_cast<double>(patches) * rate + 1e-9);
  return std::min(patches, static_cast<std::size_t>(scaled));
}

SpatialMask ssem_mask(const SaliencyRanking &ranking, const PatchGrid &grid, double rate) {
  const std::size_t k = ranking.densities.size();
  if (k != grid.count() || ranking.order.size() != k)
    throw InvalidArgument("ranking does not match the patch grid");
  const std::size_t rank = ssem_threshold_rank(k, rate);
  std::vector<std::uint8_t> masked(k, 0);
  if (rank == 0)
    return SpatialMask(grid, std::move(masked), std::nullopt);
  const std::uint64_t epsilon = ranking.densities[ranking.order[rank - 1]];
  for (std::size_t i = 0; i < k; ++i)
    masked[i] = ranking.densities[i] > epsilon ? 1 : 0;
  return SpatialMask(grid, std::move(masked), epsilon);
}

namespace {

void check_geometry(const PatchGrid &grid, std::uint32_t width, std::uint32_t height) {
  if (grid.width() != width || grid.height() != height)
    throw InvalidArgument("mask geometry " + std::to_string(grid.width()) + "x" +
                          std::to_string(grid.height()) + " does not match " +
                          std::to_string(width) + "x" + std::to_string(height));
}

} // namespace

FrameTensor apply_frame_mask(const FrameTensor &frames, const SpatialMask &mask) {
  check_geometry(mask.grid(), frames.width(), frames.height());
  std::vector<std::uint32_t> counts(frames.counts().begin(), frames.counts().end());
  kernels::zero_masked_cells(counts, mask.pixel_view());
  return FrameTensor(frames.num_slices(), frames.height(), frames.width(), std::move(counts));
}

std::vector<std::uint8_t> ssem_keep_flags(const EventStream &stream, const SpatialMask &mask) {
  check_geometry(mask.grid(), stream.width(), stream.height());
  std::vector<std::uint8_t> keep(stream.size());
  kernels::patch_keep_flags(stream.events(), mask.grid(), mask.masked(), keep);
  return keep;
}

EventStream ssem_filter_events(const EventStream &stream, const SpatialMask &mask) {
  auto keep = ssem_keep_flags(stream, mask);
  return EventStream(stream.width(), stream.height(),
                     kernels::compact(stream.events(), keep));
}

std::vector<SpatialMask> per_frame_ssem_masks(const EventStream &stream,
                                              const SlicePlan &plan,
                                              const PatchGrid &grid, double rate) {
  check_geometry(grid, stream.width(), stream.height());
  if (plan.event_count() != stream.size())
    throw InvalidArgument("slice plan does not match the stream");
  std::vector<SpatialMask> masks;
  masks.reserve(plan.num_slices());
  for (const SliceBounds &b : plan.boundaries())
    masks.push_back(
        ssem_mask(spatial_saliency(stream.events().subspan(b.start, b.size()), grid), grid,
                  rate));
  return masks;
}

FrameTensor apply_frame_masks(const FrameTensor &frames, std::span<const SpatialMask> masks) {
  if (masks.size() != frames.num_slices())
    throw InvalidArgument("need one mask per slice");
  std::vector<std::uint32_t> counts(frames.counts().begin(), frames.counts().end());
  for (std::size_t j = 0; j < masks.size(); ++j) {
    check_geometry(masks[j].grid(), frames.width(), frames.height());
    kernels::zero_masked_cells(
        std::span<std::uint32_t>(counts).subspan(j * frames.slice_stride(),
                                                 frames.slice_stride()),
        masks[j].pixel_view());
  }
  return FrameTensor(frames.num_slices(), frames.height(), frames.width(), std::move(counts));
}

EventStream ssem_filter_events_per_frame(const EventStream &stream, const SlicePlan &plan,
                                         std::span<const SpatialMask> masks) {
  if (plan.event_count() != stream.size())
    throw InvalidArgument("slice plan does not match the stream");
  if (masks.size() != plan.num_slices())
    throw InvalidArgument("need one mask per slice");
  std::vector<std::uint8_t> keep(stream.size(), 1);
  for (std::size_t j = 0; j < masks.size(); ++j) {
    check_geometry(masks[j].grid(), stream.width(), stream.height());
    const SliceBounds &b = plan[j];
    kernels::patch_keep_flags(stream.events().subspan(b.start, b.size()), masks[j].grid(),
                              masks[j].masked(),
                              std::span<std::uint8_t>(keep).subspan(b.start, b.size()));
  }
  return EventStream(stream.width(), stream.height(),
                     kernels::compact(stream.events(), keep));
}

} // namespace eventaug
