#include "eventaug/reference.hpp"

#include <algorithm>

#include "eventaug/seed.hpp"

namespace eventaug::reference {

void integrate_slices(std::span<const Event> events, std::span<const SliceBounds> slices,
                      std::uint32_t height, std::uint32_t width,
                      std::span<std::uint32_t> counts) {
  const std::size_t plane = std::size_t{height} * width;
  for (std::size_t j = 0; j < slices.size(); ++j)
    for (std::size_t i = slices[j].start; i < slices[j].end; ++i) {
      const Event &e = events[i];
      const std::size_t c = static_cast<std::size_t>(polarity_channel(e.p));
      ++counts[(j * 2 + c) * plane + std::size_t{e.y} * width + e.x];
    }
}

void patch_histogram(std::span<const Event> events, const PatchGrid &grid,
                     std::span<std::uint64_t> densities) {
  std::fill(densities.begin(), densities.end(), 0);
  for (const Event &e : events)
    ++densities[grid.patch_of(e.x, e.y)];
}

void zero_masked_cells(std::span<std::uint32_t> counts,
                       std::span<const std::uint8_t> pixel_keep) {
  const std::size_t plane = pixel_keep.size();
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (!pixel_keep[i % plane])
      counts[i] = 0;
}

void patch_keep_flags(std::span<const Event> events, const PatchGrid &grid,
                      std::span<const std::uint8_t> patch_masked,
                      std::span<std::uint8_t> keep) {
  for (std::size_t i = 0; i < events.size(); ++i)
    keep[i] = patch_masked[grid.patch_of(events[i].x, events[i].y)] ? 0 : 1;
}

void bernoulli_drop(std::span<const SliceBounds> slices, std::span<const double> rates,
                    std::uint64_t seed, std::span<std::uint8_t> keep) {
  for (std::size_t j = 0; j < slices.size(); ++j) {
    if (rates[j] <= 0.0)
      continue;
    Engine engine(derive_seed(seed, static_cast<std::uint64_t>(j)));
    for (std::size_t i = slices[j].start; i < slices[j].end; ++i)
      if (uniform01(engine) < rates[j])
        keep[i] = 0;
  }
}

std::vector<Event> compact(std::span<const Event> events,
                           std::span<const std::uint8_t> keep) {
  std::vector<Event> out;
  for (std::size_t i = 0; i < events.size(); ++i)
    if (keep[i])
      out.push_back(events[i]);
  return out;
}

} // namespace eventaug::reference
