#pragma once

// Serial versions of the kernels in kernels.hpp. Plain loops, no threading;
// the parallel kernels must match these bit for bit.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "eventaug/event.hpp"
#include "eventaug/integrator.hpp"
#include "eventaug/spatial_mask.hpp"

namespace eventaug::reference {

/// Adds one count per event of each slice. `counts` is T*2*H*W and zeroed.
void integrate_slices(std::span<const Event> events, std::span<const SliceBounds> slices,
                      std::uint32_t height, std::uint32_t width,
                      std::span<std::uint32_t> counts);

/// Overwrites `densities` (grid.count() entries) with per-patch event counts.
void patch_histogram(std::span<const Event> events, const PatchGrid &grid,
                     std::span<std::uint64_t> densities);

/// Zeroes, in every H*W plane of `counts`, the cells whose pixel flag is 0.
void zero_masked_cells(std::span<std::uint32_t> counts,
                       std::span<const std::uint8_t> pixel_keep);

/// keep[i] = 0 iff event i lies in a masked patch, else 1.
void patch_keep_flags(std::span<const Event> events, const PatchGrid &grid,
                      std::span<const std::uint8_t> patch_masked,
                      std::span<std::uint8_t> keep);

/// Clears keep[i] with probability rates[j] for each event i of slice j.
/// Slice j draws from an engine seeded with derive_seed(seed, j).
void bernoulli_drop(std::span<const SliceBounds> slices, std::span<const double> rates,
                    std::uint64_t seed, std::span<std::uint8_t> keep);

/// Events with a nonzero keep flag, in their original order.
std::vector<Event> compact(std::span<const Event> events,
                           std::span<const std::uint8_t> keep);

} // namespace eventaug::reference
