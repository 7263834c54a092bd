#include "eventaug/kernels.hpp"

#include <algorithm>

#include <omp.h>

#include "eventaug/seed.hpp"

namespace eventaug::kernels {

void integrate_slices(std::span<const Event> events, std::span<const SliceBounds> slices,
                      std::uint32_t height, std::uint32_t width,
                      std::span<std::uint32_t> counts) {
  const std::size_t plane = std::size_t{height} * width;
  const auto num_slices = static_cast<std::ptrdiff_t>(slices.size());
  // Each slice owns a disjoint block of `counts`.
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t j = 0; j < num_slices; ++j) {
    std::uint32_t *block = counts.data() + static_cast<std::size_t>(j) * 2 * plane;
    const SliceBounds b = slices[static_cast<std::size_t>(j)];
    for (std::size_t i = b.start; i < b.end; ++i) {
      const Event &e = events[i];
      ++block[polarity_channel(e.p) * plane + std::size_t{e.y} * width + e.x];
    }
  }
}

void patch_histogram(std::span<const Event> events, const PatchGrid &grid,
                     std::span<std::uint64_t> densities) {
  std::fill(densities.begin(), densities.end(), 0);
  const auto n = static_cast<std::ptrdiff_t>(events.size());
#pragma omp parallel
  {
    std::vector<std::uint64_t> local(densities.size(), 0);
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const Event &e = events[static_cast<std::size_t>(i)];
      ++local[grid.patch_of(e.x, e.y)];
    }
#pragma omp critical(eventaug_patch_histogram)
    for (std::size_t p = 0; p < local.size(); ++p)
      densities[p] += local[p];
  }
}

void zero_masked_cells(std::span<std::uint32_t> counts,
                       std::span<const std::uint8_t> pixel_keep) {
  const std::size_t plane = pixel_keep.size();
  if (plane == 0)
    return;
  const auto planes = static_cast<std::ptrdiff_t>(counts.size() / plane);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t q = 0; q < planes; ++q) {
    std::uint32_t *cells = counts.data() + static_cast<std::size_t>(q) * plane;
    for (std::size_t i = 0; i < plane; ++i)
      if (!pixel_keep[i])
        cells[i] = 0;
  }
}

void patch_keep_flags(std::span<const Event> events, const PatchGrid &grid,
                      std::span<const std::uint8_t> patch_masked,
                      std::span<std::uint8_t> keep) {
  const auto n = static_cast<std::ptrdiff_t>(events.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const Event &e = events[static_cast<std::size_t>(i)];
    keep[static_cast<std::size_t>(i)] = patch_masked[grid.patch_of(e.x, e.y)] ? 0 : 1;
  }
}

void bernoulli_drop(std::span<const SliceBounds> slices, std::span<const double> rates,
                    std::uint64_t seed, std::span<std::uint8_t> keep) {
  const auto num_slices = static_cast<std::ptrdiff_t>(slices.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t s = 0; s < num_slices; ++s) {
    const auto j = static_cast<std::size_t>(s);
    const double rate = rates[j];
    if (rate <= 0.0)
      continue;
    Engine engine(derive_seed(seed, static_cast<std::uint64_t>(j)));
    for (std::size_t i = slices[j].start; i < slices[j].end; ++i)
      if (uniform01(engine) < rate)
        keep[i] = 0;
  }
}

std::vector<Event> compact(std::span<const Event> events,
                           std::span<const std::uint8_t> keep) {
  std::vector<Event> out;
  std::vector<std::size_t> offsets(static_cast<std::size_t>(omp_get_max_threads()) + 1, 0);
#pragma omp parallel
  {
    const auto tid = static_cast<std::size_t>(omp_get_thread_num());
    const auto nt = static_cast<std::size_t>(omp_get_num_threads());
    const std::size_t lo = events.size() * tid / nt;
    const std::size_t hi = events.size() * (tid + 1) / nt;
    std::size_t kept = 0;
    for (std::size_t i = lo; i < hi; ++i)
      kept += keep[i] != 0;
    offsets[tid + 1] = kept;
#pragma omp barrier
#pragma omp single
    {
      for (std::size_t t = 1; t <= nt; ++t)
        offsets[t] += offsets[t - 1];
      out.resize(offsets[nt]);
    }
    std::size_t w = offsets[tid];
    for (std::size_t i = lo; i < hi; ++i)
      if (keep[i])
        out[w++] = events[i];
  }
  return out;
}

} // namespace eventaug::kernels
