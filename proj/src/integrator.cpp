#include "eventaug/integrator.hpp"

#include <limits>
#include <string>

#include "eventaug/error.hpp"
#include "eventaug/kernels.hpp"

namespace eventaug {

SlicePlan SlicePlan::from_boundaries(std::size_t event_count,
                                     std::vector<SliceBounds> boundaries) {
  if (boundaries.empty())
    throw InvalidArgument("slice plan needs at least one slice");
  if (boundaries.size() > std::numeric_limits<std::uint32_t>::max())
    throw InvalidArgument("too many slices");
  std::size_t previous_end = 0;
  for (std::size_t j = 0; j < boundaries.size(); ++j) {
    const SliceBounds &b = boundaries[j];
    if (b.start > b.end || b.start < previous_end || b.end > event_count)
      throw InvalidArgument("slice " + std::to_string(j) +
                            " is out of order, overlapping, or beyond the stream");
    previous_end = b.end;
  }
  return SlicePlan(event_count, std::move(boundaries));
}

std::size_t SlicePlan::assigned_events() const noexcept {
  std::size_t n = 0;
  for (const SliceBounds &b : boundaries_)
    n += b.size();
  return n;
}

SlicePlan slice_stream(const EventStream &stream, std::uint32_t num_slices) {
  const std::size_t n = stream.size();
  if (num_slices == 0)
    throw InvalidArgument("slice count must be at least 1");
  if (n > 0 && num_slices > n)
    throw InvalidArgument("T exceeds event count (T=" + std::to_string(num_slices) +
                          ", N=" + std::to_string(n) + ")");
  // Trailing n % T events are left out of every slice.
  const std::size_t per_slice = n / num_slices;
  std::vector<SliceBounds> bounds(num_slices);
  for (std::size_t j = 0; j < num_slices; ++j)
    bounds[j] = {per_slice * j, per_slice * (j + 1)};
  return SlicePlan::from_boundaries(n, std::move(bounds));
}

SlicePlan remap_plan(const SlicePlan &plan, std::span<const std::uint8_t> kept) {
  if (kept.size() != plan.event_count())
    throw InvalidArgument("keep flags do not match the plan's event count");
  // survivors_before[i] = number of kept events with index < i
  std::vector<std::size_t> survivors_before(kept.size() + 1, 0);
  for (std::size_t i = 0; i < kept.size(); ++i)
    survivors_before[i + 1] = survivors_before[i] + (kept[i] ? 1 : 0);
  std::vector<SliceBounds> bounds;
  bounds.reserve(plan.num_slices());
  for (const SliceBounds &b : plan.boundaries())
    bounds.push_back({survivors_before[b.start], survivors_before[b.end]});
  return SlicePlan::from_boundaries(survivors_before.back(), std::move(bounds));
}

FrameTensor integrate(const EventStream &stream, const SlicePlan &plan) {
  if (plan.event_count() != stream.size())
    throw InvalidArgument("slice plan was built for " + std::to_string(plan.event_count()) +
                          " events, stream has " + std::to_string(stream.size()));
  auto cells = frame_element_count(plan.num_slices(), stream.height(), stream.width());
  if (!cells)
    throw InvalidArgument("frame tensor dimensions overflow");
  std::vector<std::uint32_t> counts(*cells, 0);
  kernels::integrate_slices(stream.events(), plan.boundaries(), stream.height(),
                            stream.width(), counts);
  return FrameTensor(plan.num_slices(), stream.height(), stream.width(), std::move(counts));
}

void MstiSpec::validate() const {
  if (base_slices == 0)
    throw InvalidArgument("base slice count must be at least 1");
  if (n == 0 || m == 0)
    throw InvalidArgument("n and m must be at least 1");
  if (base_slices < m)
    throw InvalidArgument("base slice count must be at least m");
  if (std::uint64_t{n} * base_slices > std::numeric_limits<std::uint32_t>::max())
    throw InvalidArgument("n * base slice count overflows");
}

MstiVariants msti_variants(const EventStream &stream, const MstiSpec &spec) {
  spec.validate();
  if (std::uint64_t{spec.short_term_slices()} > stream.size())
    throw InvalidArgument("n * T = " + std::to_string(spec.short_term_slices()) +
                          " exceeds event count " + std::to_string(stream.size()));
  return MstiVariants{
      integrate(stream, slice_stream(stream, spec.short_term_slices())),
      integrate(stream, slice_stream(stream, spec.base_slices)),
      integrate(stream, slice_stream(stream, spec.long_term_slices())),
  };
}

} // namespace eventaug
