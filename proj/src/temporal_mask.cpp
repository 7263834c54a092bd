#include "eventaug/temporal_mask.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "eventaug/error.hpp"
#include "eventaug/kernels.hpp"

namespace eventaug {

SaliencyRanking temporal_saliency(const EventStream &stream, const SlicePlan &plan) {
  if (plan.event_count() != stream.size())
    throw InvalidArgument("slice plan does not match the stream");
  std::vector<std::uint64_t> densities;
  densities.reserve(plan.num_slices());
  for (const SliceBounds &b : plan.boundaries())
    densities.push_back(b.size());
  return SaliencyRanking::from_densities(std::move(densities));
}

std::size_t scope_slice_count(std::size_t slices, DropScope scope) {
  if (scope.kind == DropScope::Kind::AllSlices)
    return slices;
  if (!(scope.fraction > 0.0 && scope.fraction <= 1.0))
    throw InvalidArgument("top fraction q must lie in (0, 1]");
  const double scaled = std::ceil(static_cast<double>(slices) * scope.fraction - 1e-9);
  return std::clamp(static_cast<std::size_t>(scaled), std::size_t{1}, slices);
}

TemporalDropPlan build_drop_plan(const SaliencyRanking &ranking, double base_rate,
                                 DropScope scope) {
  if (!(base_rate >= 0.0 && base_rate <= 1.0))
    throw InvalidArgument("base rate p must lie in [0, 1]");
  const std::size_t slices = ranking.densities.size();
  if (slices == 0 || ranking.order.size() != slices)
    throw InvalidArgument("ranking is empty or inconsistent");

  TemporalDropPlan plan;
  plan.densities = ranking.densities;
  plan.base_rate = base_rate;
  plan.in_scope.assign(slices, 0);
  const std::size_t scoped = scope_slice_count(slices, scope);
  for (std::size_t r = 0; r < scoped; ++r)
    plan.in_scope[ranking.order[r]] = 1;

  plan.min_density = std::numeric_limits<std::uint64_t>::max();
  for (std::size_t i = 0; i < slices; ++i)
    if (plan.in_scope[i])
      plan.min_density = std::min(plan.min_density, plan.densities[i]);
  if (plan.min_density == 0)
    throw InvalidArgument("min density is zero; drop plan undefined");

  plan.raw_rates.assign(slices, 0.0);
  plan.rates.assign(slices, 0.0);
  for (std::size_t i = 0; i < slices; ++i) {
    if (!plan.in_scope[i])
      continue;
    plan.raw_rates[i] = static_cast<double>(plan.densities[i]) /
                        static_cast<double>(plan.min_density) * base_rate;
    plan.rates[i] = std::min(1.0, plan.raw_rates[i]);
  }
  return plan;
}

EventStream tsem_filter_events(const EventStream &stream, const SlicePlan &slice_plan,
                               const TemporalDropPlan &drop_plan, std::uint64_t seed) {
  if (slice_plan.event_count() != stream.size())
    throw InvalidArgument("slice plan does not match the stream");
  if (drop_plan.rates.size() != slice_plan.num_slices())
    throw InvalidArgument("drop plan has " + std::to_string(drop_plan.rates.size()) +
                          " rates for " + std::to_string(slice_plan.num_slices()) +
                          " slices");
  std::vector<std::uint8_t> keep(stream.size(), 1);
  kernels::bernoulli_drop(slice_plan.boundaries(), drop_plan.rates, seed, keep);
  return EventStream(stream.width(), stream.height(),
                     kernels::compact(stream.events(), keep));
}

} // namespace eventaug
