#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "eventaug/event.hpp"
#include "eventaug/integrator.hpp"
#include "eventaug/spatial_mask.hpp"

namespace eventaug {

/// Which slices may lose events: all of them, or the ceil(q*T) densest.
struct DropScope {
  enum class Kind { AllSlices, TopFraction };
  Kind kind = Kind::AllSlices;
  double fraction = 1.0;

  static DropScope all_slices() { return {}; }
  static DropScope top_fraction(double q) { return {Kind::TopFraction, q}; }

  friend bool operator==(const DropScope &, const DropScope &) = default;
};

/// Per-slice drop probabilities. For an in-scope slice with density d,
/// rate = min(1, d / min_density * base_rate); out-of-scope slices get 0.
struct TemporalDropPlan {
  std::vector<std::uint64_t> densities;
  std::vector<std::uint8_t> in_scope;
  std::uint64_t min_density = 0;
  double base_rate = 0.0;
  std::vector<double> raw_rates; // before clamping to 1
  std::vector<double> rates;
};

/// Event count of every slice of `plan`, ranked densest first.
SaliencyRanking temporal_saliency(const EventStream &stream, const SlicePlan &plan);

/// Throws InvalidArgument when p is outside [0, 1], when a top-fraction q
/// is outside (0, 1], or when an in-scope slice is empty.
TemporalDropPlan build_drop_plan(const SaliencyRanking &ranking, double base_rate,
                                 DropScope scope = DropScope::all_slices());

/// Number of slices a top-fraction scope covers out of `slices`.
std::size_t scope_slice_count(std::size_t slices, DropScope scope);

/// Drops each event of slice i independently with probability rates[i].
/// Events outside every slice are kept. Slice i draws from an engine seeded
/// with derive_seed(seed, i), so output is fixed by (stream, plans, seed).
EventStream tsem_filter_events(const EventStream &stream, const SlicePlan &slice_plan,
                               const TemporalDropPlan &drop_plan, std::uint64_t seed);

} // namespace eventaug
