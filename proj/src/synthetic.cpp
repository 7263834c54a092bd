#include "eventaug/synthetic.hpp"

#include <algorithm>
#include <vector>

#include "eventaug/seed.hpp"

namespace eventaug {

EventStream synthetic_stream(const SyntheticSpec &spec) {
  Engine engine(spec.seed);
  std::vector<Event> events;
  events.reserve(spec.events);
  const double span_x = spec.width > 1 ? spec.width - 1 : 0;
  const double span_y = spec.height > 1 ? spec.height - 1 : 0;
  const auto radius = static_cast<std::int64_t>(spec.blob_radius);
  std::uint64_t t = 0;
  for (std::size_t i = 0; i < spec.events; ++i) {
    t += engine() % (2 * spec.mean_gap_us + 1);
    std::int64_t x = 0;
    std::int64_t y = 0;
    if (uniform01(engine) < spec.blob_fraction) {
      // Blob centre moves along the diagonal over the recording.
      const double progress =
          spec.events > 1 ? static_cast<double>(i) / static_cast<double>(spec.events - 1) : 0.0;
      const auto cx = static_cast<std::int64_t>(progress * span_x);
      const auto cy = static_cast<std::int64_t>(progress * span_y);
      x = cx + static_cast<std::int64_t>(engine() % (2 * radius + 1)) - radius;
      y = cy + static_cast<std::int64_t>(engine() % (2 * radius + 1)) - radius;
      x = std::clamp<std::int64_t>(x, 0, spec.width - 1);
      y = std::clamp<std::int64_t>(y, 0, spec.height - 1);
    } else {
      x = static_cast<std::int64_t>(engine() % spec.width);
      y = static_cast<std::int64_t>(engine() % spec.height);
    }
    const std::int8_t p = (engine() & 1) ? 1 : -1;
    events.push_back(Event{t, static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y), p});
  }
  return EventStream(spec.width, spec.height, std::move(events));
}

} // namespace eventaug
