#pragma once

#include <cstddef>
#include <cstdint>

#include "eventaug/event.hpp"

namespace eventaug {

/// Parameters of a generated recording: a blob drifting across the sensor
/// on top of uniform background noise.
struct SyntheticSpec {
  std::size_t events = 100000;
  std::uint16_t width = 128;
  std::uint16_t height = 128;
  std::uint64_t seed = 1;
  double blob_fraction = 0.7; // share of events emitted by the blob
  std::uint32_t blob_radius = 12;
  std::uint64_t mean_gap_us = 5; // mean spacing of timestamps
};

/// Deterministic in `spec`; timestamps are non-decreasing.
EventStream synthetic_stream(const SyntheticSpec &spec);

} // namespace eventaug
