#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "eventaug/event.hpp"
#include "eventaug/spatial_mask.hpp"
#include "eventaug/temporal_mask.hpp"

namespace eventaug {

struct MstiOptions {
  bool enabled = false;
  std::uint32_t n = 2;
  std::uint32_t m = 2;
  friend bool operator==(const MstiOptions &, const MstiOptions &) = default;
};

struct SsemOptions {
  bool enabled = false;
  double r = 0.25;
  std::uint32_t patch_size = kDefaultPatchSize;
  bool per_frame = false;
  friend bool operator==(const SsemOptions &, const SsemOptions &) = default;
};

struct TsemOptions {
  bool enabled = false;
  double p = 0.1;
  DropScope scope;
  friend bool operator==(const TsemOptions &, const TsemOptions &) = default;
};

/// Every knob of an augmentation run.
struct AugConfig {
  std::uint32_t base_slices = 10;
  MstiOptions msti;
  SsemOptions ssem;
  TsemOptions tsem;
  std::uint64_t seed = 0;
  PolarityEncoding polarity = PolarityEncoding::NegOneOne;

  bool any_op_enabled() const noexcept {
    return msti.enabled || ssem.enabled || tsem.enabled;
  }
  /// Throws InvalidArgument on an out-of-range value.
  void validate() const;

  friend bool operator==(const AugConfig &, const AugConfig &) = default;
};

/// Parses `key = value` lines; '#' starts a comment. Keys:
///   base_T, seed, polarity_encoding (neg-one/one | zero/one),
///   msti.enabled, msti.n, msti.m,
///   ssem.enabled, ssem.r, ssem.patch_size, ssem.per_frame,
///   tsem.enabled, tsem.p, tsem.scope (all | top), tsem.q
/// Unknown keys and unparsable values raise FormatError with the line.
AugConfig parse_config(std::string_view text);
AugConfig load_config(const std::filesystem::path &path);

/// Canonical text form; parse_config(format_config(c)) == c.
std::string format_config(const AugConfig &config);

} // namespace eventaug
