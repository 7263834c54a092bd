#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eventaug/config.hpp"
#include "eventaug/event.hpp"

namespace eventaug {

struct NamedTensor {
  std::string name; // "short", "base", "long", or "frames"
  FrameTensor frames;
};

struct ComposeResult {
  std::optional<EventStream> stream; // set when an event-level op ran
  std::vector<NamedTensor> frames;
  std::vector<std::string> ops;
};

/// Runs the enabled ops in the fixed order SSEM -> TSEM -> integration.
/// Integration emits the three MSTI variants when MSTI is enabled, else a
/// single tensor at base_T. Errors are rethrown as Error prefixed with the
/// failing op's name.
ComposeResult compose(const EventStream &stream, const AugConfig &config,
                      std::uint64_t sample_seed);

/// Seed of one dataset sample, from the master seed and the sample's path
/// relative to the dataset root ('/'-separated).
std::uint64_t sample_seed(std::uint64_t master_seed, std::string_view relative_path);

struct SampleRecord {
  std::string input;                // relative to the input root
  std::vector<std::string> outputs; // relative to the output root
  std::uint64_t sub_seed = 0;
  std::vector<std::string> ops;
  std::size_t events_before = 0;
  std::size_t events_after = 0;
  std::optional<std::string> error;
};

struct RunManifest {
  AugConfig config;
  bool seed_overridden = false;
  std::vector<SampleRecord> records; // sorted by input path

  std::size_t processed() const noexcept;
  std::size_t errored() const noexcept;
};

struct WalkOptions {
  unsigned workers = 1;
  bool seed_overridden = false; // recorded in the manifest only
};

inline constexpr std::string_view kManifestName = "manifest.jsonl";

/// Augments every .txt/.evs stream under `input` (a directory, or a single
/// file), mirroring the tree under `output`, and writes manifest.jsonl
/// there. A sample that fails to load or augment becomes an error record
/// and the run continues. Two inputs mapping to the same output path, an
/// output directory inside the input tree, or a config with no op enabled
/// are hard errors.
RunManifest walk_dataset(const std::filesystem::path &input,
                         const std::filesystem::path &output, const AugConfig &config,
                         const WalkOptions &options = {});

/// One JSON object per line: a config record, one record per sample, then
/// a summary record.
std::string format_manifest(const RunManifest &manifest);

} // namespace eventaug
