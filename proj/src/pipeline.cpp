#include "eventaug/pipeline.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <json.hpp>

#include "eventaug/error.hpp"
#include "eventaug/integrator.hpp"
#include "eventaug/io.hpp"
#include "eventaug/seed.hpp"
#include "eventaug/spatial_mask.hpp"
#include "eventaug/temporal_mask.hpp"

namespace fs = std::filesystem;

namespace eventaug {

namespace {

constexpr std::uint64_t kTsemSeedKey = 0x7473656d; // "tsem"

template <typename Fn> auto annotated(const char *op, Fn &&fn) {
  try {
    return fn();
  } catch (const Error &e) {
    throw Error(std::string(op) + ": " + e.what());
  }
}

} // namespace

ComposeResult compose(const EventStream &input, const AugConfig &config,
                      std::uint64_t seed) {
  annotated("config", [&] { config.validate(); return 0; });
  ComposeResult result;
  EventStream stream = input;
  bool event_level = false;

  if (config.ssem.enabled) {
    stream = annotated("ssem", [&] {
      const auto grid = PatchGrid::for_stream(stream, config.ssem.patch_size);
      if (config.ssem.per_frame) {
        const auto plan = slice_stream(stream, config.base_slices);
        const auto masks = per_frame_ssem_masks(stream, plan, grid, config.ssem.r);
        return ssem_filter_events_per_frame(stream, plan, masks);
      }
      const auto mask = ssem_mask(spatial_saliency(stream, grid), grid, config.ssem.r);
      return ssem_filter_events(stream, mask);
    });
    result.ops.push_back(config.ssem.per_frame ? "ssem-per-frame" : "ssem");
    event_level = true;
  }

  if (config.tsem.enabled) {
    stream = annotated("tsem", [&] {
      const auto plan = slice_stream(stream, config.base_slices);
      const auto drop =
          build_drop_plan(temporal_saliency(stream, plan), config.tsem.p, config.tsem.scope);
      return tsem_filter_events(stream, plan, drop, derive_seed(seed, kTsemSeedKey));
    });
    result.ops.push_back("tsem");
    event_level = true;
  }

  if (config.msti.enabled) {
    auto variants = annotated("msti", [&] {
      return msti_variants(stream, {config.base_slices, config.msti.n, config.msti.m});
    });
    result.frames.push_back({"short", std::move(variants.short_term)});
    result.frames.push_back({"base", std::move(variants.base)});
    result.frames.push_back({"long", std::move(variants.long_term)});
    result.ops.push_back("msti");
  } else {
    auto frames = annotated(
        "integrate", [&] { return integrate(stream, slice_stream(stream, config.base_slices)); });
    result.frames.push_back({"frames", std::move(frames)});
    result.ops.push_back("integrate");
  }

  if (event_level)
    result.stream = std::move(stream);
  return result;
}

std::uint64_t sample_seed(std::uint64_t master_seed, std::string_view relative_path) {
  return derive_seed(master_seed, relative_path);
}

std::size_t RunManifest::processed() const noexcept {
  return static_cast<std::size_t>(std::count_if(
      records.begin(), records.end(), [](const SampleRecord &r) { return !r.error; }));
}

std::size_t RunManifest::errored() const noexcept { return records.size() - processed(); }

namespace {

struct SamplePlan {
  fs::path source;
  std::string relative;          // generic form
  fs::path stem;                 // relative parent / stem, without extension
  std::string stream_extension;  // ".txt" or ".evs"
};

std::vector<SamplePlan> enumerate_samples(const fs::path &input) {
  std::vector<SamplePlan> samples;
  auto add = [&](const fs::path &file, const fs::path &rel) {
    if (!stream_format_for(file))
      return;
    samples.push_back({file, rel.generic_string(), rel.parent_path() / rel.stem(),
                       rel.extension().string()});
  };
  if (fs::is_regular_file(input)) {
    add(input, input.filename());
  } else if (fs::is_directory(input)) {
    for (const auto &entry : fs::recursive_directory_iterator(input))
      if (entry.is_regular_file())
        add(entry.path(), fs::relative(entry.path(), input));
  } else {
    throw InvalidArgument("input " + input.string() + " is neither a file nor a directory");
  }
  std::sort(samples.begin(), samples.end(),
            [](const SamplePlan &a, const SamplePlan &b) { return a.relative < b.relative; });
  return samples;
}

std::vector<std::string> frame_names(const AugConfig &config) {
  if (config.msti.enabled)
    return {"short", "base", "long"};
  return {"frames"};
}

std::string with_suffix(const fs::path &stem, const std::string &suffix) {
  return (stem.string() + suffix);
}

bool is_within(const fs::path &inner, const fs::path &outer) {
  const auto a = fs::weakly_canonical(inner);
  const auto b = fs::weakly_canonical(outer);
  auto [end_b, end_a] = std::mismatch(b.begin(), b.end(), a.begin(), a.end());
  return end_b == b.end();
}

SampleRecord process_sample(const SamplePlan &sample, const fs::path &output,
                            const AugConfig &config) {
  SampleRecord record;
  record.input = sample.relative;
  record.sub_seed = sample_seed(config.seed, sample.relative);
  try {
    const EventStream stream = load_stream(sample.source, config.polarity);
    record.events_before = stream.size();
    ComposeResult result = compose(stream, config, record.sub_seed);
    record.ops = result.ops;
    record.events_after = result.stream ? result.stream->size() : stream.size();
    if (result.stream) {
      const auto rel = with_suffix(sample.stem, ".aug" + sample.stream_extension);
      save_stream(output / rel, *result.stream);
      record.outputs.push_back(fs::path(rel).generic_string());
    }
    for (const NamedTensor &t : result.frames) {
      const auto rel = with_suffix(sample.stem, "." + t.name + ".evf");
      save_frame_tensor(output / rel, t.frames);
      record.outputs.push_back(fs::path(rel).generic_string());
    }
  } catch (const std::exception &e) {
    record.outputs.clear();
    record.ops.clear();
    record.events_after = 0;
    record.error = e.what();
  }
  return record;
}

} // namespace

RunManifest walk_dataset(const fs::path &input, const fs::path &output,
                         const AugConfig &config, const WalkOptions &options) {
  config.validate();
  if (!config.any_op_enabled())
    throw InvalidArgument("no augmentation op is enabled");
  if (fs::is_directory(input) && is_within(output, input))
    throw InvalidArgument("output directory must not lie inside the input directory");

  const auto samples = enumerate_samples(input);

  // Every output path must be unique before anything is written.
  std::map<std::string, std::string> claimed;
  std::set<fs::path> directories{output};
  for (const SamplePlan &s : samples) {
    std::vector<std::string> targets;
    for (const auto &name : frame_names(config))
      targets.push_back(fs::path(with_suffix(s.stem, "." + name + ".evf")).generic_string());
    if (config.ssem.enabled || config.tsem.enabled)
      targets.push_back(
          fs::path(with_suffix(s.stem, ".aug" + s.stream_extension)).generic_string());
    for (const auto &t : targets) {
      auto [it, fresh] = claimed.emplace(t, s.relative);
      if (!fresh)
        throw InvalidArgument("output collision: " + it->second + " and " + s.relative +
                              " both produce " + t);
    }
    directories.insert(output / s.stem.parent_path());
  }
  for (const auto &dir : directories)
    fs::create_directories(dir);

  RunManifest manifest;
  manifest.config = config;
  manifest.seed_overridden = options.seed_overridden;
  manifest.records.resize(samples.size());

  const auto count = static_cast<std::ptrdiff_t>(samples.size());
  const int workers = static_cast<int>(std::max(1u, options.workers));
  // Each iteration fills only its own record slot.
#pragma omp parallel for num_threads(workers) schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i)
    manifest.records[static_cast<std::size_t>(i)] =
        process_sample(samples[static_cast<std::size_t>(i)], output, config);

  write_file(output / kManifestName, [&] {
    const std::string text = format_manifest(manifest);
    return Bytes(text.begin(), text.end());
  }());
  return manifest;
}

std::string format_manifest(const RunManifest &manifest) {
  using nlohmann::json;
  const AugConfig &c = manifest.config;
  json config = {
      {"base_T", c.base_slices},
      {"seed", c.seed},
      {"polarity_encoding",
       c.polarity == PolarityEncoding::ZeroOne ? "zero/one" : "neg-one/one"},
      {"msti", {{"enabled", c.msti.enabled}, {"n", c.msti.n}, {"m", c.msti.m}}},
      {"ssem",
       {{"enabled", c.ssem.enabled},
        {"r", c.ssem.r},
        {"patch_size", c.ssem.patch_size},
        {"per_frame", c.ssem.per_frame}}},
      {"tsem",
       {{"enabled", c.tsem.enabled},
        {"p", c.tsem.p},
        {"scope", c.tsem.scope.kind == DropScope::Kind::TopFraction ? "top" : "all"},
        {"q", c.tsem.scope.fraction}}},
  };
  std::string out =
      json{{"kind", "config"}, {"config", config}, {"seed_overridden", manifest.seed_overridden}}
          .dump() +
      "\n";
  for (const SampleRecord &r : manifest.records) {
    json rec = {{"kind", "sample"},
                {"input", r.input},
                {"outputs", r.outputs},
                {"sub_seed", r.sub_seed},
                {"ops", r.ops},
                {"events_before", r.events_before},
                {"events_after", r.events_after},
                {"status", r.error ? "error" : "ok"},
                {"error", r.error ? json(*r.error) : json(nullptr)}};
    out += rec.dump() + "\n";
  }
  out += json{{"kind", "summary"},
              {"inputs", manifest.records.size()},
              {"processed", manifest.processed()},
              {"errored", manifest.errored()}}
             .dump() +
         "\n";
  return out;
}

} // namespace eventaug
