// eventaug command-line tool: augment, integrate, saliency, convert, bench.
//
// Exit codes: 0 success (per-sample failures in `augment` are recorded in
// the manifest and still exit 0), 1 usage error, 2 data error.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include "eventaug/config.hpp"
#include "eventaug/error.hpp"
#include "eventaug/integrator.hpp"
#include "eventaug/io.hpp"
#include "eventaug/pipeline.hpp"
#include "eventaug/spatial_mask.hpp"
#include "eventaug/synthetic.hpp"
#include "eventaug/temporal_mask.hpp"

namespace fs = std::filesystem;
using namespace eventaug;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

const std::map<std::string, PolarityEncoding> kEncodings = {
    {"neg-one/one", PolarityEncoding::NegOneOne}, {"zero/one", PolarityEncoding::ZeroOne}};

const std::map<std::string, StreamFormat> kFormats = {{"text", StreamFormat::Text},
                                                      {"binary", StreamFormat::Binary}};

struct AugmentArgs {
  std::string input, output, config;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
};

int run_augment(const AugmentArgs &args) {
  AugConfig config = load_config(args.config);
  WalkOptions options;
  options.workers = args.workers;
  if (args.seed) {
    config.seed = *args.seed;
    options.seed_overridden = true;
  }
  const RunManifest manifest = walk_dataset(args.input, args.output, config, options);
  std::cout << "processed " << manifest.processed() << ", errored " << manifest.errored()
            << ", manifest " << (fs::path(args.output) / kManifestName).string() << "\n";
  for (const auto &r : manifest.records)
    if (r.error)
      std::cerr << "error: " << r.input << ": " << *r.error << "\n";
  return 0;
}

struct IntegrateArgs {
  std::string input, output;
  std::uint32_t slices = 0;
  std::optional<double> ssem_r;
  std::uint32_t patch_size = kDefaultPatchSize;
  bool per_frame = false;
  std::string encoding = "neg-one/one";
};

int run_integrate(const IntegrateArgs &args) {
  const EventStream stream = load_stream(args.input, kEncodings.at(args.encoding));
  const SlicePlan plan = slice_stream(stream, args.slices);
  FrameTensor frames = integrate(stream, plan);
  if (args.ssem_r) {
    // Frame-level SSEM: Hadamard product with the patch mask.
    const auto grid = PatchGrid::for_stream(stream, args.patch_size);
    if (args.per_frame) {
      const auto masks = per_frame_ssem_masks(stream, plan, grid, *args.ssem_r);
      frames = apply_frame_masks(frames, masks);
    } else {
      frames = apply_frame_mask(frames,
                                ssem_mask(spatial_saliency(stream, grid), grid, *args.ssem_r));
    }
  }
  save_frame_tensor(args.output, frames);
  return 0;
}

struct SaliencyArgs {
  std::string input, mode, output = "-";
  std::uint32_t patch_size = kDefaultPatchSize;
  std::uint32_t slices = 1;
  std::string encoding = "neg-one/one";
};

int run_saliency(const SaliencyArgs &args) {
  const EventStream stream = load_stream(args.input, kEncodings.at(args.encoding));
  std::ostringstream out;
  if (args.mode == "spatial") {
    const auto grid = PatchGrid::for_stream(stream, args.patch_size);
    const auto ranking = spatial_saliency(stream, grid);
    const auto ranks = ranking.ranks();
    for (std::size_t i = 0; i < grid.count(); ++i)
      out << i << ' ' << grid.row_of(i) << ' ' << grid.col_of(i) << ' '
          << ranking.densities[i] << ' ' << ranks[i] << '\n';
  } else {
    const auto plan = slice_stream(stream, args.slices);
    const auto ranking = temporal_saliency(stream, plan);
    const auto ranks = ranking.ranks();
    for (std::size_t j = 0; j < plan.num_slices(); ++j)
      out << j << ' ' << plan[j].start << ' ' << plan[j].end << ' ' << ranking.densities[j]
          << ' ' << ranks[j] << '\n';
  }
  const std::string text = out.str();
  if (args.output == "-")
    std::cout << text;
  else
    write_file(args.output, Bytes(text.begin(), text.end()));
  return 0;
}

struct ConvertArgs {
  std::string input, output, from, to;
  std::string encoding = "neg-one/one";
};

StreamFormat resolve_format(const std::string &path, const std::string &flag,
                            const char *which) {
  if (!flag.empty())
    return kFormats.at(flag);
  if (path != "-")
    if (auto f = stream_format_for(path))
      return *f;
  throw CLI::ValidationError(std::string("--") + which,
                             "cannot infer the format of '" + path + "'; pass --" + which);
}

int run_convert(const ConvertArgs &args) {
  const StreamFormat from = resolve_format(args.input, args.from, "from");
  const StreamFormat to = resolve_format(args.output, args.to, "to");
  Bytes in;
  if (args.input == "-")
    in = Bytes(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  else
    in = read_file(args.input);
  const EventStream stream = decode_stream(in, from, kEncodings.at(args.encoding));
  const Bytes out = encode_stream(stream, to);
  if (args.output == "-")
    std::cout.write(reinterpret_cast<const char *>(out.data()),
                    static_cast<std::streamsize>(out.size()));
  else
    write_file(args.output, out);
  return 0;
}

struct BenchArgs {
  std::string input;
  std::string ops = "all";
  unsigned repeat = 3;
  std::size_t events = 1000000;
  std::uint32_t slices = 10;
  std::uint32_t patch_size = kDefaultPatchSize;
  double r = 0.25;
  double p = 0.1;
  std::uint64_t seed = 1;
};

const std::vector<std::string> kBenchOps = {"parse_binary",      "write_binary", "integrate",
                                            "msti",              "spatial_saliency",
                                            "ssem",              "temporal_saliency",
                                            "tsem"};

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int run_bench(const BenchArgs &args) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();

  std::vector<std::string> ops;
  if (args.ops == "all") {
    ops = kBenchOps;
  } else {
    std::stringstream list(args.ops);
    for (std::string op; std::getline(list, op, ',');) {
      if (std::find(kBenchOps.begin(), kBenchOps.end(), op) == kBenchOps.end())
        throw CLI::ValidationError("--ops", "unknown op '" + op + "'");
      ops.push_back(op);
    }
  }

  const EventStream stream =
      args.input.empty() ? synthetic_stream({.events = args.events, .seed = args.seed})
                         : load_stream(args.input);
  std::size_t peak_events = stream.size();
  auto track = [&](const EventStream &s) { peak_events = std::max(peak_events, s.size()); };

  const Bytes encoded = write_binary_stream(stream);
  const auto grid = PatchGrid::for_stream(stream, args.patch_size);

  nlohmann::json header = {{"kind", "bench"},
                           {"source", args.input.empty() ? "synthetic" : args.input},
                           {"events", stream.size()},
                           {"width", stream.width()},
                           {"height", stream.height()},
                           {"slices", args.slices},
                           {"repeat", args.repeat},
                           {"threads", omp_get_max_threads()}};
  std::cout << header.dump() << "\n";

  std::map<std::string, std::function<void()>> bodies = {
      {"parse_binary", [&] { track(parse_binary_stream(encoded)); }},
      {"write_binary", [&] { (void)write_binary_stream(stream); }},
      {"integrate", [&] { (void)integrate(stream, slice_stream(stream, args.slices)); }},
      {"msti", [&] { (void)msti_variants(stream, {args.slices, 2, 2}); }},
      {"spatial_saliency", [&] { (void)spatial_saliency(stream, grid); }},
      {"ssem",
       [&] {
         track(ssem_filter_events(stream,
                                  ssem_mask(spatial_saliency(stream, grid), grid, args.r)));
       }},
      {"temporal_saliency",
       [&] { (void)temporal_saliency(stream, slice_stream(stream, args.slices)); }},
      {"tsem",
       [&] {
         const auto plan = slice_stream(stream, args.slices);
         const auto drop = build_drop_plan(temporal_saliency(stream, plan), args.p);
         track(tsem_filter_events(stream, plan, drop, args.seed));
       }},
  };

  for (const auto &op : ops) {
    std::vector<double> runs;
    for (unsigned k = 0; k < args.repeat; ++k) {
      const auto t0 = clock::now();
      bodies.at(op)();
      runs.push_back(std::chrono::duration<double>(clock::now() - t0).count());
    }
    const double med = median(runs);
    nlohmann::json rec = {{"kind", "op"},
                          {"op", op},
                          {"events", stream.size()},
                          {"runs_s", runs},
                          {"median_s", med},
                          {"events_per_s", med > 0 ? static_cast<double>(stream.size()) / med
                                                   : 0.0}};
    std::cout << rec.dump() << "\n";
  }

  nlohmann::json summary = {
      {"kind", "summary"},
      {"ops", ops.size()},
      {"wall_s", std::chrono::duration<double>(clock::now() - start).count()},
      {"peak_stream_events", peak_events},
      {"peak_stream_bytes", peak_events * sizeof(Event)}};
  std::cout << summary.dump() << "\n";
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Event-camera data augmentation toolkit"};
  app.require_subcommand(1);

  AugmentArgs augment;
  auto *aug = app.add_subcommand("augment", "Augment every stream of a dataset directory");
  aug->add_option("--input", augment.input, "Input directory or stream file")->required();
  aug->add_option("--output", augment.output, "Output directory")->required();
  aug->add_option("--config", augment.config, "Config file (key = value)")->required();
  aug->add_option("--seed", augment.seed, "Master seed; overrides the config");
  aug->add_option("--workers", augment.workers, "Parallel samples")
      ->check(CLI::PositiveNumber);

  IntegrateArgs integ;
  auto *intg = app.add_subcommand("integrate", "Integrate a stream into a frame tensor");
  intg->add_option("--input", integ.input, "Stream file (.txt or .evs)")->required();
  intg->add_option("--output", integ.output, "Frame tensor file")->required();
  intg->add_option("--slices", integ.slices, "Number of slices T")
      ->required()
      ->check(CLI::PositiveNumber);
  intg->add_option("--ssem-r", integ.ssem_r, "Apply the spatial mask at rate r to the frames")
      ->check(CLI::Range(0.0, 1.0));
  intg->add_option("--patch-size", integ.patch_size, "Patch size for --ssem-r")
      ->check(CLI::PositiveNumber);
  intg->add_flag("--per-frame", integ.per_frame, "One spatial mask per slice");
  intg->add_option("--polarity-encoding", integ.encoding)
      ->check(CLI::IsMember({"neg-one/one", "zero/one"}));

  SaliencyArgs sal;
  auto *salc = app.add_subcommand("saliency", "Print the spatial or temporal saliency ranking");
  salc->add_option("--input", sal.input, "Stream file")->required();
  salc->add_option("--mode", sal.mode, "spatial | temporal")
      ->required()
      ->check(CLI::IsMember({"spatial", "temporal"}));
  salc->add_option("--patch-size", sal.patch_size)->check(CLI::PositiveNumber);
  salc->add_option("--slices", sal.slices)->check(CLI::PositiveNumber);
  salc->add_option("--output", sal.output, "Report file, '-' for stdout");
  salc->add_option("--polarity-encoding", sal.encoding)
      ->check(CLI::IsMember({"neg-one/one", "zero/one"}));

  ConvertArgs conv;
  auto *convc = app.add_subcommand("convert", "Convert between text and binary streams");
  convc->add_option("--input", conv.input, "Input path, '-' for stdin")->required();
  convc->add_option("--output", conv.output, "Output path, '-' for stdout")->required();
  convc->add_option("--from", conv.from)->check(CLI::IsMember({"text", "binary"}));
  convc->add_option("--to", conv.to)->check(CLI::IsMember({"text", "binary"}));
  convc->add_option("--polarity-encoding", conv.encoding)
      ->check(CLI::IsMember({"neg-one/one", "zero/one"}));

  BenchArgs bench;
  auto *benc = app.add_subcommand("bench", "Time each op and print JSON-lines throughput");
  benc->add_option("--input", bench.input, "Stream file; omitted = synthetic stream");
  benc->add_option("--ops", bench.ops, "'all' or a comma-separated list");
  benc->add_option("--repeat", bench.repeat)->check(CLI::PositiveNumber);
  benc->add_option("--events", bench.events, "Synthetic stream size")
      ->check(CLI::PositiveNumber);
  benc->add_option("--slices", bench.slices)->check(CLI::PositiveNumber);
  benc->add_option("--patch-size", bench.patch_size)->check(CLI::PositiveNumber);
  benc->add_option("--r", bench.r)->check(CLI::Range(0.0, 1.0));
  benc->add_option("--p", bench.p)->check(CLI::Range(0.0, 1.0));
  benc->add_option("--seed", bench.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*aug)
      return run_augment(augment);
    if (*intg)
      return run_integrate(integ);
    if (*salc)
      return run_saliency(sal);
    if (*convc)
      return run_convert(conv);
    return run_bench(bench);
  } catch (const CLI::Error &e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}
