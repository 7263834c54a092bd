#include <doctest.h>

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "eventaug/error.hpp"
#include "eventaug/integrator.hpp"
#include "eventaug/io.hpp"
#include "eventaug/pipeline.hpp"
#include "eventaug/seed.hpp"
#include "oracles.hpp"
#include "tempdir.hpp"

using namespace eventaug;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<json> manifest_lines(const fs::path &dir) {
  std::vector<json> out;
  std::istringstream in(slurp(dir / std::string(kManifestName)));
  for (std::string line; std::getline(in, line);)
    out.push_back(json::parse(line));
  return out;
}

void write_streams(const fs::path &root, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int i = 0; i < count; ++i) {
    const EventStream s = oracle::random_stream(rng, 400, 48, 48, 60);
    const std::string name = "s" + std::to_string(i) + (i % 2 ? ".evs" : ".txt");
    const fs::path dir = root / (i < count / 2 ? "a" : "b/c");
    fs::create_directories(dir);
    save_stream(dir / name, s);
  }
}

std::map<std::string, std::string> tree_contents(const fs::path &root) {
  std::map<std::string, std::string> out;
  for (const auto &e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file())
      out[fs::relative(e.path(), root).generic_string()] = slurp(e.path());
  return out;
}

} // namespace

TEST_CASE("seed derivation") {
  CHECK(mix64(0) == 0xe220a8397b1dcdafULL);
  CHECK(derive_seed(1, 2) == derive_seed(1, 2));
  CHECK(derive_seed(1, 2) != derive_seed(2, 1));
  CHECK(derive_seed(5, std::string_view("a/b.txt")) != derive_seed(5, std::string_view("a/b.evs")));
  CHECK(sample_seed(7, "x.txt") == derive_seed(7, std::string_view("x.txt")));
  Engine e(3);
  for (int i = 0; i < 1000; ++i) {
    const double u = uniform01(e);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("config parsing") {
  SUBCASE("defaults") {
    const AugConfig c = parse_config("");
    CHECK(c.base_slices == 10);
    CHECK(c.ssem.r == 0.25);
    CHECK(c.tsem.p == 0.1);
    CHECK(c.msti.n == 2); // "double and half scale"
    CHECK(c.msti.m == 2);
    CHECK(c.ssem.patch_size == 16);
    CHECK(c.tsem.scope.kind == DropScope::Kind::AllSlices);
    CHECK_FALSE(c.ssem.per_frame);
    CHECK_FALSE(c.any_op_enabled());
  }
  SUBCASE("all keys") {
    const AugConfig c = parse_config(R"(# comment
base_T = 12
seed = 99
polarity_encoding = zero/one
msti.enabled = true   # trailing comment
msti.n = 3
msti.m = 4
ssem.enabled = yes
ssem.r = 0.4
ssem.patch_size = 8
ssem.per_frame = 1
tsem.enabled = on
tsem.p = 0.05
tsem.scope = top
tsem.q = 0.3
)");
    CHECK(c.base_slices == 12);
    CHECK(c.seed == 99);
    CHECK(c.polarity == PolarityEncoding::ZeroOne);
    CHECK(c.msti == MstiOptions{true, 3, 4});
    CHECK(c.ssem.enabled);
    CHECK(c.ssem.r == 0.4);
    CHECK(c.ssem.patch_size == 8);
    CHECK(c.ssem.per_frame);
    CHECK(c.tsem.enabled);
    CHECK(c.tsem.p == 0.05);
    CHECK(c.tsem.scope.kind == DropScope::Kind::TopFraction);
    CHECK(c.tsem.scope.fraction == 0.3);
    CHECK(parse_config(format_config(c)) == c);
  }
  SUBCASE("errors carry the line") {
    auto line_of = [](const char *text) -> std::size_t {
      try {
        parse_config(text);
      } catch (const FormatError &e) {
        return e.line();
      }
      return 0;
    };
    CHECK(line_of("base_T = 3\nbogus = 1\n") == 2);
    CHECK(line_of("\n\nssem.r = lots\n") == 3);
    CHECK(line_of("msti.enabled\n") == 1);
    CHECK(line_of("tsem.scope = some\n") == 1);
    CHECK(line_of("base_T = -1\n") == 1);
    CHECK_THROWS_AS(parse_config("base_T = 0"), InvalidArgument);
    CHECK_THROWS_AS(parse_config("ssem.r = 1.5"), InvalidArgument);
    CHECK_THROWS_AS(parse_config("tsem.p = -0.5"), InvalidArgument);
    CHECK_THROWS_AS(parse_config("msti.n = 0"), InvalidArgument);
  }
}

TEST_CASE("format_config round trips (property)") {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> unit(0, 1);
  for (int iter = 0; iter < 200; ++iter) {
    AugConfig c;
    c.base_slices = 5 + rng() % 50;
    c.seed = rng();
    c.polarity = rng() & 1 ? PolarityEncoding::ZeroOne : PolarityEncoding::NegOneOne;
    c.msti = {bool(rng() & 1), static_cast<std::uint32_t>(1 + rng() % 5),
              static_cast<std::uint32_t>(1 + rng() % 5)};
    c.ssem = {bool(rng() & 1), unit(rng), static_cast<std::uint32_t>(1 + rng() % 32),
              bool(rng() & 1)};
    c.tsem.enabled = rng() & 1;
    c.tsem.p = unit(rng);
    c.tsem.scope = rng() & 1 ? DropScope::top_fraction(1.0 - unit(rng) * 0.99)
                             : DropScope::all_slices();
    CHECK(parse_config(format_config(c)) == c);
  }
}

TEST_CASE("compose") {
  std::mt19937_64 rng(52);
  const EventStream s = oracle::random_stream(rng, 100, 40, 30, 100);

  SUBCASE("MSTI only") {
    AugConfig c;
    c.msti.enabled = true;
    const auto r = compose(s, c, 1);
    CHECK_FALSE(r.stream);
    REQUIRE(r.frames.size() == 3);
    CHECK(r.frames[0].name == "short");
    CHECK(r.frames[0].frames.num_slices() == 20);
    CHECK(r.frames[1].frames.num_slices() == 10);
    CHECK(r.frames[2].frames.num_slices() == 5);
    CHECK(r.frames[1].frames == integrate(s, slice_stream(s, 10)));
    CHECK(r.ops == std::vector<std::string>{"msti"});
  }
  SUBCASE("SSEM at r = 0 leaves the stream unchanged") {
    AugConfig c;
    c.ssem = {true, 0.0, 8, false};
    const auto r = compose(s, c, 1);
    REQUIRE(r.stream);
    CHECK(*r.stream == s);
    CHECK(r.ops == std::vector<std::string>{"ssem", "integrate"});
    CHECK(r.frames.at(0).name == "frames");
  }
  SUBCASE("fixed op order and determinism") {
    AugConfig c;
    c.ssem = {true, 0.3, 8, true};
    c.tsem.enabled = true;
    c.tsem.p = 0.3;
    c.msti.enabled = true;
    c.msti.n = 1;
    c.msti.m = 1;
    c.base_slices = 4;
    const auto a = compose(s, c, 11);
    const auto b = compose(s, c, 11);
    CHECK(a.ops == std::vector<std::string>{"ssem-per-frame", "tsem", "msti"});
    REQUIRE(a.stream);
    CHECK(*a.stream == *b.stream);
    for (std::size_t i = 0; i < a.frames.size(); ++i)
      CHECK(a.frames[i].frames == b.frames[i].frames);
    CHECK(a.stream->size() < s.size());
  }
  SUBCASE("errors name the op") {
    AugConfig c;
    c.base_slices = 101;
    CHECK_THROWS_WITH_AS(compose(s, c, 1), doctest::Contains("integrate: "), Error);
    c.msti.enabled = true;
    c.base_slices = 60; // short-term needs 120 slices
    CHECK_THROWS_WITH_AS(compose(s, c, 1), doctest::Contains("msti: "), Error);
  }
}

TEST_CASE("walk_dataset") {
  AugConfig config;
  config.tsem.enabled = true;
  config.tsem.p = 0.2;
  config.base_slices = 5;

  SUBCASE("empty input directory") {
    TempDir in, out;
    const auto m = walk_dataset(in.path(), out.path(), config);
    CHECK(m.records.empty());
    const auto lines = manifest_lines(out.path());
    REQUIRE(lines.size() == 2);
    CHECK(lines[0]["kind"] == "config");
    CHECK(lines[1] == json{{"kind", "summary"}, {"inputs", 0}, {"processed", 0}, {"errored", 0}});
  }
  SUBCASE("a corrupt sample is recorded and the run continues") {
    TempDir in, out;
    write_streams(in.path(), 3, 53);
    spit(in / "broken.txt", "# 4 4\n1 0 0 1\n2 9 0 1\n");
    spit(in / "notes.md", "ignored");
    const auto m = walk_dataset(in.path(), out.path(), config);
    CHECK(m.processed() == 3);
    CHECK(m.errored() == 1);
    const auto lines = manifest_lines(out.path());
    REQUIRE(lines.size() == 6);
    CHECK(lines[1]["input"] == "a/s0.txt");
    CHECK(lines[2]["input"] == "b/c/s1.evs");
    CHECK(lines[3]["input"] == "b/c/s2.txt");
    CHECK(lines[4]["input"] == "broken.txt");
    CHECK(lines[4]["status"] == "error");
    CHECK(lines[4]["error"].get<std::string>().find("line 3") != std::string::npos);
    CHECK(lines[2]["outputs"] == json{"b/c/s1.aug.evs", "b/c/s1.frames.evf"});
    CHECK(lines[2]["ops"] == json{"tsem", "integrate"});
    CHECK(lines[2]["sub_seed"] == sample_seed(0, "b/c/s1.evs"));
    CHECK(lines[5]["errored"] == 1);
    CHECK(fs::exists(out / "b/c/s1.aug.evs"));
    CHECK_FALSE(fs::exists(out / "broken.frames.evf"));
    const EventStream after = load_stream(out / "b/c/s1.aug.evs");
    CHECK(after.size() == lines[2]["events_after"].get<std::size_t>());
  }
  SUBCASE("worker count does not change any output byte") {
    TempDir in, one, eight;
    write_streams(in.path(), 10, 54);
    config.ssem.enabled = true;
    config.msti.enabled = true;
    walk_dataset(in.path(), one.path(), config, {1, false});
    walk_dataset(in.path(), eight.path(), config, {8, false});
    const auto a = tree_contents(one.path());
    CHECK(a.size() == 1 + 10 * 4);
    CHECK(a == tree_contents(eight.path()));
  }
  SUBCASE("single-file input") {
    TempDir in, out;
    write_streams(in.path(), 2, 55);
    const auto m = walk_dataset(in / "b/c/s1.evs", out.path(), config);
    REQUIRE(m.records.size() == 1);
    CHECK(m.records[0].input == "s1.evs");
    CHECK(fs::exists(out / "s1.frames.evf"));
  }
  SUBCASE("hard errors") {
    TempDir in, out;
    write_streams(in.path(), 2, 56);
    save_stream(in / "a/s0.evs", EventStream(4, 4, {{1, 1, 1, 1}}));
    CHECK_THROWS_WITH_AS(walk_dataset(in.path(), out.path(), config),
                         doctest::Contains("output collision"), InvalidArgument);
    CHECK(fs::is_empty(out.path()));
    fs::remove(in / "a/s0.evs");
    CHECK_THROWS_AS(walk_dataset(in.path(), in / "nested", config), InvalidArgument);
    CHECK_THROWS_AS(walk_dataset(in.path(), out.path(), AugConfig{}), InvalidArgument);
    CHECK_THROWS_AS(walk_dataset(in / "missing", out.path(), config), InvalidArgument);
  }
}
