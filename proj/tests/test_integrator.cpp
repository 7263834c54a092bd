#include <doctest.h>

#include <random>
#include <vector>

#include "eventaug/error.hpp"
#include "eventaug/integrator.hpp"
#include "oracles.hpp"

using namespace eventaug;

namespace {

EventStream stream_of(std::size_t n, std::uint16_t w = 4, std::uint16_t h = 4) {
  std::vector<Event> ev;
  for (std::size_t i = 0; i < n; ++i)
    ev.push_back({i, static_cast<std::uint16_t>(i % w), static_cast<std::uint16_t>((i / w) % h),
                  static_cast<std::int8_t>(i % 3 ? 1 : -1)});
  return EventStream(w, h, std::move(ev));
}

} // namespace

TEST_CASE("slice_stream boundaries") {
  CHECK(slice_stream(stream_of(10), 2).boundaries()[1] == SliceBounds{5, 10});
  {
    auto plan = slice_stream(stream_of(10), 3);
    REQUIRE(plan.num_slices() == 3);
    CHECK(plan[0] == SliceBounds{0, 3});
    CHECK(plan[1] == SliceBounds{3, 6});
    CHECK(plan[2] == SliceBounds{6, 9});
    CHECK(plan.assigned_events() == 9);
  }
  {
    auto plan = slice_stream(stream_of(0), 1);
    REQUIRE(plan.num_slices() == 1);
    CHECK(plan[0] == SliceBounds{0, 0});
  }
  CHECK_THROWS_AS(slice_stream(stream_of(10), 0), InvalidArgument);
  CHECK_THROWS_WITH_AS(slice_stream(stream_of(3), 4), doctest::Contains("T exceeds event count"),
                       InvalidArgument);
  CHECK(slice_stream(stream_of(4), 4).boundaries().back() == SliceBounds{3, 4});
}

TEST_CASE("SlicePlan::from_boundaries rejects malformed plans") {
  CHECK_NOTHROW(SlicePlan::from_boundaries(10, {{0, 2}, {2, 9}}));
  CHECK_NOTHROW(SlicePlan::from_boundaries(10, {{1, 2}, {4, 4}}));
  CHECK_THROWS_AS(SlicePlan::from_boundaries(10, {}), InvalidArgument);
  CHECK_THROWS_AS(SlicePlan::from_boundaries(10, {{0, 5}, {4, 8}}), InvalidArgument);
  CHECK_THROWS_AS(SlicePlan::from_boundaries(10, {{0, 11}}), InvalidArgument);
  CHECK_THROWS_AS(SlicePlan::from_boundaries(10, {{5, 3}}), InvalidArgument);
}

TEST_CASE("integrate small cases") {
  SUBCASE("single event") {
    EventStream s(2, 2, {{5, 1, 0, 1}});
    auto f = integrate(s, slice_stream(s, 1));
    CHECK(f.num_slices() == 1);
    CHECK(f.at(0, 1, 0, 1) == 1);
    CHECK(f.slice_sum(0) == 1);
  }
  SUBCASE("two identical events") {
    EventStream s(2, 2, {{5, 1, 1, -1}, {5, 1, 1, -1}});
    auto f = integrate(s, slice_stream(s, 1));
    auto expected = oracle::indicator_counts(s, 1);
    CHECK(expected.at({0, -1, 1, 1}) == 2);
    CHECK(f.at(0, 0, 1, 1) == 2);
    CHECK(f.slice_sum(0) == 2);
  }
  SUBCASE("empty stream") {
    EventStream s(3, 2);
    auto f = integrate(s, slice_stream(s, 1));
    CHECK(f.counts().size() == 12);
    CHECK(f.slice_sum(0) == 0);
  }
  SUBCASE("plan built for another stream") {
    EventStream s = stream_of(10);
    CHECK_THROWS_AS(integrate(s, slice_stream(stream_of(12), 2)), InvalidArgument);
  }
}

TEST_CASE("integrate matches the indicator oracle (property)") {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 60; ++iter) {
    const EventStream s = oracle::random_stream(rng, 800, 40, 40, 1);
    const auto T = std::uniform_int_distribution<std::uint32_t>(
        1, static_cast<std::uint32_t>(std::min<std::size_t>(s.size(), 25)))(rng);
    const FrameTensor f = integrate(s, slice_stream(s, T));
    const auto expected = oracle::indicator_counts(s, T);
    std::uint64_t nonzero = 0;
    for (std::size_t j = 0; j < T; ++j)
      for (int c = 0; c < 2; ++c)
        for (int y = 0; y < s.height(); ++y)
          for (int x = 0; x < s.width(); ++x) {
            const auto v = f.at(j, c, y, x);
            if (!v)
              continue;
            ++nonzero;
            auto it = expected.find({j, c ? 1 : -1, y, x});
            REQUIRE(it != expected.end());
            CHECK(it->second == v);
          }
    CHECK(nonzero == expected.size());
  }
}

TEST_CASE("conservation, remainder and refinement laws (property)") {
  std::mt19937_64 rng(12);
  for (int iter = 0; iter < 100; ++iter) {
    const EventStream s = oracle::random_stream(rng, 2000, 64, 64, 1);
    const auto T = std::uniform_int_distribution<std::uint32_t>(
        1, static_cast<std::uint32_t>(s.size()))(rng);
    const SlicePlan plan = slice_stream(s, T);
    const FrameTensor f = integrate(s, plan);
    for (std::size_t j = 0; j < T; ++j)
      CHECK(f.slice_sum(j) == plan[j].size());
    CHECK(s.size() - plan.assigned_events() == s.size() % T);

    // Perturbing a remainder event never changes the frames.
    if (s.size() % T) {
      std::vector<Event> ev(s.events().begin(), s.events().end());
      ev.back().x = static_cast<std::uint16_t>((ev.back().x + 1) % s.width());
      ev.back().p = static_cast<std::int8_t>(-ev.back().p);
      const EventStream moved(s.width(), s.height(), std::move(ev));
      CHECK(integrate(moved, slice_stream(moved, T)) == f);
    }
  }
}

TEST_CASE("refinement: frame_T(j) = frame_2T(2j) + frame_2T(2j+1) (property)") {
  std::mt19937_64 rng(13);
  for (int iter = 0; iter < 60; ++iter) {
    const auto T = std::uniform_int_distribution<std::uint32_t>(1, 12)(rng);
    const auto per = std::uniform_int_distribution<std::size_t>(1, 60)(rng);
    const EventStream s = oracle::random_stream(rng, 2 * T * per, 30, 30, 2 * T * per);
    const FrameTensor coarse = integrate(s, slice_stream(s, T));
    const FrameTensor fine = integrate(s, slice_stream(s, 2 * T));
    for (std::size_t j = 0; j < T; ++j) {
      auto c = coarse.slice(j);
      auto a = fine.slice(2 * j);
      auto b = fine.slice(2 * j + 1);
      for (std::size_t i = 0; i < c.size(); ++i)
        REQUIRE(c[i] == a[i] + b[i]);
    }
  }
}

TEST_CASE("remap_plan follows surviving events") {
  const SlicePlan plan = SlicePlan::from_boundaries(8, {{0, 3}, {3, 6}, {6, 8}});
  const std::vector<std::uint8_t> kept = {1, 0, 1, 0, 0, 0, 1, 1};
  const SlicePlan remapped = remap_plan(plan, kept);
  CHECK(remapped.event_count() == 4);
  CHECK(remapped[0] == SliceBounds{0, 2});
  CHECK(remapped[1] == SliceBounds{2, 2});
  CHECK(remapped[2] == SliceBounds{2, 4});
  CHECK_THROWS_AS(remap_plan(plan, std::vector<std::uint8_t>(7, 1)), InvalidArgument);
}

TEST_CASE("msti_variants") {
  SUBCASE("n = m = 2 on 100 events") {
    const EventStream s = stream_of(100);
    const auto v = msti_variants(s, {10, 2, 2});
    CHECK(v.short_term.num_slices() == 20);
    CHECK(v.base.num_slices() == 10);
    CHECK(v.long_term.num_slices() == 5);
    CHECK(v.short_term.slice_sum(0) == 5);
    CHECK(v.base.slice_sum(0) == 10);
    CHECK(v.long_term.slice_sum(0) == 20);
    CHECK(v.base == integrate(s, slice_stream(s, 10)));
  }
  SUBCASE("40 events: short-term frames hold 2 events") {
    const auto v = msti_variants(stream_of(40), {10, 2, 2});
    CHECK(v.short_term.num_slices() == 20);
    CHECK(v.long_term.num_slices() == 5);
    for (std::size_t j = 0; j < 20; ++j)
      CHECK(v.short_term.slice_sum(j) == 2);
  }
  SUBCASE("degenerate factors give identical tensors") {
    const auto v = msti_variants(stream_of(37), {6, 1, 1});
    CHECK(v.short_term == v.base);
    CHECK(v.long_term == v.base);
  }
  SUBCASE("long-term slice count rounds up") {
    const auto v = msti_variants(stream_of(100), {7, 2, 3});
    CHECK(v.short_term.num_slices() == 14);
    CHECK(v.long_term.num_slices() == 3);
  }
  SUBCASE("invalid specs") {
    CHECK_THROWS_AS(msti_variants(stream_of(100), {10, 0, 2}), InvalidArgument);
    CHECK_THROWS_AS(msti_variants(stream_of(100), {10, 2, 0}), InvalidArgument);
    CHECK_THROWS_AS(msti_variants(stream_of(100), {2, 2, 3}), InvalidArgument);
    CHECK_THROWS_AS(msti_variants(stream_of(19), {10, 2, 2}), InvalidArgument);
    CHECK_NOTHROW(msti_variants(stream_of(20), {10, 2, 2}));
  }
}
