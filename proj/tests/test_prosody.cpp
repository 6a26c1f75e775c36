// tests/test_prosody.cpp

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "spt/prosody.hpp"

using namespace spt;

TEST_CASE("voiced regions from label runs") {
  SUBCASE("single run") {
    const std::vector<F0Label> labels = {
        {0.10, 100.0}, {0.11, 101.0}, {0.12, 102.0}};
    const auto regions = voiced_regions(labels, 0.033);
    REQUIRE(regions.size() == 1);
    CHECK(regions[0].begin_s == doctest::Approx(0.10));
    CHECK(regions[0].end_s == doctest::Approx(0.12));
  }
  SUBCASE("large gap splits runs") {
    const std::vector<F0Label> labels = {
        {0.10, 100.0}, {0.11, 100.0}, {0.61, 90.0}, {0.62, 91.0}};
    CHECK(voiced_regions(labels, 0.033).size() == 2);
  }
  SUBCASE("empty labels") {
    CHECK(voiced_regions(std::vector<F0Label>{}, 0.033).empty());
  }
  SUBCASE("zero-f0 label terminates a run") {
    const std::vector<F0Label> labels = {
        {0.10, 100.0}, {0.11, 0.0}, {0.12, 102.0}};
    const auto regions = voiced_regions(labels, 0.033);
    REQUIRE(regions.size() == 2);
    CHECK(regions[0].end_s == doctest::Approx(0.10));
    CHECK(regions[1].begin_s == doctest::Approx(0.12));
  }
  SUBCASE("unsorted labels rejected") {
    const std::vector<F0Label> labels = {{0.2, 100.0}, {0.1, 100.0}};
    CHECK_THROWS_AS(voiced_regions(labels, 0.033), Error);
  }
}

TEST_CASE("f0 interpolation") {
  const std::vector<F0Label> labels = {{0.10, 100.0}, {0.20, 120.0}};
  SUBCASE("linear midpoint") {
    Vector times(1);
    times << 0.15;
    const F0Contour c = interpolate_f0(labels, times, 0.15);
    CHECK(c.f0_hz[0] == doctest::Approx(110.0));
    CHECK(c.voicing[0] == 1);
  }
  SUBCASE("outside every voiced region") {
    Vector times(2);
    times << 0.05, 0.30;
    const F0Contour c = interpolate_f0(labels, times, 0.15);
    CHECK(c.f0_hz[0] == 0.0);
    CHECK(c.f0_hz[1] == 0.0);
    CHECK(c.voicing[0] == 0);
    CHECK(c.voicing[1] == 0);
  }
  SUBCASE("exactly on a label time") {
    Vector times(2);
    times << 0.10, 0.20;
    const F0Contour c = interpolate_f0(labels, times, 0.15);
    CHECK(c.f0_hz[0] == 100.0);
    CHECK(c.f0_hz[1] == 120.0);
  }
}

TEST_CASE("interpolation stays within bracketing label values") {
  std::vector<F0Label> labels;
  for (int i = 0; i < 30; ++i) {
    labels.push_back({0.1 + 0.01 * i, 100.0 + 3.0 * ((i * 7) % 11)});
  }
  Vector times(200);
  for (Index i = 0; i < times.size(); ++i) {
    times[i] = 0.08 + 0.0017 * static_cast<double>(i);
  }
  const F0Contour c = interpolate_f0(labels, times, 0.033);
  for (Index i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (t < 0.1 || t > 0.1 + 0.29) {
      CHECK(c.f0_hz[i] == 0.0);
      continue;
    }
    // Locate the bracketing labels.
    std::size_t k = 0;
    while (k + 1 < labels.size() && labels[k + 1].time_s < t) ++k;
    const double lo = std::min(labels[k].f0_hz,
                               labels[std::min(k + 1, labels.size() - 1)].f0_hz);
    const double hi = std::max(labels[k].f0_hz,
                               labels[std::min(k + 1, labels.size() - 1)].f0_hz);
    CHECK(c.f0_hz[i] >= lo - 1e-9);
    CHECK(c.f0_hz[i] <= hi + 1e-9);
  }
}

TEST_CASE("piecewise linearity: second differences vanish inside a segment") {
  const std::vector<F0Label> labels = {{0.0, 80.0}, {1.0, 200.0}};
  Vector times(5);
  times << 0.1, 0.2, 0.3, 0.4, 0.5;
  const F0Contour c = interpolate_f0(labels, times, 1.5);
  for (Index i = 2; i < times.size(); ++i) {
    const double second_diff =
        c.f0_hz[i] - 2.0 * c.f0_hz[i - 1] + c.f0_hz[i - 2];
    CHECK(std::abs(second_diff) < 1e-9);
  }
}

TEST_CASE("voicing flag equals f0 positivity on whole contours") {
  std::vector<F0Label> labels;
  for (int i = 0; i < 10; ++i) labels.push_back({0.1 + 0.005 * i, 150.0});
  for (int i = 0; i < 10; ++i) labels.push_back({0.5 + 0.005 * i, 120.0});
  Vector times(100);
  for (Index i = 0; i < 100; ++i) times[i] = 0.01 * (static_cast<double>(i) + 0.5);
  const F0Contour c = interpolate_f0(labels, times, 0.033);
  for (Index i = 0; i < 100; ++i) {
    CHECK((c.f0_hz[i] > 0.0) == (c.voicing[static_cast<std::size_t>(i)] == 1));
  }
}

TEST_CASE("voicing index") {
  CHECK(voicing_index(110.0) == 1);
  CHECK(voicing_index(0.0) == 0);
  CHECK(voicing_index(1e-9) == 1);
  CHECK_THROWS_AS(voicing_index(-1.0), Error);
}

TEST_CASE("label file parsing") {
  const auto dir = std::filesystem::temp_directory_path() / "spt_prosody_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "labels.f0").string();
  {
    std::ofstream out(path);
    out << "# a comment line\n";
    out << "0.10 100.0\n";
    out << "  0.20\t120.5\n";
    out << "\n";
    out << "0.30 0\n";
  }
  const auto labels = read_f0_labels(path);
  REQUIRE(labels.size() == 3);
  CHECK(labels[0].time_s == doctest::Approx(0.10));
  CHECK(labels[1].f0_hz == doctest::Approx(120.5));
  CHECK(labels[2].f0_hz == 0.0);

  {
    std::ofstream out(path);
    out << "0.20 100\n0.10 90\n";
  }
  CHECK_THROWS_AS(read_f0_labels(path), Error);

  {
    std::ofstream out(path);
    out << "0.20 not_a_number\n";
  }
  CHECK_THROWS_AS(read_f0_labels(path), Error);

  CHECK_THROWS_AS(read_f0_labels((dir / "missing.f0").string()), Error);
  std::filesystem::remove_all(dir);
}
