// Copyright 2026 The lexcomp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "lexcomp/error.hpp"
#include "lexcomp/kv_config.hpp"
#include "lexcomp/random.hpp"
#include "lexcomp/text.hpp"

using namespace lexcomp;

TEST_CASE("nfc composes decomposed sequences") {
  CHECK(text::nfc("Cafe\xCC\x81") == "Caf\xC3\xA9");
  CHECK(text::nfc("plain") == "plain");
  CHECK_THROWS_AS(text::nfc("\xC3\x28"), ValidationError);
}

TEST_CASE("comparison key folds case, whitespace and normalization") {
  CHECK(text::comparison_key("  South\t America ") == text::comparison_key("south america"));
  CHECK(text::comparison_key("STRASSE") == text::comparison_key("stra\xC3\x9F" "e"));
  CHECK(text::comparison_key("Cafe\xCC\x81") == text::comparison_key("CAF\xC3\x89"));
  CHECK(text::comparison_key("America") != text::comparison_key("South America"));
}

TEST_CASE("code point slicing") {
  const std::string s = "Gr\xC3\xBC\xC3\x9F" "e Welt";  // "Grüße Welt"
  CHECK(text::codepoint_length(s) == 10);
  CHECK(text::codepoint_slice(s, 0, 5) == "Gr\xC3\xBC\xC3\x9F" "e");
  CHECK(text::codepoint_slice(s, 6, 10) == "Welt");
  CHECK_THROWS_AS(text::codepoint_slice(s, 6, 11), DomainError);
  CHECK_THROWS_AS(text::codepoint_slice(s, 4, 3), DomainError);
}

TEST_CASE("split keeps empty fields") {
  CHECK(text::split("a\t\tb\t", '\t') == std::vector<std::string>{"a", "", "b", ""});
  CHECK(text::split("", ',') == std::vector<std::string>{""});
}

TEST_CASE("utf8 validation") {
  CHECK(text::is_valid_utf8("ok \xE2\x82\xAC"));
  CHECK_FALSE(text::is_valid_utf8("\xFF"));
  CHECK_FALSE(text::is_valid_utf8("\xE2\x82"));
}

TEST_CASE("rng is reproducible and stays in range") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.uniform_index(7);
    CHECK(x == b.uniform_index(7));
    CHECK(x < 7);
    const double u = a.uniform01();
    CHECK(u == b.uniform01());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("uniform_index is roughly uniform") {
  Rng rng(7);
  std::array<int, 5> counts{};
  const int draws = 50000;
  for (int i = 0; i < draws; ++i) ++counts[rng.uniform_index(5)];
  for (int c : counts) CHECK(std::abs(c - draws / 5) < 400);  // ~4.5 sigma
}

TEST_CASE("normal draws have unit moments") {
  Rng rng(3);
  const int n = 100000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s += z;
    s2 += z * z;
  }
  CHECK(std::abs(s / n) < 0.02);
  CHECK(std::abs(s2 / n - 1.0) < 0.03);
}

TEST_CASE("sample without replacement yields distinct indices") {
  Rng rng(11);
  for (std::size_t n : {1u, 5u, 40u}) {
    for (std::size_t k = 0; k <= n; ++k) {
      const auto picks = rng.sample_without_replacement(n, k);
      CHECK(picks.size() == k);
      std::set<std::size_t> unique(picks.begin(), picks.end());
      CHECK(unique.size() == k);
      for (auto p : picks) CHECK(p < n);
    }
  }
}

TEST_CASE("shuffle is a permutation") {
  Rng rng(5);
  std::vector<int> v(50);
  std::iota(v.begin(), v.end(), 0);
  auto w = v;
  rng.shuffle(w);
  CHECK(w != v);
  std::sort(w.begin(), w.end());
  CHECK(w == v);
}

TEST_CASE("fnv1a64 reference vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("mix_seed separates nearby inputs") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t a = 0; a < 30; ++a)
    for (std::uint64_t b = 0; b < 30; ++b) seen.insert(mix_seed(a, b));
  CHECK(seen.size() == 900);
  CHECK(mix_seed(1, 2) != mix_seed(2, 1));
}

TEST_CASE("key value config") {
  const auto cfg = KeyValueConfig::parse("# comment\n a = 1 \n; other\nb=two words\na = 3\n");
  CHECK(cfg.get("a") == "3");
  CHECK(cfg.get("b") == "two words");
  CHECK_FALSE(cfg.get("c").has_value());
  CHECK(cfg.get_or("c", "x") == "x");
  CHECK_THROWS_AS(KeyValueConfig::parse("no equals sign"), ConfigError);
}
