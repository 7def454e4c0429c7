#include <doctest.h>

#include <random>

#include "support.hpp"
#include "surveyforge/errors.hpp"
#include "surveyforge/rouge.hpp"
#include "surveyforge/text.hpp"

using namespace surveyforge;
using namespace surveyforge::eval;
using V = std::vector<std::string>;

TEST_CASE("rouge_n examples") {
  const V a = tokenize("the cat sat on the mat");
  CHECK(rouge_n(a, a, 1).f1 == 1.0);
  CHECK(rouge_n(a, a, 2).f1 == 1.0);
  CHECK(rouge_n(V{"a", "b"}, V{"c", "d"}, 1).f1 == 0.0);
  const auto s = rouge_n(tokenize("the cat sat"), tokenize("the cat ran"), 1);
  CHECK(s.precision == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(s.recall == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(s.f1 == doctest::Approx(2.0 / 3).epsilon(1e-12));
  // Clipping: "the the the" against "the cat".
  const auto c = rouge_n(V{"the", "the", "the"}, V{"the", "cat"}, 1);
  CHECK(c.precision == doctest::Approx(1.0 / 3));
  CHECK(c.recall == doctest::Approx(0.5));
  CHECK(rouge_n(V{"a"}, V{"a"}, 2).f1 == 0.0);
  CHECK(rouge_n(V{}, V{"a"}, 1).f1 == 0.0);
  CHECK_THROWS_AS(rouge_n(a, a, 0), InvalidArgument);
}

TEST_CASE("rouge_l examples") {
  const V a = {"a", "b", "c"};
  CHECK(rouge_l(a, a).f1 == 1.0);
  const auto s = rouge_l(V{"a", "b", "c", "d"}, V{"a", "x", "c", "y"});
  CHECK(lcs_length(V{"a", "b", "c", "d"}, V{"a", "x", "c", "y"}) == 2);
  CHECK(s.precision == 0.5);
  CHECK(s.recall == 0.5);
  CHECK(s.f1 == 0.5);
  CHECK(rouge_l(V{}, a).f1 == 0.0);
  CHECK(rouge_l(V{}, V{}).f1 == 0.0);
}

TEST_CASE("lcs matches DP on long and random sequences") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 300; ++i) {
    const auto a = gen::tokens(rng, 200, 1 + static_cast<int>(rng() % 20));
    const auto b = gen::tokens(rng, 200, 1 + static_cast<int>(rng() % 20));
    CHECK(lcs_length(a, b) == oracle::lcs_dp(a, b));
  }
}

TEST_CASE("rouge matches brute force oracle") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 500; ++i) {
    const auto a = gen::tokens(rng, 20, 8);
    const auto b = gen::tokens(rng, 20, 8);
    for (std::size_t n : {1u, 2u, 3u}) {
      const auto got = rouge_n(a, b, n);
      const auto want = oracle::rouge_n(a, b, n);
      CHECK(got.precision == doctest::Approx(want.p).epsilon(1e-12));
      CHECK(got.recall == doctest::Approx(want.r).epsilon(1e-12));
      CHECK(got.f1 == doctest::Approx(want.f).epsilon(1e-12));
    }
    const auto l = rouge_l(a, b);
    const auto lw = oracle::rouge_l(a, b);
    CHECK(l.f1 == doctest::Approx(lw.f).epsilon(1e-12));
  }
}

TEST_CASE("rouge f1 is symmetric") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const auto a = gen::tokens(rng, 15, 6);
    const auto b = gen::tokens(rng, 15, 6);
    CHECK(rouge_n(a, b, 1).f1 == doctest::Approx(rouge_n(b, a, 1).f1).epsilon(1e-15));
    CHECK(rouge_n(a, b, 2).f1 == doctest::Approx(rouge_n(b, a, 2).f1).epsilon(1e-15));
    CHECK(rouge_l(a, b).f1 == doctest::Approx(rouge_l(b, a).f1).epsilon(1e-15));
  }
}

TEST_CASE("extractive summary has full unigram recall against its source") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    const auto src = gen::tokens(rng, 40, 10, 1);
    V summary;
    for (const auto& t : src) {
      if (rng() % 3 == 0) summary.push_back(t);
    }
    if (summary.empty()) continue;
    // The summary as reference is fully recalled by its source.
    CHECK(rouge_n(src, summary, 1).recall == 1.0);
    CHECK(rouge_n(summary, src, 1).precision == 1.0);
  }
}

TEST_CASE("evaluate_structured") {
  const corpus::TargetSections ref{"graphs rank sentences", "we build a graph", "it works well"};
  const auto same = evaluate_structured(ref, ref);
  for (auto c : kAllCoarse) {
    CHECK(same.section(c).r1.f1 == 1.0);
    CHECK(same.section(c).r2.f1 == 1.0);
    CHECK(same.section(c).rl.f1 == 1.0);
  }
  CHECK(same.combined.rl.f1 == 1.0);

  corpus::TargetSections produced = ref;
  produced.method = "";
  const auto r = evaluate_structured(produced, ref);
  CHECK(r.method.r1.f1 == 0.0);
  CHECK(r.combined.r1.f1 > 0.0);
  const V cand = tokenize("graphs rank sentences it works well");
  const V whole = tokenize("graphs rank sentences we build a graph it works well");
  CHECK(r.combined.r1.f1 == rouge_n(cand, whole, 1).f1);
  CHECK(r.combined.rl.f1 == rouge_l(cand, whole).f1);
}

TEST_CASE("corpus mean of two examples") {
  const corpus::TargetSections ref{"a b c", "d e", "f"};
  const auto e1 = evaluate_structured(ref, ref);
  const auto e2 = evaluate_structured({"a", "x", "f"}, ref);
  const std::vector<StructuredRouge> both{e1, e2};
  const auto m = mean(std::span<const StructuredRouge>(both));
  // Background of e2: p = 1, r = 1/3, f1 = 0.5.
  CHECK(e2.background.r1.f1 == doctest::Approx(0.5));
  CHECK(m.background.r1.f1 == doctest::Approx((1.0 + 0.5) / 2));
  CHECK(m.method.r1.f1 == doctest::Approx(0.5));
  CHECK(m.other.r1.f1 == doctest::Approx(1.0));
  CHECK(m.combined.rl.f1 == doctest::Approx((e1.combined.rl.f1 + e2.combined.rl.f1) / 2));
}
