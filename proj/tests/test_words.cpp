#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "sortnet/saturation.hpp"
#include "sortnet/words.hpp"

using namespace sortnet;

namespace {

// Drawn with channel n on top; listed here with channel 1 first.
const Network kHead(5, {{{1, 2}, {3, 4}}, {{2, 4}, {1, 5}}});
const Network kStick(8, {first_layer(8), {{1, 4}, {5, 7}, {3, 8}}});
const Network kCycle(6, {first_layer(6), {{1, 3}, {4, 6}, {2, 5}}});
const Network kTenChannel(10, {{{5, 10}, {4, 9}, {3, 8}, {2, 7}, {1, 6}}, {{7, 10}, {2, 5}, {6, 9}, {1, 4}}});

}  // namespace

TEST_CASE("words of connected two-layer networks") {
  CHECK(word_of(kHead).to_string() == "01221_h");
  CHECK(word_of(kStick).to_string() == "21121212_s");
  CHECK(word_of(kCycle).to_string() == "121221_c");
}

TEST_CASE("sentences") {
  CHECK(sentence_of(kTenChannel).to_string() == "12_s;1221_c;1221_c");
  CHECK(sentence_of(Network(4, {first_layer(4), {}})).to_string() == "12_s;12_s");
  CHECK(sentence_of(Network(3, {first_layer(3), {}})).to_string() == "0_h;12_s");
}

TEST_CASE("networks of sentences") {
  const Network d = net_of(Sentence::parse("12_s;1221_c;1221_c"));
  CHECK(d == Network(10, {first_layer(10), {{3, 5}, {4, 6}, {7, 9}, {8, 10}}}));
  const Network h = net_of(Word::parse("0_h"));
  CHECK(h.channels() == 1);
  CHECK(h.size() == 0);
  for (const auto& net : {kHead, kStick, kCycle, kTenChannel}) {
    const Sentence s = sentence_of(net);
    CHECK(sentence_of(net_of(s)) == s);
  }
}

TEST_CASE("canonical forms") {
  CHECK(canonical(Word::parse("1221_c")).to_string() == "1221_c");
  CHECK(canonical(Word::parse("122112_c")).to_string() == "121221_c");
  CHECK(canonical(Word::parse("21212112_s")).to_string() == "21121212_s");
  CHECK(is_canonical(Word::parse("01221_h")));
  CHECK_FALSE(is_canonical(Word::parse("21_s")));
  CHECK(reflect_word(Word::parse("211212_s")).to_string() == "121221_s");
  CHECK_THROWS((void)Word::parse("0121_h"));
  CHECK_THROWS((void)Word::parse("12_x"));
}

TEST_CASE("asymmetric cycles") {
  for (int len = 4; len < 12; len += 2) {
    for (const auto& w : canonical_words(WordKind::cycle, len)) CHECK_FALSE(is_asymmetric(w));
  }
  CHECK(asymmetric_cycle_count(12) == 1);
  CHECK(asymmetric_cycle_count(14) == 1);
  CHECK(asymmetric_cycle_count(16) == 4);
  CHECK(asymmetric_cycle_count(20) == 18);
}

TEST_CASE("class counts agree with brute force over the pair-permutation group") {
  for (int n = 3; n <= 8; ++n) {
    CAPTURE(n);
    CHECK(generate_sentences(n, PrefixSet::RGn).size() == oracle::second_layer_classes(n));
    CHECK(generate_sentences(n, PrefixSet::RSn).size() ==
          oracle::second_layer_classes(n, [](const Network& net) { return is_saturated_semantic(net); }));
  }
}

TEST_CASE("generated sentences are canonical and distinct") {
  for (int n = 3; n <= 12; ++n) {
    for (auto set : {PrefixSet::RGn, PrefixSet::RSn, PrefixSet::Rn}) {
      const auto sentences = generate_sentences(n, set);
      std::set<std::string> seen;
      for (const auto& s : sentences) {
        REQUIRE(s.channels() == n);
        REQUIRE(sentence_of(net_of(s)) == s);
        REQUIRE(seen.insert(s.to_string()).second);
      }
    }
  }
}

TEST_CASE("class sizes partition the second layers") {
  for (int n = 3; n <= 9; ++n) {
    std::uint64_t total = 0;
    for (const auto& s : generate_sentences(n, PrefixSet::RGn)) total += class_size(s);
    CHECK(total == telephone_number(n));
    std::uint64_t brute = 0;
    for_each_second_layer(n, [&](const Layer&) { ++brute; });
    CHECK(total == brute);
    CHECK(brute == oracle::all_layers(n).size());
  }
}

TEST_CASE("published counts") {
  const CountsRow r13 = counts(13);
  CHECK(r13.g == 568504);
  CHECK(r13.rg == 1378);
  CHECK(r13.rs == 212);
  CHECK(r13.r == 117);
  const CountsRow r5 = counts(5);
  CHECK(r5.rg == 16);
  CHECK(r5.rg == counts(4).rg + 2 * counts(3).rg);
  const CountsRow r4 = counts(4);
  CHECK(r4.g == 10);
  CHECK(r4.rg == 8);
}

TEST_CASE("saturated layer count matches the semantic definition") {
  for (int n = 3; n <= 7; ++n) {
    std::uint64_t semantic = 0;
    for (const Layer& second : oracle::all_layers(n)) {
      semantic += is_saturated_semantic(Network(n, {first_layer(n), second})) ? 1 : 0;
    }
    CAPTURE(n);
    CHECK(counts(n).s == semantic);
    CHECK(count_saturated_layers(n) == semantic);
  }
}

TEST_CASE("sentence sets") {
  CHECK(parse_prefix_set("rn") == PrefixSet::Rn);
  CHECK_THROWS((void)parse_prefix_set("xx"));
  CHECK_THROWS((void)generate_sentences(5, PrefixSet::Gn));
  const auto r4 = generate_sentences(4, PrefixSet::Rn);
  CHECK(r4.size() == 2);
}
