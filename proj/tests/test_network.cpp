#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "sortnet/network.hpp"

using namespace sortnet;

namespace {

const Network kFourChannel(4, {{{1, 2}, {3, 4}}, {{1, 3}, {2, 4}}, {{2, 3}}});

Network random_network(std::mt19937& rng, int n, int depth) {
  const auto layers = oracle::all_layers(n);
  std::uniform_int_distribution<std::size_t> pick(0, layers.size() - 1);
  Network net(n);
  for (int k = 0; k < depth; ++k) net.add_layer(layers[pick(rng)]);
  return net;
}

}  // namespace

TEST_CASE("integer evaluation of the four-channel example") {
  const std::vector<int> in{5, 2, 0, 7};
  CHECK(evaluate(kFourChannel, in) == std::vector<int>{0, 2, 5, 7});
  CHECK(evaluate(kFourChannel, parse_boolvec("0101")) == parse_boolvec("0011"));
  CHECK(evaluate(Network(3), parse_boolvec("101")) == parse_boolvec("101"));
}

TEST_CASE("evaluation agrees with the reference evaluator") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 6;
    const Network net = random_network(rng, n, 1 + trial % 5);
    for (BoolVec x = 0; x < (1U << n); ++x) REQUIRE(evaluate(net, x) == oracle::run(net, x));
  }
}

TEST_CASE("output sets") {
  CHECK(outputs(Network(3)).size() == 8);
  CHECK(outputs(Network(2, {{{1, 2}}})).members() ==
        std::vector<BoolVec>{parse_boolvec("00"), parse_boolvec("01"), parse_boolvec("11")});
  CHECK(outputs(kFourChannel).size() == 5);
}

TEST_CASE("sorting network check") {
  CHECK(is_sorting_network(kFourChannel));
  CHECK_FALSE(is_sorting_network(Network(4, {first_layer(4)})));
  CHECK(is_sorting_network(Network(2, {{{1, 2}}})));
  std::mt19937 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const Network net = random_network(rng, 3 + trial % 3, 2 + trial % 4);
    REQUIRE(is_sorting_network(net) == oracle::sorts_all(net));
  }
}

TEST_CASE("unsorted inputs") {
  CHECK(unsorted_inputs(5).size() == 26);
  CHECK(unsorted_inputs(3).size() == 4);
  CHECK(unsorted_inputs(Network(2, {{{1, 2}}})).empty());
  const Network f4(4, {first_layer(4)});
  std::size_t expected = 0;
  for (BoolVec x = 0; x < 16; ++x) expected += oracle::sorted(oracle::run(f4, x), 4) ? 0 : 1;
  CHECK(unsorted_inputs(f4).size() == expected);
}

TEST_CASE("windows") {
  CHECK(windows(unsorted_inputs(4), 0) == unsorted_inputs(4));

  std::vector<BoolVec> expected;
  for (BoolVec ab = 0; ab < 4; ++ab) {
    expected.push_back(ab << 2);                 // 00ab
    expected.push_back((ab << 1) | 8U);          // 0ab1
    expected.push_back(ab | 12U);                // ab11
  }
  CHECK(windows(all_inputs(4), 2) == InputSet(4, expected));

  std::size_t count = 0;
  for (BoolVec x = 0; x < 64; ++x) {
    if (oracle::sorted(x, 6)) continue;
    for (int l1 = 0; l1 <= 3; ++l1) {
      const int l2 = 3 - l1;
      const BoolVec low_mask = (1U << l1) - 1;
      const BoolVec high_mask = ((1U << l2) - 1) << (6 - l2);
      if ((x & low_mask) == 0 && (x & high_mask) == high_mask) {
        ++count;
        break;
      }
    }
  }
  CHECK(windows(unsorted_inputs(6), 3).size() == count);
  CHECK_THROWS_AS((void)windows(unsorted_inputs(4), 4), std::invalid_argument);
}

TEST_CASE("permutation and untangling of the equivalent four-channel pair") {
  const Network left(4, {{{1, 2}, {3, 4}}, {{1, 4}}, {{2, 4}, {1, 3}}, {{2, 3}}});
  const Network middle(4, {{{3, 4}, {1, 2}}, {{3, 2}}, {{4, 2}, {3, 1}}, {{4, 1}}});
  const Network right(4, {{{1, 2}, {3, 4}}, {{2, 3}}, {{1, 2}, {3, 4}}, {{2, 3}}});
  const Permutation pi{3, 4, 1, 2};
  CHECK(permute(pi, left) == middle);
  CHECK(middle.generalized());
  CHECK(untangle(middle) == right);
  CHECK(untangle(right) == right);
  CHECK(permute(identity_permutation(4), left) == left);
}

TEST_CASE("untangling preserves sorting") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 3 + trial % 4;
    Network net = random_network(rng, n, 2 + trial % 5);
    std::vector<Channel> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 1);
    std::shuffle(perm.begin(), perm.end(), rng);
    const Network g = permute(perm, net);
    const Network u = untangle(g);
    REQUIRE_FALSE(u.generalized());
    REQUIRE(u.depth() == g.depth());
    REQUIRE(u.size() == g.size());
    if (oracle::sorts_all(net)) REQUIRE(oracle::sorts_all(u));
  }
}

TEST_CASE("reflection") {
  CHECK(reverse_complement(parse_boolvec("100"), 3) == parse_boolvec("110"));
  const Network a(6, {first_layer(6), {{2, 3}, {4, 6}}});
  CHECK(reflect(a) == Network(6, {first_layer(6), {{1, 3}, {4, 5}}}));
  CHECK(reflect(reflect(a)) == a);

  std::vector<Channel> reverse{6, 5, 4, 3, 2, 1};
  const Network flipped = permute(reverse, a);
  for (int k = 0; k < a.depth(); ++k) {
    Layer oriented;
    for (const auto& c : flipped.layer(k)) oriented.push_back({c.first(), c.second()});
    normalize_layer(oriented, 6);
    CHECK(oriented == reflect(a).layer(k));
  }
}

TEST_CASE("reflected outputs are reverse complements") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 5;
    const Network net = random_network(rng, n, 1 + trial % 4);
    std::vector<BoolVec> mapped;
    for (BoolVec y : outputs(net)) mapped.push_back(reverse_complement(y, n));
    REQUIRE(outputs(reflect(net)) == OutputSet(n, mapped));
  }
}

TEST_CASE("first layers") {
  CHECK(first_layer(4) == Layer{{1, 2}, {3, 4}});
  CHECK(first_layer(5, FirstLayerStyle::crossing) == Layer{{1, 5}, {2, 4}});
  const Layer f7 = first_layer(7);
  CHECK(f7.size() == 3);
  for (const auto& c : f7) CHECK_FALSE(c.touches(7));
  CHECK(is_maximal(f7, 7));
  CHECK_FALSE(is_maximal(Layer{{1, 2}}, 4));
}

TEST_CASE("graph representation of the equivalent pair") {
  const Network left(4, {{{1, 2}, {3, 4}}, {{1, 4}}, {{2, 4}, {1, 3}}, {{2, 3}}});
  const Network right(4, {{{1, 2}, {3, 4}}, {{2, 3}}, {{1, 2}, {3, 4}}, {{2, 3}}});
  // a=(1,2) b=(3,4) c=(1,4) d=(1,3) e=(2,4) f=(2,3)
  const std::vector<GraphRep::Edge> expected{{0, 1, 2}, {0, 2, 4}, {1, 1, 3}, {1, 2, 2},
                                             {2, 1, 3}, {2, 2, 4}, {3, 2, 5}, {4, 1, 5}};
  GraphRep g = graph_of(left);
  std::sort(g.edges.begin(), g.edges.end());
  CHECK(g.vertices == 6);
  CHECK(g.edges == expected);
  CHECK(iso_bruteforce(graph_of(left), graph_of(right)));
  CHECK_FALSE(iso_bruteforce(graph_of(left), graph_of(Network(4, {first_layer(4), {{2, 3}}, {{1, 2}}, {{3, 4}}}))));

  const GraphRep single = graph_of(Network(3, {{{1, 2}}}));
  CHECK(single.vertices == 1);
  CHECK(single.edges.empty());
}

TEST_CASE("network JSON round trip") {
  const std::string text = to_json_string(kFourChannel);
  CHECK(text == R"({"layers":[[[1,2],[3,4]],[[1,3],[2,4]],[[2,3]]],"n":4})");
  CHECK(parse_network(text) == kFourChannel);
  CHECK_THROWS((void)parse_network(R"({"n":3,"layers":[[[1,2],[2,3]]]})"));
  CHECK_THROWS((void)parse_network(R"({"layers":[]})"));
}
