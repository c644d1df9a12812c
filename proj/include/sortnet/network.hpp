#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace sortnet {

/// Channels are numbered 1..n.
using Channel = int;

/// A Boolean vector on at most 32 channels. Channel k lives at bit k-1, so
/// channel 1 is the least significant bit. "Sorted" means ascending along the
/// channel index: all zeros on the low channels, all ones on the high ones.
using BoolVec = std::uint32_t;

/// Largest channel count for which full output sets are enumerated.
inline constexpr int kMaxEnumerationChannels = 24;

/// A comparator routes the minimum of its two inputs to `low` and the maximum
/// to `high`. In a standard network low < high; a reversed comparator
/// (low > high) only appears in generalized networks.
struct Comparator {
  Channel low = 0;
  Channel high = 0;

  [[nodiscard]] bool reversed() const { return low > high; }
  [[nodiscard]] Channel first() const { return low < high ? low : high; }
  [[nodiscard]] Channel second() const { return low < high ? high : low; }
  [[nodiscard]] bool touches(Channel c) const { return c == low || c == high; }

  auto operator<=>(const Comparator&) const = default;
};

/// Channel-disjoint set of comparators. Kept ordered by first().
using Layer = std::vector<Comparator>;

/// Sorts a layer into canonical order. Throws std::invalid_argument when two
/// comparators share a channel or a comparator joins a channel to itself.
void normalize_layer(Layer& layer, int channels);

/// Comparator network C = L_1;...;L_d on n channels.
class Network {
 public:
  Network() = default;
  explicit Network(int channels, std::vector<Layer> layers = {});

  [[nodiscard]] int channels() const { return channels_; }
  [[nodiscard]] int depth() const { return static_cast<int>(layers_.size()); }
  [[nodiscard]] std::size_t size() const;
  /// True if any comparator is reversed.
  [[nodiscard]] bool generalized() const { return generalized_; }

  [[nodiscard]] const std::vector<Layer>& layers() const { return layers_; }
  /// 0-based layer access.
  [[nodiscard]] const Layer& layer(int k) const { return layers_.at(static_cast<std::size_t>(k)); }

  Network& add_layer(Layer layer);
  /// Appends a comparator as a new single-comparator layer.
  Network& add_comparator(Comparator c) { return add_layer(Layer{c}); }

  /// First `k` layers.
  [[nodiscard]] Network prefix(int k) const;
  /// Concatenation C1;C2.
  [[nodiscard]] Network then(const Network& tail) const;

  bool operator==(const Network&) const = default;

 private:
  int channels_ = 0;
  std::vector<Layer> layers_;
  bool generalized_ = false;
};

/// A set of Boolean vectors of common length n, stored sorted without
/// duplicates.
class VectorSet {
 public:
  VectorSet() = default;
  VectorSet(int channels, std::vector<BoolVec> members);

  [[nodiscard]] int channels() const { return channels_; }
  [[nodiscard]] std::size_t size() const { return members_.size(); }
  [[nodiscard]] bool empty() const { return members_.empty(); }
  [[nodiscard]] bool contains(BoolVec x) const;
  [[nodiscard]] const std::vector<BoolVec>& members() const { return members_; }
  [[nodiscard]] auto begin() const { return members_.begin(); }
  [[nodiscard]] auto end() const { return members_.end(); }

  /// True if every member of this set is in `other`.
  [[nodiscard]] bool subset_of(const VectorSet& other) const;

  bool operator==(const VectorSet&) const = default;

 private:
  int channels_ = 0;
  std::vector<BoolVec> members_;
};

using InputSet = VectorSet;
using OutputSet = VectorSet;

// --- Boolean vector helpers -------------------------------------------------

/// Parses "0101" (channel 1 first).
[[nodiscard]] BoolVec parse_boolvec(std::string_view bits);
/// Renders x as n characters, channel 1 first.
[[nodiscard]] std::string to_string(BoolVec x, int n);
[[nodiscard]] bool is_sorted(BoolVec x, int n);
/// The sorted vector with the same number of ones as x.
[[nodiscard]] BoolVec sorted_of(BoolVec x, int n);
/// Reverses the channel order and complements every bit.
[[nodiscard]] BoolVec reverse_complement(BoolVec x, int n);

// --- Evaluation --------------------------------------------------------------

/// C(x). Throws std::invalid_argument if n > 32.
[[nodiscard]] BoolVec evaluate(const Network& net, BoolVec x);
/// Values after every layer: element k is C(x, k, .), k = 0..depth.
[[nodiscard]] std::vector<BoolVec> evaluate_trace(const Network& net, BoolVec x);
/// Integer evaluation, used for illustrations and tests.
[[nodiscard]] std::vector<int> evaluate(const Network& net, std::span<const int> values);

/// outputs(C) = { C(x) : x in B^n }. Throws std::length_error for n > 24.
[[nodiscard]] OutputSet outputs(const Network& net);
/// Image of an arbitrary input set.
[[nodiscard]] OutputSet image(const Network& net, const InputSet& inputs);

[[nodiscard]] bool is_sorting_network(const Network& net);
/// True if C(x) is sorted for every x in `inputs`.
[[nodiscard]] bool sorts(const Network& net, const InputSet& inputs);

[[nodiscard]] InputSet all_inputs(int n);
/// B^n_un: every unsorted vector.
[[nodiscard]] InputSet unsorted_inputs(int n);
/// B^n_un(C): inputs left unsorted by the prefix C.
[[nodiscard]] InputSet unsorted_inputs(const Network& prefix);

/// Members of `inputs` of the form 0^l1 m 1^l2 with l1 + l2 = pad.
/// pad = 0 returns the set unchanged. Throws std::invalid_argument if
/// pad >= n or pad < 0.
[[nodiscard]] InputSet windows(const InputSet& inputs, int pad);

// --- Symmetries --------------------------------------------------------------

/// A permutation of 1..n stored as images: perm[i-1] = pi(i).
using Permutation = std::vector<Channel>;

[[nodiscard]] Permutation identity_permutation(int n);
[[nodiscard]] bool is_permutation(std::span<const Channel> perm);
[[nodiscard]] Permutation inverse(std::span<const Channel> perm);
/// pi(x): the value on channel i moves to channel pi(i).
[[nodiscard]] BoolVec apply(std::span<const Channel> perm, BoolVec x);

/// pi(C): every comparator (i,j) becomes (pi(i), pi(j)).
[[nodiscard]] Network permute(std::span<const Channel> perm, const Network& net);

/// Turns a generalized network into a standard one of the same depth and size.
/// Scans left to right; a reversed comparator (j,i) is oriented forward and
/// channels i and j are exchanged in every later layer.
[[nodiscard]] Network untangle(const Network& net);

/// C^R: (i,j) becomes (n-j+1, n-i+1).
[[nodiscard]] Network reflect(const Network& net);

enum class FirstLayerStyle { adjacent, crossing };

/// adjacent: F_n = {(2i-1, 2i)}; crossing: F'_n = {(i, n-i+1)}.
[[nodiscard]] Layer first_layer(int n, FirstLayerStyle style = FirstLayerStyle::adjacent);
[[nodiscard]] bool is_maximal(const Layer& layer, int n);

// --- Graph representation ----------------------------------------------------

/// Vertices are comparator occurrences in layer order; an edge (u, 1, v) means
/// the minimum output of u feeds v, (u, 2, v) the maximum output.
struct GraphRep {
  struct Edge {
    int from = 0;
    int label = 0;
    int to = 0;
    auto operator<=>(const Edge&) const = default;
  };
  int vertices = 0;
  std::vector<Edge> edges;
};

[[nodiscard]] GraphRep graph_of(const Network& net);

/// Exact labeled-digraph isomorphism by backtracking. Throws std::length_error
/// beyond 10 vertices.
[[nodiscard]] bool iso_bruteforce(const GraphRep& a, const GraphRep& b);

// --- Text format -------------------------------------------------------------

/// {"n": N, "layers": [[[i,j],...],...]}
[[nodiscard]] nlohmann::json to_json(const Network& net);
[[nodiscard]] Network network_from_json(const nlohmann::json& j);
[[nodiscard]] std::string to_json_string(const Network& net);
[[nodiscard]] Network parse_network(std::string_view text);

}  // namespace sortnet
