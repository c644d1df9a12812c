#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "sortnet/network.hpp"

namespace sortnet {

/// Forbidden two-layer patterns. In each, the channels named a, b, c, d are
/// ordered as (a,b), (c,d) first-layer comparators with a, c min-channels.
///   P1a  free channel unused; pair (a,b) with b unused, a used at layer 2
///   P1b  free channel unused; pair (a,b) with a unused, b used at layer 2
///   P1c  free channel unused; pair (a,b) with both unused
///   P2   min-channel a and max-channel d of different pairs unused
///   P3a  max-channels b, d unused; their partners a, c compared at layer 2
///   P3b  min-channels a, c unused; their partners b, d compared at layer 2
enum class PatternId { P1a, P1b, P1c, P2, P3a, P3b };

inline constexpr PatternId kAllPatterns[] = {PatternId::P1a, PatternId::P1b, PatternId::P1c,
                                             PatternId::P2,  PatternId::P3a, PatternId::P3b};

[[nodiscard]] std::string_view name_of(PatternId id);

/// A partially specified network on channels 1..m. `layers[k]` holds the
/// comparators between pattern channels at layer k+1, `external[k]` the
/// pattern channels that meet a comparator leaving the pattern at that layer.
struct Pattern {
  int channels = 0;
  std::vector<Layer> layers;
  std::vector<std::vector<Channel>> external;

  [[nodiscard]] int depth() const { return static_cast<int>(layers.size()); }
};

/// Literal template of a forbidden pattern.
[[nodiscard]] Pattern pattern_of(PatternId id);

/// Occurrence of p in the depth-p.depth() prefix of net: an injective channel
/// assignment where pattern comparators map to comparators with the same
/// orientation, external comparators leave the image, and no other comparator
/// touches the image.
[[nodiscard]] bool occurs(const Pattern& p, const Network& net);

/// Role-based occurrence used by the saturation check. Same as `occurs` on
/// the literal template except that the first-layer partners b, c in P2 may be
/// unused or compared with each other at layer 2.
/// Throws std::invalid_argument unless net has two layers and a maximal first
/// layer.
[[nodiscard]] bool contains_pattern(const Network& net, PatternId id);

/// Second-layer comparator that eliminates one occurrence of id, if any.
[[nodiscard]] std::optional<Comparator> pattern_fix(const Network& net, PatternId id);

/// Two-layer syntactic check: some second-layer comparator repeats a
/// first-layer comparator.
[[nodiscard]] bool is_redundant(const Network& net);
/// Removing some comparator leaves an output set equal to a permutation of the
/// original one. Throws std::length_error for n > 8.
[[nodiscard]] bool is_redundant_semantic(const Network& net);

/// Non-redundant and free of all forbidden patterns.
/// Throws std::invalid_argument for a non-maximal first layer or depth > 2.
[[nodiscard]] bool is_saturated(const Network& net);

/// Non-redundant, and no comparator between two channels unused at layer 2
/// (other than a repeat of a first-layer comparator) yields outputs contained
/// in a permutation of the original outputs. Throws std::length_error for
/// n > 8.
[[nodiscard]] bool is_saturated_semantic(const Network& net);

/// Some pi with outputs(cb) ⊆ pi(outputs(ca)) ("cb subsumes ca").
/// Throws std::length_error for n > 10.
[[nodiscard]] std::optional<Permutation> subsumes(const Network& cb, const Network& ca);
[[nodiscard]] std::optional<Permutation> subsumes(const OutputSet& ob, const OutputSet& oa);

/// Drops repeated first-layer comparators from layer 2, then adds
/// pattern-eliminating comparators until the network is saturated.
[[nodiscard]] Network saturate(const Network& net);

/// True iff no member of R(S_n) subsumes another. Writes
/// "class_a,class_b,verdict" rows to csv when given.
[[nodiscard]] bool verify_conjecture(int n, std::ostream* csv = nullptr);

/// |S_n| by enumerating every second layer over F_n.
[[nodiscard]] std::uint64_t count_saturated_layers(int n);

}  // namespace sortnet
