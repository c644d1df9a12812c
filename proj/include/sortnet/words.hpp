#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "sortnet/network.hpp"

namespace sortnet {

// Two-layer networks with a maximal first layer are described up to channel
// permutation by words over {0,1,2}: 0 marks the free channel, 1 a min-channel
// and 2 a max-channel of the first layer. Each connected component yields a
// word; a network yields the multiset ("sentence") of its component words.

/// Declaration order gives the tag order h < s < c.
enum class WordKind { head, stick, cycle };

struct Word {
  WordKind kind = WordKind::stick;
  std::string symbols;

  [[nodiscard]] int length() const { return static_cast<int>(symbols.size()); }
  /// "01221_h"
  [[nodiscard]] std::string to_string() const;
  [[nodiscard]] static Word parse(std::string_view text);

  auto operator<=>(const Word&) const = default;
};

[[nodiscard]] char tag_of(WordKind kind);

/// Multiset of words in canonical (sorted) order.
class Sentence {
 public:
  Sentence() = default;
  explicit Sentence(std::vector<Word> words);

  [[nodiscard]] const std::vector<Word>& words() const { return words_; }
  [[nodiscard]] int channels() const;
  [[nodiscard]] bool contains(const Word& w) const;
  /// "12_s;1221_c;1221_c"
  [[nodiscard]] std::string to_string() const;
  [[nodiscard]] static Sentence parse(std::string_view text);

  auto operator<=>(const Sentence&) const = default;

 private:
  std::vector<Word> words_;
};

// --- Grammars ----------------------------------------------------------------

/// General word grammar: Head = 0(12+21)*, Stick = (12+21)+, Cycle = 12(12+21)*.
/// The single-pair cycle 12_c (a second-layer comparator repeating a
/// first-layer one) is admitted here; it is excluded from the saturated forms.
[[nodiscard]] bool is_well_formed(const Word& w);
/// Restricted grammar for saturated networks.
[[nodiscard]] bool in_saturated_grammar(const Word& w);
/// Grammar for the reflection-reduced set: 0 | oHead | 12 | oStick | Cycle.
[[nodiscard]] bool in_reflection_grammar(const Word& w);

/// eHead = 0(12+21)*12, oHead = 0(12+21)*21,
/// eStick = 12(12+21)+21, oStick = 21(12+21)+12.
[[nodiscard]] bool is_e_head(const Word& w);
[[nodiscard]] bool is_o_head(const Word& w);
[[nodiscard]] bool is_e_stick(const Word& w);
[[nodiscard]] bool is_o_stick(const Word& w);

// --- Canonical forms ---------------------------------------------------------

/// Lexicographically smallest word among the maximal paths of the cycle that
/// start with a first-layer pair, in both directions.
[[nodiscard]] Word cycle_canonical(const Word& w);
/// Canonical form of any well-formed word (identity for heads).
[[nodiscard]] Word canonical(const Word& w);
[[nodiscard]] bool is_canonical(const Word& w);

/// Word of the reflected network: 1 and 2 exchanged, then re-canonicalized.
[[nodiscard]] Word reflect_word(const Word& w);
/// A cycle whose reflection is not equivalent to itself.
[[nodiscard]] bool is_asymmetric(const Word& w);

// --- Networks and words ------------------------------------------------------

/// Word of a connected two-layer network whose first layer is maximal.
/// Throws std::invalid_argument for disconnected networks or a non-maximal
/// first layer.
[[nodiscard]] Word word_of(const Network& net);
/// Sentence of a two-layer (or one-layer) network with maximal first layer.
[[nodiscard]] Sentence sentence_of(const Network& net);

/// Two-layer network with first layer F_n realizing the word.
[[nodiscard]] Network net_of(const Word& w);
/// Components laid out consecutively in sentence order, except that a Head
/// word is placed last so its free channel is channel n, as F_n requires.
[[nodiscard]] Network net_of(const Sentence& s);

// --- Generation --------------------------------------------------------------

enum class PrefixSet { Gn, RGn, Sn, RSn, Rn };

[[nodiscard]] PrefixSet parse_prefix_set(std::string_view name);
[[nodiscard]] std::string_view name_of(PrefixSet set);

/// Canonical words of exactly `length` symbols of the given kind.
[[nodiscard]] std::vector<Word> canonical_words(WordKind kind, int length);

/// Sentences of R(G_n), R(S_n) or R_n in canonical order.
/// Throws std::invalid_argument for Gn/Sn (use the layer generators) or for n
/// outside 1..40.
[[nodiscard]] std::vector<Sentence> generate_sentences(int n, PrefixSet set);
void for_each_sentence(int n, PrefixSet set, const std::function<void(const Sentence&)>& visit);

/// Every second layer over F_n (the members of G_n).
void for_each_second_layer(int n, const std::function<void(const Layer&)>& visit);

/// A_n: asymmetric cycle words of length n, counted modulo reflection.
[[nodiscard]] std::uint64_t asymmetric_cycle_count(int n);

/// |G_n|: number of matchings on n points.
[[nodiscard]] std::uint64_t telephone_number(int n);

/// Number of second layers over F_n whose network has this sentence.
[[nodiscard]] std::uint64_t class_size(const Sentence& s);

struct CountsRow {
  int n = 0;
  std::uint64_t g = 0;
  std::uint64_t rg = 0;
  std::uint64_t s = 0;
  std::uint64_t rs = 0;
  std::uint64_t r = 0;
  std::uint64_t a = 0;  // zero for odd n

  bool operator==(const CountsRow&) const = default;
};

/// |G_n| by recurrence, |S_n| as the sum of class sizes over R(S_n), the
/// R-columns by generation.
[[nodiscard]] CountsRow counts(int n);

}  // namespace sortnet
