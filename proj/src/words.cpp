#include "sortnet/words.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace sortnet {

namespace {

constexpr int kMaxGenerationChannels = 40;

bool pairs_ok(std::string_view s) {
  if (s.size() % 2 != 0) return false;
  for (std::size_t k = 0; k < s.size(); k += 2) {
    const auto p = s.substr(k, 2);
    if (p != "12" && p != "21") return false;
  }
  return true;
}

std::string swapped(std::string s) {
  for (char& ch : s) {
    if (ch == '1') {
      ch = '2';
    } else if (ch == '2') {
      ch = '1';
    }
  }
  return s;
}

std::string reversed(std::string s) {
  std::reverse(s.begin(), s.end());
  return s;
}

std::string rotated(const std::string& s, std::size_t by) {
  return s.substr(by) + s.substr(0, by);
}

/// Every even rotation of s and of its reverse: the words of all maximal
/// paths of the cycle that begin with a first-layer pair.
std::vector<std::string> cycle_readings(const std::string& s) {
  std::vector<std::string> out;
  const std::string r = reversed(s);
  for (std::size_t k = 0; k < s.size(); k += 2) {
    out.push_back(rotated(s, k));
    out.push_back(rotated(r, k));
  }
  return out;
}

std::string min_cycle_reading(const std::string& s) {
  const auto readings = cycle_readings(s);
  return *std::min_element(readings.begin(), readings.end());
}

/// Number of channel permutations preserving F_n that fix this component.
std::uint64_t automorphisms(const Word& w) {
  switch (w.kind) {
    case WordKind::head:
      return 1;
    case WordKind::stick:
      return w.symbols == reversed(w.symbols) ? 2 : 1;
    case WordKind::cycle: {
      const auto readings = cycle_readings(w.symbols);
      return static_cast<std::uint64_t>(
          std::count(readings.begin(), readings.end(), w.symbols));
    }
  }
  return 1;
}

std::uint64_t factorial(int k) {
  std::uint64_t f = 1;
  for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

struct Roles {
  int n = 0;
  std::vector<int> l1;      // first-layer partner, 0 if free
  std::vector<int> l2;      // second-layer partner, 0 if unused
  std::vector<char> symbol;  // '0', '1' or '2'
};

Roles roles_of(const Network& net) {
  if (net.depth() < 1 || net.depth() > 2) {
    throw std::invalid_argument("word representation needs a one- or two-layer network");
  }
  if (net.generalized()) throw std::invalid_argument("word representation needs a standard network");
  const int n = net.channels();
  if (!is_maximal(net.layer(0), n)) {
    throw std::invalid_argument("word representation needs a maximal first layer");
  }
  Roles r;
  r.n = n;
  r.l1.assign(static_cast<std::size_t>(n) + 1, 0);
  r.l2.assign(static_cast<std::size_t>(n) + 1, 0);
  r.symbol.assign(static_cast<std::size_t>(n) + 1, '0');
  for (const auto& c : net.layer(0)) {
    r.l1[static_cast<std::size_t>(c.low)] = c.high;
    r.l1[static_cast<std::size_t>(c.high)] = c.low;
    r.symbol[static_cast<std::size_t>(c.low)] = '1';
    r.symbol[static_cast<std::size_t>(c.high)] = '2';
  }
  if (net.depth() == 2) {
    for (const auto& c : net.layer(1)) {
      r.l2[static_cast<std::size_t>(c.low)] = c.high;
      r.l2[static_cast<std::size_t>(c.high)] = c.low;
    }
  }
  return r;
}

std::vector<std::vector<int>> components(const Roles& r) {
  std::vector<int> comp(static_cast<std::size_t>(r.n) + 1, -1);
  std::vector<std::vector<int>> out;
  for (int c = 1; c <= r.n; ++c) {
    if (comp[static_cast<std::size_t>(c)] >= 0) continue;
    const int id = static_cast<int>(out.size());
    out.emplace_back();
    std::vector<int> stack{c};
    comp[static_cast<std::size_t>(c)] = id;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      out.back().push_back(v);
      for (int u : {r.l1[static_cast<std::size_t>(v)], r.l2[static_cast<std::size_t>(v)]}) {
        if (u != 0 && comp[static_cast<std::size_t>(u)] < 0) {
          comp[static_cast<std::size_t>(u)] = id;
          stack.push_back(u);
        }
      }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

/// Word read along the path that starts at `start` and first takes `first_step`
/// edges (1 = first layer, 2 = second layer), alternating afterwards, stopping
/// when the path would revisit `start` or runs out of edges.
std::string walk(const Roles& r, int start, int first_step) {
  std::string w(1, r.symbol[static_cast<std::size_t>(start)]);
  int cur = start;
  int step = first_step;
  for (;;) {
    const int next = step == 1 ? r.l1[static_cast<std::size_t>(cur)] : r.l2[static_cast<std::size_t>(cur)];
    if (next == 0 || next == start) break;
    w.push_back(r.symbol[static_cast<std::size_t>(next)]);
    cur = next;
    step = 3 - step;
  }
  return w;
}

Word component_word(const Roles& r, const std::vector<int>& channels) {
  for (int c : channels) {
    if (r.l1[static_cast<std::size_t>(c)] == 0) return {WordKind::head, walk(r, c, 2)};
  }
  std::vector<int> ends;
  for (int c : channels) {
    if (r.l2[static_cast<std::size_t>(c)] == 0) ends.push_back(c);
  }
  if (!ends.empty()) {
    std::string best = walk(r, ends.front(), 1);
    for (int e : ends) best = std::min(best, walk(r, e, 1));
    return {WordKind::stick, best};
  }
  std::string best = walk(r, channels.front(), 1);
  for (int c : channels) best = std::min(best, walk(r, c, 1));
  return {WordKind::cycle, best};
}

/// Channel of type x ('1' or '2') in pair k of a block starting after `offset`.
int pair_channel(int offset, int k, char x) { return offset + 2 * k + (x - '0'); }

void place_word(const Word& w, int offset, Layer& second) {
  auto connect = [&second](int a, int b) { second.push_back({std::min(a, b), std::max(a, b)}); };
  const std::string& s = w.symbols;
  if (w.kind == WordKind::head) {
    const int pairs = (w.length() - 1) / 2;
    const int free = offset + w.length();
    if (pairs == 0) return;
    connect(free, pair_channel(offset, 0, s[1]));
    for (int k = 0; k + 1 < pairs; ++k) {
      connect(pair_channel(offset, k, s[static_cast<std::size_t>(2 + 2 * k)]),
              pair_channel(offset, k + 1, s[static_cast<std::size_t>(3 + 2 * k)]));
    }
    return;
  }
  const int pairs = w.length() / 2;
  for (int k = 0; k + 1 < pairs; ++k) {
    connect(pair_channel(offset, k, s[static_cast<std::size_t>(2 * k + 1)]),
            pair_channel(offset, k + 1, s[static_cast<std::size_t>(2 * k + 2)]));
  }
  if (w.kind == WordKind::cycle) {
    connect(pair_channel(offset, pairs - 1, s.back()), pair_channel(offset, 0, s.front()));
  }
}

std::vector<std::string> pair_strings(int pairs) {
  std::vector<std::string> out;
  const std::uint64_t count = std::uint64_t{1} << pairs;
  out.reserve(static_cast<std::size_t>(count));
  for (std::uint64_t bits = 0; bits < count; ++bits) {
    std::string s;
    for (int k = pairs - 1; k >= 0; --k) s += ((bits >> k) & 1U) != 0 ? "21" : "12";
    out.push_back(std::move(s));
  }
  return out;
}

bool is_zero_head_or_single_stick(const Word& w) {
  return (w.kind == WordKind::head && w.symbols == "0") ||
         (w.kind == WordKind::stick && w.symbols == "12");
}

bool only_cycles_besides_trivial(const Sentence& s) {
  const auto& ws = s.words();
  const auto trivial = std::find_if(ws.begin(), ws.end(), is_zero_head_or_single_stick);
  if (trivial == ws.end()) return true;
  for (auto it = ws.begin(); it != ws.end(); ++it) {
    if (it != trivial && it->kind != WordKind::cycle) return false;
  }
  return true;
}

bool accepts(PrefixSet set, const Sentence& s) {
  const auto& ws = s.words();
  switch (set) {
    case PrefixSet::RGn:
      return true;
    case PrefixSet::RSn: {
      if (!only_cycles_besides_trivial(s)) return false;
      const bool has_e = std::any_of(ws.begin(), ws.end(),
                                     [](const Word& w) { return is_e_head(w) || is_e_stick(w); });
      const bool has_o = std::any_of(ws.begin(), ws.end(),
                                     [](const Word& w) { return is_o_head(w) || is_o_stick(w); });
      return !(has_e && has_o);
    }
    case PrefixSet::Rn: {
      if (!only_cycles_besides_trivial(s)) return false;
      const bool has_o = std::any_of(ws.begin(), ws.end(),
                                     [](const Word& w) { return is_o_head(w) || is_o_stick(w); });
      if (has_o) return true;
      std::map<int, std::set<Word>> asymmetric;
      for (const auto& w : ws) {
        if (w.kind == WordKind::cycle && is_asymmetric(w)) asymmetric[w.length()].insert(w);
      }
      for (const auto& [length, distinct] : asymmetric) {
        if (distinct.size() == 1) {
          const Word& w = *distinct.begin();
          return w < reflect_word(w);
        }
      }
      return true;
    }
    case PrefixSet::Gn:
    case PrefixSet::Sn:
      break;
  }
  throw std::invalid_argument("sentence filters exist only for RGn, RSn and Rn");
}

bool word_in_pool(PrefixSet set, const Word& w) {
  switch (set) {
    case PrefixSet::RGn:
      return true;
    case PrefixSet::RSn:
      return in_saturated_grammar(w);
    case PrefixSet::Rn:
      return in_reflection_grammar(w);
    default:
      return false;
  }
}

}  // namespace

// --- Word / Sentence ----------------------------------------------------------

char tag_of(WordKind kind) {
  switch (kind) {
    case WordKind::head:
      return 'h';
    case WordKind::stick:
      return 's';
    case WordKind::cycle:
      return 'c';
  }
  return '?';
}

std::string Word::to_string() const { return symbols + '_' + tag_of(kind); }

Word Word::parse(std::string_view text) {
  const auto bar = text.rfind('_');
  if (bar == std::string_view::npos || bar + 2 != text.size()) {
    throw std::invalid_argument("word \"" + std::string(text) + "\" lacks a _h/_s/_c tag");
  }
  Word w;
  switch (text.back()) {
    case 'h':
      w.kind = WordKind::head;
      break;
    case 's':
      w.kind = WordKind::stick;
      break;
    case 'c':
      w.kind = WordKind::cycle;
      break;
    default:
      throw std::invalid_argument("unknown word tag in \"" + std::string(text) + "\"");
  }
  w.symbols = std::string(text.substr(0, bar));
  if (!is_well_formed(w)) throw std::invalid_argument("malformed word \"" + std::string(text) + "\"");
  return w;
}

Sentence::Sentence(std::vector<Word> words) : words_(std::move(words)) {
  std::sort(words_.begin(), words_.end());
}

int Sentence::channels() const {
  return std::accumulate(words_.begin(), words_.end(), 0,
                         [](int acc, const Word& w) { return acc + w.length(); });
}

bool Sentence::contains(const Word& w) const {
  return std::binary_search(words_.begin(), words_.end(), w);
}

std::string Sentence::to_string() const {
  std::string out;
  for (const auto& w : words_) {
    if (!out.empty()) out += ';';
    out += w.to_string();
  }
  return out;
}

Sentence Sentence::parse(std::string_view text) {
  std::vector<Word> words;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto semi = text.find(';', start);
    const auto piece = text.substr(start, semi == std::string_view::npos ? text.size() - start : semi - start);
    words.push_back(Word::parse(piece));
    if (semi == std::string_view::npos) break;
    start = semi + 1;
  }
  const auto heads = std::count_if(words.begin(), words.end(),
                                   [](const Word& w) { return w.kind == WordKind::head; });
  if (heads > 1) throw std::invalid_argument("a sentence holds at most one Head-word");
  return Sentence(std::move(words));
}

// --- Grammars ----------------------------------------------------------------

bool is_well_formed(const Word& w) {
  const std::string_view s = w.symbols;
  switch (w.kind) {
    case WordKind::head:
      return !s.empty() && s.front() == '0' && pairs_ok(s.substr(1));
    case WordKind::stick:
      return !s.empty() && pairs_ok(s);
    case WordKind::cycle:
      return s.starts_with("12") && pairs_ok(s);
  }
  return false;
}

bool is_e_head(const Word& w) {
  return w.kind == WordKind::head && is_well_formed(w) && w.length() >= 3 && w.symbols.ends_with("12");
}

bool is_o_head(const Word& w) {
  return w.kind == WordKind::head && is_well_formed(w) && w.length() >= 3 && w.symbols.ends_with("21");
}

bool is_e_stick(const Word& w) {
  return w.kind == WordKind::stick && is_well_formed(w) && w.length() >= 6 &&
         w.symbols.starts_with("12") && w.symbols.ends_with("21");
}

bool is_o_stick(const Word& w) {
  return w.kind == WordKind::stick && is_well_formed(w) && w.length() >= 6 &&
         w.symbols.starts_with("21") && w.symbols.ends_with("12");
}

bool in_saturated_grammar(const Word& w) {
  if (!is_well_formed(w)) return false;
  switch (w.kind) {
    case WordKind::head:
      return true;
    case WordKind::stick:
      return w.symbols == "12" || is_e_stick(w) || is_o_stick(w);
    case WordKind::cycle:
      return w.length() >= 4;
  }
  return false;
}

bool in_reflection_grammar(const Word& w) {
  if (!is_well_formed(w)) return false;
  switch (w.kind) {
    case WordKind::head:
      return w.symbols == "0" || is_o_head(w);
    case WordKind::stick:
      return w.symbols == "12" || is_o_stick(w);
    case WordKind::cycle:
      return w.length() >= 4;
  }
  return false;
}

// --- Canonical forms ---------------------------------------------------------

Word cycle_canonical(const Word& w) {
  if (w.kind != WordKind::cycle) throw std::invalid_argument("cycle_canonical needs a Cycle-word");
  if (!pairs_ok(w.symbols) || w.symbols.empty()) {
    throw std::invalid_argument("malformed cycle word \"" + w.to_string() + "\"");
  }
  return {WordKind::cycle, min_cycle_reading(w.symbols)};
}

Word canonical(const Word& w) {
  switch (w.kind) {
    case WordKind::head:
      return w;
    case WordKind::stick:
      return {WordKind::stick, std::min(w.symbols, reversed(w.symbols))};
    case WordKind::cycle:
      return cycle_canonical(w);
  }
  return w;
}

bool is_canonical(const Word& w) { return is_well_formed(w) && canonical(w) == w; }

Word reflect_word(const Word& w) {
  if (!is_well_formed(w)) throw std::invalid_argument("malformed word \"" + w.to_string() + "\"");
  return canonical(Word{w.kind, swapped(w.symbols)});
}

bool is_asymmetric(const Word& w) {
  if (w.kind != WordKind::cycle) throw std::invalid_argument("is_asymmetric needs a Cycle-word");
  return reflect_word(w) != cycle_canonical(w);
}

// --- Networks and words ------------------------------------------------------

Word word_of(const Network& net) {
  const Roles r = roles_of(net);
  const auto comps = components(r);
  if (comps.size() != 1) throw std::invalid_argument("word_of needs a connected network");
  return component_word(r, comps.front());
}

Sentence sentence_of(const Network& net) {
  const Roles r = roles_of(net);
  std::vector<Word> words;
  for (const auto& comp : components(r)) words.push_back(component_word(r, comp));
  return Sentence(std::move(words));
}

Network net_of(const Word& w) { return net_of(Sentence({w})); }

Network net_of(const Sentence& s) {
  for (const auto& w : s.words()) {
    if (!is_well_formed(w)) throw std::invalid_argument("malformed word \"" + w.to_string() + "\"");
  }
  const int n = s.channels();
  Layer second;
  int offset = 0;
  const Word* head = nullptr;
  for (const auto& w : s.words()) {
    if (w.kind == WordKind::head) {
      if (head != nullptr) throw std::invalid_argument("a sentence holds at most one Head-word");
      head = &w;
      continue;
    }
    place_word(w, offset, second);
    offset += w.length();
  }
  if (head != nullptr) place_word(*head, offset, second);
  Network net(n);
  if (n >= 2) net.add_layer(first_layer(n));
  else net.add_layer({});
  net.add_layer(std::move(second));
  return net;
}

// --- Generation --------------------------------------------------------------

PrefixSet parse_prefix_set(std::string_view name) {
  if (name == "gn") return PrefixSet::Gn;
  if (name == "rgn") return PrefixSet::RGn;
  if (name == "sn") return PrefixSet::Sn;
  if (name == "rsn") return PrefixSet::RSn;
  if (name == "rn") return PrefixSet::Rn;
  throw std::invalid_argument("unknown prefix set \"" + std::string(name) + "\"");
}

std::string_view name_of(PrefixSet set) {
  switch (set) {
    case PrefixSet::Gn:
      return "gn";
    case PrefixSet::RGn:
      return "rgn";
    case PrefixSet::Sn:
      return "sn";
    case PrefixSet::RSn:
      return "rsn";
    case PrefixSet::Rn:
      return "rn";
  }
  return "?";
}

std::vector<Word> canonical_words(WordKind kind, int length) {
  std::vector<Word> out;
  if (length < 1) return out;
  if (kind == WordKind::head) {
    if (length % 2 == 0) return out;
    for (auto& p : pair_strings((length - 1) / 2)) out.push_back({WordKind::head, "0" + p});
    return out;
  }
  if (length % 2 != 0) return out;
  for (auto& p : pair_strings(length / 2)) {
    Word w{kind, std::move(p)};
    if (kind == WordKind::cycle && !w.symbols.starts_with("12")) continue;
    if (canonical(w) == w) out.push_back(std::move(w));
  }
  return out;
}

void for_each_sentence(int n, PrefixSet set, const std::function<void(const Sentence&)>& visit) {
  if (set == PrefixSet::Gn || set == PrefixSet::Sn) {
    throw std::invalid_argument("Gn and Sn are sets of layers; use for_each_second_layer");
  }
  if (n < 1 || n > kMaxGenerationChannels) {
    throw std::invalid_argument("sentence generation supports 1 <= n <= 40");
  }
  std::vector<Word> pool;
  for (int len = 1; len <= n; ++len) {
    for (WordKind kind : {WordKind::head, WordKind::stick, WordKind::cycle}) {
      for (auto& w : canonical_words(kind, len)) {
        if (word_in_pool(set, w)) pool.push_back(std::move(w));
      }
    }
  }
  std::sort(pool.begin(), pool.end());

  std::vector<Word> chosen;
  auto recurse = [&](auto&& self, std::size_t from, int remaining, bool have_head) -> void {
    if (remaining == 0) {
      Sentence s(chosen);
      if (accepts(set, s)) visit(s);
      return;
    }
    for (std::size_t i = from; i < pool.size(); ++i) {
      const Word& w = pool[i];
      if (w.length() > remaining) continue;
      const bool head = w.kind == WordKind::head;
      if (head && have_head) continue;
      chosen.push_back(w);
      self(self, head ? i + 1 : i, remaining - w.length(), have_head || head);
      chosen.pop_back();
    }
  };
  recurse(recurse, 0, n, false);
}

std::vector<Sentence> generate_sentences(int n, PrefixSet set) {
  std::vector<Sentence> out;
  for_each_sentence(n, set, [&out](const Sentence& s) { out.push_back(s); });
  return out;
}

void for_each_second_layer(int n, const std::function<void(const Layer&)>& visit) {
  if (n < 0 || n > 32) throw std::invalid_argument("second-layer enumeration supports n <= 32");
  std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
  Layer layer;
  auto recurse = [&](auto&& self, int c) -> void {
    while (c <= n && used[static_cast<std::size_t>(c)]) ++c;
    if (c > n) {
      visit(layer);
      return;
    }
    used[static_cast<std::size_t>(c)] = true;
    self(self, c + 1);
    for (int d = c + 1; d <= n; ++d) {
      if (used[static_cast<std::size_t>(d)]) continue;
      used[static_cast<std::size_t>(d)] = true;
      layer.push_back({c, d});
      self(self, c + 1);
      layer.pop_back();
      used[static_cast<std::size_t>(d)] = false;
    }
    used[static_cast<std::size_t>(c)] = false;
  };
  recurse(recurse, 1);
}

std::uint64_t asymmetric_cycle_count(int n) {
  if (n % 2 != 0 || n < 2) return 0;
  std::uint64_t asymmetric = 0;
  for (const auto& w : canonical_words(WordKind::cycle, n)) {
    if (is_asymmetric(w)) ++asymmetric;
  }
  return asymmetric / 2;
}

std::uint64_t telephone_number(int n) {
  if (n < 0) throw std::invalid_argument("negative channel count");
  std::uint64_t prev = 1;  // a(0)
  std::uint64_t cur = 1;   // a(1)
  if (n == 0) return prev;
  for (int k = 2; k <= n; ++k) {
    const std::uint64_t next = cur + static_cast<std::uint64_t>(k - 1) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::uint64_t class_size(const Sentence& s) {
  std::uint64_t stabilizer = 1;
  const auto& ws = s.words();
  for (std::size_t i = 0; i < ws.size();) {
    std::size_t j = i;
    while (j < ws.size() && ws[j] == ws[i]) ++j;
    const auto multiplicity = static_cast<int>(j - i);
    stabilizer *= factorial(multiplicity);
    for (int k = 0; k < multiplicity; ++k) stabilizer *= automorphisms(ws[i]);
    i = j;
  }
  return factorial(s.channels() / 2) / stabilizer;
}

CountsRow counts(int n) {
  CountsRow row;
  row.n = n;
  row.g = telephone_number(n);
  for_each_sentence(n, PrefixSet::RGn, [&row](const Sentence&) { ++row.rg; });
  for_each_sentence(n, PrefixSet::RSn, [&row](const Sentence& s) {
    ++row.rs;
    row.s += class_size(s);
  });
  for_each_sentence(n, PrefixSet::Rn, [&row](const Sentence&) { ++row.r; });
  row.a = asymmetric_cycle_count(n);
  return row;
}

}  // namespace sortnet
