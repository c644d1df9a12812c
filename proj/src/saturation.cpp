#include "sortnet/saturation.hpp"

#include <algorithm>
#include <array>
#include <ostream>
#include <stdexcept>

#include "sortnet/words.hpp"

namespace sortnet {

namespace {

constexpr int kMaxSemanticChannels = 8;
constexpr int kMaxSubsumptionChannels = 10;

/// Per-layer partner table: partner[k][c] is the channel compared with c at
/// layer k (0 if none); low[k][c] tells whether c receives the minimum.
struct Usage {
  int n = 0;
  std::vector<std::vector<int>> partner;
  std::vector<std::vector<char>> low;
};

Usage usage_of(const Network& net, int depth) {
  Usage u;
  u.n = net.channels();
  for (int k = 0; k < depth; ++k) {
    std::vector<int> p(static_cast<std::size_t>(u.n) + 1, 0);
    std::vector<char> l(static_cast<std::size_t>(u.n) + 1, 0);
    for (const auto& c : net.layer(k)) {
      p[static_cast<std::size_t>(c.low)] = c.high;
      p[static_cast<std::size_t>(c.high)] = c.low;
      l[static_cast<std::size_t>(c.low)] = 1;
    }
    u.partner.push_back(std::move(p));
    u.low.push_back(std::move(l));
  }
  return u;
}

/// Channel roles of a two-layer network with a maximal first layer.
struct Roles {
  int n = 0;
  std::vector<int> l1;
  std::vector<int> l2;
  std::vector<char> is_min;
  int free = 0;
};

Roles roles_of(const Network& net) {
  if (net.depth() < 1 || net.depth() > 2) {
    throw std::invalid_argument("saturation checks need a one- or two-layer network");
  }
  const int n = net.channels();
  if (!is_maximal(net.layer(0), n)) throw std::invalid_argument("first layer is not maximal");
  Roles r;
  r.n = n;
  r.l1.assign(static_cast<std::size_t>(n) + 1, 0);
  r.l2.assign(static_cast<std::size_t>(n) + 1, 0);
  r.is_min.assign(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& c : net.layer(0)) {
    r.l1[static_cast<std::size_t>(c.low)] = c.high;
    r.l1[static_cast<std::size_t>(c.high)] = c.low;
    r.is_min[static_cast<std::size_t>(c.low)] = 1;
  }
  if (net.depth() == 2) {
    for (const auto& c : net.layer(1)) {
      r.l2[static_cast<std::size_t>(c.low)] = c.high;
      r.l2[static_cast<std::size_t>(c.high)] = c.low;
    }
  }
  for (int c = 1; c <= n; ++c) {
    if (r.l1[static_cast<std::size_t>(c)] == 0) r.free = c;
  }
  return r;
}

Comparator ordered(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

/// Channels of an occurrence, in pattern order (a, b, c, d or f, a, b).
std::optional<std::array<int, 4>> find_roles(const Roles& r, PatternId id) {
  auto l1 = [&r](int c) { return r.l1[static_cast<std::size_t>(c)]; };
  auto l2 = [&r](int c) { return r.l2[static_cast<std::size_t>(c)]; };
  auto is_min = [&r](int c) { return r.is_min[static_cast<std::size_t>(c)] != 0; };
  const int n = r.n;
  switch (id) {
    case PatternId::P1a:
    case PatternId::P1b:
    case PatternId::P1c: {
      const int f = r.free;
      if (f == 0 || l2(f) != 0) return std::nullopt;
      for (int a = 1; a <= n; ++a) {
        if (!is_min(a)) continue;
        const int b = l1(a);
        const bool a_used = l2(a) != 0;
        const bool b_used = l2(b) != 0;
        const bool hit = (id == PatternId::P1a && a_used && !b_used) ||
                         (id == PatternId::P1b && !a_used && b_used) ||
                         (id == PatternId::P1c && !a_used && !b_used);
        if (hit) return std::array<int, 4>{f, a, b, 0};
      }
      return std::nullopt;
    }
    case PatternId::P2:
      for (int a = 1; a <= n; ++a) {
        if (!is_min(a) || l2(a) != 0) continue;
        for (int d = 1; d <= n; ++d) {
          if (d == a || l1(d) == 0 || is_min(d) || l2(d) != 0 || l1(d) == a) continue;
          return std::array<int, 4>{a, l1(a), l1(d), d};
        }
      }
      return std::nullopt;
    case PatternId::P3a:
    case PatternId::P3b: {
      const bool want_min = id == PatternId::P3b;
      for (int x = 1; x <= n; ++x) {
        if (l1(x) == 0 || is_min(x) != want_min || l2(x) != 0) continue;
        const int px = l1(x);
        const int py = l2(px);
        if (py == 0 || l1(py) == 0 || py == x) continue;
        const int y = l1(py);
        if (is_min(y) != want_min || l2(y) != 0) continue;
        return want_min ? std::array<int, 4>{x, px, y, py} : std::array<int, 4>{px, x, py, y};
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

std::vector<int> ones_per_channel(const OutputSet& s) {
  std::vector<int> ones(static_cast<std::size_t>(s.channels()), 0);
  for (BoolVec x : s) {
    for (int k = 0; k < s.channels(); ++k) ones[static_cast<std::size_t>(k)] += static_cast<int>((x >> k) & 1U);
  }
  return ones;
}

class SubsumptionSearch {
 public:
  SubsumptionSearch(const OutputSet& ob, const OutputSet& oa)
      : n_(oa.channels()), size_a_(oa.size()), ob_(ob.members()), ones_a_(ones_per_channel(oa)), ones_b_(ones_per_channel(ob)) {
    // prefix_a_[t] holds the restrictions of outputs(a) to channels 1..t.
    prefix_a_.resize(static_cast<std::size_t>(n_) + 1);
    for (int t = 0; t <= n_; ++t) {
      auto& seen = prefix_a_[static_cast<std::size_t>(t)];
      seen.assign(std::size_t{1} << t, 0);
      const BoolVec mask = t == 32 ? ~BoolVec{0} : ((BoolVec{1} << t) - 1);
      for (BoolVec x : oa) seen[x & mask] = 1;
    }
    partial_.assign(ob_.size(), 0);
    image_.assign(static_cast<std::size_t>(n_), 0);
    taken_.assign(static_cast<std::size_t>(n_) + 1, 0);
    zeros_a_.resize(ones_a_.size());
    zeros_b_.resize(ones_b_.size());
    for (std::size_t k = 0; k < ones_a_.size(); ++k) zeros_a_[k] = static_cast<int>(oa.size()) - ones_a_[k];
    for (std::size_t k = 0; k < ones_b_.size(); ++k) zeros_b_[k] = static_cast<int>(ob.size()) - ones_b_[k];
  }

  std::optional<Permutation> run() {
    if (ob_.size() > size_a_) return std::nullopt;
    if (search(0)) return image_;
    return std::nullopt;
  }

 private:
  // Chooses pi(t+1); x_(t+1) = y_pi(t+1) for every y in outputs(b).
  bool search(int t) {
    if (t == n_) return true;
    const auto& seen = prefix_a_[static_cast<std::size_t>(t) + 1];
    for (int c = 1; c <= n_; ++c) {
      if (taken_[static_cast<std::size_t>(c)] != 0) continue;
      if (ones_b_[static_cast<std::size_t>(c) - 1] > ones_a_[static_cast<std::size_t>(t)]) continue;
      if (zeros_b_[static_cast<std::size_t>(c) - 1] > zeros_a_[static_cast<std::size_t>(t)]) continue;
      bool ok = true;
      for (std::size_t i = 0; i < ob_.size(); ++i) {
        const BoolVec bit = (ob_[i] >> (c - 1)) & 1U;
        if (seen[partial_[i] | (bit << t)] == 0) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      for (std::size_t i = 0; i < ob_.size(); ++i) partial_[i] |= ((ob_[i] >> (c - 1)) & 1U) << t;
      taken_[static_cast<std::size_t>(c)] = 1;
      image_[static_cast<std::size_t>(t)] = c;
      if (search(t + 1)) return true;
      taken_[static_cast<std::size_t>(c)] = 0;
      const BoolVec clear = ~(BoolVec{1} << t);
      for (auto& p : partial_) p &= clear;
    }
    return false;
  }

  int n_;
  std::size_t size_a_;
  std::vector<BoolVec> ob_;
  std::vector<int> ones_a_, ones_b_, zeros_a_, zeros_b_;
  std::vector<std::vector<char>> prefix_a_;
  std::vector<BoolVec> partial_;
  Permutation image_;
  std::vector<char> taken_;
};

void require_semantic_size(const Network& net) {
  if (net.channels() > kMaxSemanticChannels) {
    throw std::length_error("semantic checks are limited to 8 channels");
  }
}

Network with_second_layer(const Network& net, Layer second) {
  normalize_layer(second, net.channels());
  Network out(net.channels());
  out.add_layer(net.layer(0));
  out.add_layer(std::move(second));
  return out;
}

}  // namespace

std::string_view name_of(PatternId id) {
  switch (id) {
    case PatternId::P1a:
      return "P1a";
    case PatternId::P1b:
      return "P1b";
    case PatternId::P1c:
      return "P1c";
    case PatternId::P2:
      return "P2";
    case PatternId::P3a:
      return "P3a";
    case PatternId::P3b:
      return "P3b";
  }
  return "?";
}

Pattern pattern_of(PatternId id) {
  switch (id) {
    case PatternId::P1a:
      return {3, {{{1, 2}}, {}}, {{}, {1}}};
    case PatternId::P1b:
      return {3, {{{1, 2}}, {}}, {{}, {2}}};
    case PatternId::P1c:
      return {3, {{{1, 2}}, {}}, {{}, {}}};
    case PatternId::P2:
      return {4, {{{1, 2}, {3, 4}}, {}}, {{}, {2, 3}}};
    case PatternId::P3a:
      return {4, {{{1, 2}, {3, 4}}, {{1, 3}}}, {{}, {}}};
    case PatternId::P3b:
      return {4, {{{1, 2}, {3, 4}}, {{2, 4}}}, {{}, {}}};
  }
  throw std::invalid_argument("unknown pattern");
}

bool occurs(const Pattern& p, const Network& net) {
  if (net.depth() < p.depth()) return false;
  const int m = p.channels;
  const int depth = p.depth();
  const Usage u = usage_of(net, depth);

  // Expected usage of every pattern channel at every layer.
  enum class Kind { unused, internal, external };
  struct Slot {
    Kind kind = Kind::unused;
    int partner = 0;
    bool low = false;
  };
  std::vector<std::vector<Slot>> slots(static_cast<std::size_t>(depth),
                                       std::vector<Slot>(static_cast<std::size_t>(m) + 1));
  for (int k = 0; k < depth; ++k) {
    auto& row = slots[static_cast<std::size_t>(k)];
    for (const auto& c : p.layers[static_cast<std::size_t>(k)]) {
      row[static_cast<std::size_t>(c.low)] = {Kind::internal, c.high, true};
      row[static_cast<std::size_t>(c.high)] = {Kind::internal, c.low, false};
    }
    if (static_cast<std::size_t>(k) < p.external.size()) {
      for (Channel c : p.external[static_cast<std::size_t>(k)]) row[static_cast<std::size_t>(c)].kind = Kind::external;
    }
  }

  std::vector<int> image(static_cast<std::size_t>(m) + 1, 0);
  std::vector<char> used(static_cast<std::size_t>(u.n) + 1, 0);

  auto fits = [&](int i, int c) {
    for (int k = 0; k < depth; ++k) {
      const Slot& s = slots[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
      const int q = u.partner[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)];
      switch (s.kind) {
        case Kind::unused:
          if (q != 0) return false;
          break;
        case Kind::external:
          if (q == 0) return false;
          break;
        case Kind::internal: {
          if (q == 0) return false;
          if ((u.low[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)] != 0) != s.low) return false;
          const int other = image[static_cast<std::size_t>(s.partner)];
          if (other != 0 && other != q) return false;
          break;
        }
      }
    }
    return true;
  };

  auto externals_leave = [&]() {
    for (int i = 1; i <= m; ++i) {
      const int c = image[static_cast<std::size_t>(i)];
      for (int k = 0; k < depth; ++k) {
        if (slots[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)].kind != Kind::external) continue;
        const int q = u.partner[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)];
        if (used[static_cast<std::size_t>(q)] != 0) return false;
      }
    }
    return true;
  };

  auto assign = [&](auto&& self, int i) -> bool {
    if (i > m) return externals_leave();
    for (int c = 1; c <= u.n; ++c) {
      if (used[static_cast<std::size_t>(c)] != 0 || !fits(i, c)) continue;
      image[static_cast<std::size_t>(i)] = c;
      used[static_cast<std::size_t>(c)] = 1;
      if (self(self, i + 1)) return true;
      used[static_cast<std::size_t>(c)] = 0;
      image[static_cast<std::size_t>(i)] = 0;
    }
    return false;
  };
  return assign(assign, 1);
}

bool contains_pattern(const Network& net, PatternId id) {
  if (net.depth() != 2) throw std::invalid_argument("patterns are matched on two-layer networks");
  return find_roles(roles_of(net), id).has_value();
}

std::optional<Comparator> pattern_fix(const Network& net, PatternId id) {
  const auto hit = find_roles(roles_of(net), id);
  if (!hit) return std::nullopt;
  const auto& ch = *hit;
  switch (id) {
    case PatternId::P1a:
      return ordered(ch[0], ch[2]);
    case PatternId::P1b:
    case PatternId::P1c:
      return ordered(ch[1], ch[0]);
    case PatternId::P2:
      return ordered(ch[0], ch[3]);
    case PatternId::P3a:
      return ordered(ch[1], ch[3]);
    case PatternId::P3b:
      return ordered(ch[0], ch[2]);
  }
  return std::nullopt;
}

bool is_redundant(const Network& net) {
  if (net.depth() != 2) throw std::invalid_argument("syntactic redundancy is defined for two-layer networks");
  const auto& first = net.layer(0);
  for (const auto& c : net.layer(1)) {
    if (std::find(first.begin(), first.end(), c) != first.end()) return true;
  }
  return false;
}

bool is_redundant_semantic(const Network& net) {
  require_semantic_size(net);
  const OutputSet full = outputs(net);
  for (int k = 0; k < net.depth(); ++k) {
    for (std::size_t i = 0; i < net.layer(k).size(); ++i) {
      Network removed(net.channels());
      for (int l = 0; l < net.depth(); ++l) {
        Layer layer = net.layer(l);
        if (l == k) layer.erase(layer.begin() + static_cast<std::ptrdiff_t>(i));
        removed.add_layer(std::move(layer));
      }
      const OutputSet fewer = outputs(removed);
      if (fewer.size() == full.size() && subsumes(fewer, full)) return true;
    }
  }
  return false;
}

bool is_saturated(const Network& net) {
  const Roles r = roles_of(net);
  if (net.generalized()) throw std::invalid_argument("saturation checks need a standard network");
  for (int c = 1; c <= r.n; ++c) {
    const int p = r.l2[static_cast<std::size_t>(c)];
    if (p != 0 && p == r.l1[static_cast<std::size_t>(c)]) return false;
  }
  return std::none_of(std::begin(kAllPatterns), std::end(kAllPatterns),
                      [&r](PatternId id) { return find_roles(r, id).has_value(); });
}

bool is_saturated_semantic(const Network& net) {
  require_semantic_size(net);
  const Roles r = roles_of(net);
  const Network two = net.depth() == 2 ? net : with_second_layer(net, {});
  if (is_redundant_semantic(two)) return false;
  const OutputSet base = outputs(two);
  for (int i = 1; i <= r.n; ++i) {
    if (r.l2[static_cast<std::size_t>(i)] != 0) continue;
    for (int j = i + 1; j <= r.n; ++j) {
      if (r.l2[static_cast<std::size_t>(j)] != 0 || r.l1[static_cast<std::size_t>(i)] == j) continue;
      Layer second = two.layer(1);
      second.push_back({i, j});
      if (subsumes(outputs(with_second_layer(two, std::move(second))), base)) return false;
    }
  }
  return true;
}

std::optional<Permutation> subsumes(const OutputSet& ob, const OutputSet& oa) {
  if (ob.channels() != oa.channels()) throw std::invalid_argument("output sets differ in length");
  if (oa.channels() > kMaxSubsumptionChannels) {
    throw std::length_error("subsumption search is limited to 10 channels");
  }
  return SubsumptionSearch(ob, oa).run();
}

std::optional<Permutation> subsumes(const Network& cb, const Network& ca) {
  if (cb.channels() != ca.channels()) throw std::invalid_argument("networks differ in channel count");
  if (ca.channels() > kMaxSubsumptionChannels) {
    throw std::length_error("subsumption search is limited to 10 channels");
  }
  return subsumes(outputs(cb), outputs(ca));
}

Network saturate(const Network& net) {
  (void)roles_of(net);
  Layer second = net.depth() == 2 ? net.layer(1) : Layer{};
  const auto& first = net.layer(0);
  std::erase_if(second, [&first](const Comparator& c) {
    return std::find(first.begin(), first.end(), c) != first.end();
  });
  Network current = with_second_layer(net, std::move(second));
  for (;;) {
    std::optional<Comparator> fix;
    for (PatternId id : kAllPatterns) {
      fix = pattern_fix(current, id);
      if (fix) break;
    }
    if (!fix) return current;
    Layer next = current.layer(1);
    next.push_back(*fix);
    current = with_second_layer(current, std::move(next));
  }
}

bool verify_conjecture(int n, std::ostream* csv) {
  if (n > kMaxSubsumptionChannels) throw std::length_error("subsumption search is limited to 10 channels");
  const auto classes = generate_sentences(n, PrefixSet::RSn);
  std::vector<OutputSet> outs;
  outs.reserve(classes.size());
  for (const auto& s : classes) outs.push_back(outputs(net_of(s)));
  if (csv != nullptr) *csv << "class_a,class_b,verdict\n";
  bool holds = true;
  for (std::size_t a = 0; a < classes.size(); ++a) {
    for (std::size_t b = 0; b < classes.size(); ++b) {
      if (a == b) continue;
      const bool sub = subsumes(outs[b], outs[a]).has_value();
      if (sub) holds = false;
      if (csv != nullptr) {
        *csv << classes[a].to_string() << ',' << classes[b].to_string() << ','
             << (sub ? "subsumed" : "incomparable") << '\n';
      }
    }
  }
  return holds;
}

std::uint64_t count_saturated_layers(int n) {
  if (n < 2) throw std::invalid_argument("count_saturated_layers needs n >= 2");
  const Layer first = first_layer(n);
  std::uint64_t count = 0;
  for_each_second_layer(n, [&](const Layer& second) {
    Network net(n);
    net.add_layer(first);
    net.add_layer(second);
    if (is_saturated(net)) ++count;
  });
  return count;
}

}  // namespace sortnet
