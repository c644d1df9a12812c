#include "sortnet/network.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace sortnet {

namespace {

void require_channels(int n, int limit, const char* what) {
  if (n < 0 || n > limit) {
    throw std::length_error(std::string(what) + ": channel count " + std::to_string(n) +
                            " exceeds limit " + std::to_string(limit));
  }
}

BoolVec apply_comparator(BoolVec x, const Comparator& c) {
  const BoolVec lo = BoolVec{1} << (c.low - 1);
  const BoolVec hi = BoolVec{1} << (c.high - 1);
  // min goes to `low`: only the pattern low=1, high=0 changes.
  if ((x & lo) != 0 && (x & hi) == 0) x ^= lo | hi;
  return x;
}

BoolVec mask_of(int n) { return n >= 32 ? ~BoolVec{0} : (BoolVec{1} << n) - 1; }

}  // namespace

void normalize_layer(Layer& layer, int channels) {
  std::vector<bool> used(static_cast<std::size_t>(channels) + 1, false);
  for (const auto& c : layer) {
    if (c.low < 1 || c.high < 1 || c.low > channels || c.high > channels) {
      throw std::invalid_argument("comparator (" + std::to_string(c.low) + "," +
                                  std::to_string(c.high) + ") outside channels 1.." +
                                  std::to_string(channels));
    }
    if (c.low == c.high) {
      throw std::invalid_argument("comparator joins channel " + std::to_string(c.low) +
                                  " to itself");
    }
    for (Channel ch : {c.low, c.high}) {
      if (used[static_cast<std::size_t>(ch)]) {
        throw std::invalid_argument("channel " + std::to_string(ch) +
                                    " used twice in one layer");
      }
      used[static_cast<std::size_t>(ch)] = true;
    }
  }
  std::sort(layer.begin(), layer.end(),
            [](const Comparator& a, const Comparator& b) { return a.first() < b.first(); });
}

Network::Network(int channels, std::vector<Layer> layers) : channels_(channels) {
  if (channels < 0) throw std::invalid_argument("negative channel count");
  layers_.reserve(layers.size());
  for (auto& l : layers) add_layer(std::move(l));
}

std::size_t Network::size() const {
  std::size_t total = 0;
  for (const auto& l : layers_) total += l.size();
  return total;
}

Network& Network::add_layer(Layer layer) {
  normalize_layer(layer, channels_);
  for (const auto& c : layer) generalized_ = generalized_ || c.reversed();
  layers_.push_back(std::move(layer));
  return *this;
}

Network Network::prefix(int k) const {
  if (k < 0 || k > depth()) throw std::invalid_argument("prefix length out of range");
  return Network(channels_, std::vector<Layer>(layers_.begin(), layers_.begin() + k));
}

Network Network::then(const Network& tail) const {
  if (tail.channels() != channels_) throw std::invalid_argument("channel count mismatch");
  Network out = *this;
  for (const auto& l : tail.layers()) out.add_layer(l);
  return out;
}

// --- VectorSet ---------------------------------------------------------------

VectorSet::VectorSet(int channels, std::vector<BoolVec> members)
    : channels_(channels), members_(std::move(members)) {
  const BoolVec mask = mask_of(channels);
  for (BoolVec x : members_) {
    if ((x & ~mask) != 0) throw std::invalid_argument("vector wider than channel count");
  }
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

bool VectorSet::contains(BoolVec x) const {
  return std::binary_search(members_.begin(), members_.end(), x);
}

bool VectorSet::subset_of(const VectorSet& other) const {
  return channels_ == other.channels_ &&
         std::includes(other.members_.begin(), other.members_.end(), members_.begin(),
                       members_.end());
}

// --- Boolean vectors ---------------------------------------------------------

BoolVec parse_boolvec(std::string_view bits) {
  if (bits.size() > 32) throw std::invalid_argument("boolean vector longer than 32");
  BoolVec x = 0;
  for (std::size_t k = 0; k < bits.size(); ++k) {
    if (bits[k] == '1') {
      x |= BoolVec{1} << k;
    } else if (bits[k] != '0') {
      throw std::invalid_argument("boolean vector must contain only 0 and 1");
    }
  }
  return x;
}

std::string to_string(BoolVec x, int n) {
  std::string s(static_cast<std::size_t>(n), '0');
  for (int k = 0; k < n; ++k) {
    if ((x >> k) & 1U) s[static_cast<std::size_t>(k)] = '1';
  }
  return s;
}

BoolVec sorted_of(BoolVec x, int n) {
  const int ones = std::popcount(x & mask_of(n));
  return mask_of(n) & ~mask_of(n - ones);
}

bool is_sorted(BoolVec x, int n) { return x == sorted_of(x, n); }

BoolVec reverse_complement(BoolVec x, int n) {
  BoolVec out = 0;
  for (int k = 0; k < n; ++k) {
    if (((x >> k) & 1U) == 0) out |= BoolVec{1} << (n - 1 - k);
  }
  return out;
}

// --- Evaluation --------------------------------------------------------------

BoolVec evaluate(const Network& net, BoolVec x) {
  require_channels(net.channels(), 32, "evaluate");
  for (const auto& layer : net.layers()) {
    for (const auto& c : layer) x = apply_comparator(x, c);
  }
  return x;
}

std::vector<BoolVec> evaluate_trace(const Network& net, BoolVec x) {
  require_channels(net.channels(), 32, "evaluate");
  std::vector<BoolVec> trace{x};
  for (const auto& layer : net.layers()) {
    for (const auto& c : layer) x = apply_comparator(x, c);
    trace.push_back(x);
  }
  return trace;
}

std::vector<int> evaluate(const Network& net, std::span<const int> values) {
  if (values.size() != static_cast<std::size_t>(net.channels())) {
    throw std::invalid_argument("input length differs from channel count");
  }
  std::vector<int> v(values.begin(), values.end());
  for (const auto& layer : net.layers()) {
    for (const auto& c : layer) {
      auto& lo = v[static_cast<std::size_t>(c.low - 1)];
      auto& hi = v[static_cast<std::size_t>(c.high - 1)];
      if (lo > hi) std::swap(lo, hi);
    }
  }
  return v;
}

OutputSet outputs(const Network& net) {
  const int n = net.channels();
  require_channels(n, kMaxEnumerationChannels, "outputs");
  const std::uint64_t count = std::uint64_t{1} << n;
  const std::size_t words = static_cast<std::size_t>((count + 63) / 64);

  // Column k holds the value of channel k+1 for every input, one bit per input.
  static constexpr std::array<std::uint64_t, 6> kLowPatterns = {
      0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
      0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL};
  std::vector<std::vector<std::uint64_t>> column(static_cast<std::size_t>(n),
                                                 std::vector<std::uint64_t>(words));
  for (int k = 0; k < n; ++k) {
    for (std::size_t w = 0; w < words; ++w) {
      column[static_cast<std::size_t>(k)][w] =
          k < 6 ? kLowPatterns[static_cast<std::size_t>(k)]
                : (((w >> (k - 6)) & 1U) != 0 ? ~std::uint64_t{0} : 0);
    }
  }
  for (const auto& layer : net.layers()) {
    for (const auto& c : layer) {
      auto& lo = column[static_cast<std::size_t>(c.low - 1)];
      auto& hi = column[static_cast<std::size_t>(c.high - 1)];
      for (std::size_t w = 0; w < words; ++w) {
        const std::uint64_t a = lo[w];
        const std::uint64_t b = hi[w];
        lo[w] = a & b;
        hi[w] = a | b;
      }
    }
  }

  std::vector<std::uint64_t> seen(words);
  for (std::uint64_t x = 0; x < count; ++x) {
    const std::size_t w = static_cast<std::size_t>(x >> 6);
    const unsigned bit = static_cast<unsigned>(x & 63U);
    BoolVec y = 0;
    for (int k = 0; k < n; ++k) {
      y |= static_cast<BoolVec>((column[static_cast<std::size_t>(k)][w] >> bit) & 1U) << k;
    }
    seen[y >> 6] |= std::uint64_t{1} << (y & 63U);
  }
  std::vector<BoolVec> members;
  for (std::size_t w = 0; w < words; ++w) {
    for (std::uint64_t bits = seen[w]; bits != 0; bits &= bits - 1) {
      members.push_back(static_cast<BoolVec>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits))));
    }
  }
  return OutputSet(n, std::move(members));
}

OutputSet image(const Network& net, const InputSet& inputs) {
  std::vector<BoolVec> out;
  out.reserve(inputs.size());
  for (BoolVec x : inputs) out.push_back(evaluate(net, x));
  return OutputSet(net.channels(), std::move(out));
}

bool is_sorting_network(const Network& net) {
  const int n = net.channels();
  for (BoolVec y : outputs(net)) {
    if (!is_sorted(y, n)) return false;
  }
  return true;
}

bool sorts(const Network& net, const InputSet& inputs) {
  if (inputs.channels() != net.channels()) throw std::invalid_argument("channel count mismatch");
  return std::all_of(inputs.begin(), inputs.end(), [&](BoolVec x) {
    return is_sorted(evaluate(net, x), net.channels());
  });
}

InputSet all_inputs(int n) {
  require_channels(n, kMaxEnumerationChannels, "all_inputs");
  std::vector<BoolVec> v(std::size_t{1} << n);
  std::iota(v.begin(), v.end(), BoolVec{0});
  return InputSet(n, std::move(v));
}

InputSet unsorted_inputs(int n) {
  require_channels(n, kMaxEnumerationChannels, "unsorted_inputs");
  std::vector<BoolVec> v;
  for (BoolVec x = 0; x < (BoolVec{1} << n); ++x) {
    if (!is_sorted(x, n)) v.push_back(x);
  }
  return InputSet(n, std::move(v));
}

InputSet unsorted_inputs(const Network& prefix) {
  const int n = prefix.channels();
  require_channels(n, kMaxEnumerationChannels, "unsorted_inputs");
  std::vector<BoolVec> v;
  for (BoolVec x = 0; x < (BoolVec{1} << n); ++x) {
    if (!is_sorted(evaluate(prefix, x), n)) v.push_back(x);
  }
  return InputSet(n, std::move(v));
}

InputSet windows(const InputSet& inputs, int pad) {
  const int n = inputs.channels();
  if (pad < 0 || pad >= n) {
    throw std::invalid_argument("window padding must satisfy 0 <= pad < n");
  }
  if (pad == 0) return inputs;
  std::vector<BoolVec> kept;
  for (BoolVec x : inputs) {
    for (int zeros = 0; zeros <= pad; ++zeros) {
      const int ones = pad - zeros;
      const BoolVec low_mask = mask_of(zeros);
      const BoolVec high_mask = mask_of(n) & ~mask_of(n - ones);
      if ((x & low_mask) == 0 && (x & high_mask) == high_mask) {
        kept.push_back(x);
        break;
      }
    }
  }
  return InputSet(n, std::move(kept));
}

// --- Symmetries --------------------------------------------------------------

Permutation identity_permutation(int n) {
  Permutation p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 1);
  return p;
}

bool is_permutation(std::span<const Channel> perm) {
  std::vector<bool> hit(perm.size() + 1, false);
  for (Channel c : perm) {
    if (c < 1 || static_cast<std::size_t>(c) > perm.size() || hit[static_cast<std::size_t>(c)]) {
      return false;
    }
    hit[static_cast<std::size_t>(c)] = true;
  }
  return true;
}

Permutation inverse(std::span<const Channel> perm) {
  Permutation inv(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    inv[static_cast<std::size_t>(perm[i] - 1)] = static_cast<Channel>(i + 1);
  }
  return inv;
}

BoolVec apply(std::span<const Channel> perm, BoolVec x) {
  BoolVec y = 0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if ((x >> i) & 1U) y |= BoolVec{1} << (perm[i] - 1);
  }
  return y;
}

Network permute(std::span<const Channel> perm, const Network& net) {
  if (perm.size() != static_cast<std::size_t>(net.channels()) || !is_permutation(perm)) {
    throw std::invalid_argument("not a permutation of the network's channels");
  }
  Network out(net.channels());
  for (const auto& layer : net.layers()) {
    Layer mapped;
    for (const auto& c : layer) {
      mapped.push_back({perm[static_cast<std::size_t>(c.low - 1)],
                        perm[static_cast<std::size_t>(c.high - 1)]});
    }
    out.add_layer(std::move(mapped));
  }
  return out;
}

Network untangle(const Network& net) {
  const int n = net.channels();
  // relabel[c-1]: channel that the original channel c currently stands for.
  Permutation relabel = identity_permutation(n);
  Network out(n);
  for (const auto& layer : net.layers()) {
    Layer fixed;
    for (const auto& c : layer) {
      Channel lo = relabel[static_cast<std::size_t>(c.low - 1)];
      Channel hi = relabel[static_cast<std::size_t>(c.high - 1)];
      if (lo > hi) {
        for (auto& r : relabel) {
          if (r == lo) {
            r = hi;
          } else if (r == hi) {
            r = lo;
          }
        }
        std::swap(lo, hi);
      }
      fixed.push_back({lo, hi});
    }
    out.add_layer(std::move(fixed));
  }
  return out;
}

Network reflect(const Network& net) {
  const int n = net.channels();
  Network out(n);
  for (const auto& layer : net.layers()) {
    Layer mirrored;
    for (const auto& c : layer) mirrored.push_back({n - c.high + 1, n - c.low + 1});
    out.add_layer(std::move(mirrored));
  }
  return out;
}

Layer first_layer(int n, FirstLayerStyle style) {
  if (n < 2) throw std::invalid_argument("a first layer needs at least two channels");
  Layer layer;
  for (int i = 1; i <= n / 2; ++i) {
    if (style == FirstLayerStyle::adjacent) {
      layer.push_back({2 * i - 1, 2 * i});
    } else {
      layer.push_back({i, n - i + 1});
    }
  }
  normalize_layer(layer, n);
  return layer;
}

bool is_maximal(const Layer& layer, int n) {
  return layer.size() == static_cast<std::size_t>(n / 2);
}

// --- Graph representation ----------------------------------------------------

GraphRep graph_of(const Network& net) {
  GraphRep g;
  // last[c] = (vertex, label) of the most recent output on channel c.
  std::vector<std::pair<int, int>> last(static_cast<std::size_t>(net.channels()) + 1, {-1, 0});
  for (const auto& layer : net.layers()) {
    for (const auto& c : layer) {
      const int v = g.vertices++;
      for (Channel ch : {c.low, c.high}) {
        const auto [u, label] = last[static_cast<std::size_t>(ch)];
        if (u >= 0) g.edges.push_back({u, label, v});
      }
      last[static_cast<std::size_t>(c.low)] = {v, 1};
      last[static_cast<std::size_t>(c.high)] = {v, 2};
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

bool iso_bruteforce(const GraphRep& a, const GraphRep& b) {
  constexpr int kLimit = 10;
  if (a.vertices > kLimit || b.vertices > kLimit) {
    throw std::length_error("iso_bruteforce supports at most 10 vertices");
  }
  if (a.vertices != b.vertices || a.edges.size() != b.edges.size()) return false;
  const int n = a.vertices;

  // label[u][v] bitmask: bit (l-1) set when (u, l, v) is an edge.
  auto matrix = [n](const GraphRep& g) {
    std::vector<std::vector<unsigned>> m(static_cast<std::size_t>(n),
                                         std::vector<unsigned>(static_cast<std::size_t>(n), 0));
    for (const auto& e : g.edges) {
      m[static_cast<std::size_t>(e.from)][static_cast<std::size_t>(e.to)] |= 1U << (e.label - 1);
    }
    return m;
  };
  const auto ma = matrix(a);
  const auto mb = matrix(b);

  auto signature = [n](const std::vector<std::vector<unsigned>>& m, int v) {
    std::array<int, 4> s{};  // out-1, out-2, in-1, in-2
    for (int u = 0; u < n; ++u) {
      const unsigned out = m[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)];
      const unsigned in = m[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)];
      s[0] += (out & 1U) != 0;
      s[1] += (out & 2U) != 0;
      s[2] += (in & 1U) != 0;
      s[3] += (in & 2U) != 0;
    }
    return s;
  };

  std::vector<int> map(static_cast<std::size_t>(n), -1);
  std::vector<bool> taken(static_cast<std::size_t>(n), false);
  auto extend = [&](auto&& self, int v) -> bool {
    if (v == n) return true;
    const auto sig = signature(ma, v);
    for (int w = 0; w < n; ++w) {
      if (taken[static_cast<std::size_t>(w)] || signature(mb, w) != sig) continue;
      bool ok = ma[static_cast<std::size_t>(v)][static_cast<std::size_t>(v)] ==
                mb[static_cast<std::size_t>(w)][static_cast<std::size_t>(w)];
      for (int u = 0; ok && u < v; ++u) {
        const auto mu = static_cast<std::size_t>(map[static_cast<std::size_t>(u)]);
        ok = ma[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] == mb[mu][static_cast<std::size_t>(w)] &&
             ma[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] == mb[static_cast<std::size_t>(w)][mu];
      }
      if (!ok) continue;
      map[static_cast<std::size_t>(v)] = w;
      taken[static_cast<std::size_t>(w)] = true;
      if (self(self, v + 1)) return true;
      taken[static_cast<std::size_t>(w)] = false;
    }
    return false;
  };
  return extend(extend, 0);
}

// --- Text format -------------------------------------------------------------

nlohmann::json to_json(const Network& net) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& layer : net.layers()) {
    nlohmann::json l = nlohmann::json::array();
    for (const auto& c : layer) l.push_back({c.low, c.high});
    layers.push_back(std::move(l));
  }
  return {{"n", net.channels()}, {"layers", std::move(layers)}};
}

Network network_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("layers")) {
    throw std::invalid_argument("network JSON needs fields \"n\" and \"layers\"");
  }
  if (!j.at("n").is_number_integer()) throw std::invalid_argument("\"n\" must be an integer");
  const int n = j.at("n").get<int>();
  const auto& layers = j.at("layers");
  if (!layers.is_array()) throw std::invalid_argument("\"layers\" must be an array");
  Network net(n);
  std::size_t index = 0;
  for (const auto& l : layers) {
    if (!l.is_array()) {
      throw std::invalid_argument("layer " + std::to_string(index) + " is not an array");
    }
    Layer layer;
    for (const auto& c : l) {
      if (!c.is_array() || c.size() != 2 || !c[0].is_number_integer() ||
          !c[1].is_number_integer()) {
        throw std::invalid_argument("layer " + std::to_string(index) +
                                    ": comparator must be a pair of integers");
      }
      layer.push_back({c[0].get<int>(), c[1].get<int>()});
    }
    net.add_layer(std::move(layer));
    ++index;
  }
  return net;
}

std::string to_json_string(const Network& net) { return to_json(net).dump(); }

Network parse_network(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("network JSON: ") + e.what());
  }
  return network_from_json(j);
}

}  // namespace sortnet
