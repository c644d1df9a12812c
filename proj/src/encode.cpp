#include "sortnet/encode.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sortnet {

namespace {

// Constant literals; negation maps one onto the other.
constexpr int kTrue = std::numeric_limits<int>::max();
constexpr int kFalse = -kTrue;

int constant(bool value) { return value ? kTrue : kFalse; }

/// Collects clauses with constant folding and per-fragment deduplication.
class Fragment {
 public:
  explicit Fragment(int variables) { cnf_.variables = variables; }

  void add(std::initializer_list<int> lits) {
    std::vector<int> clause;
    clause.reserve(lits.size());
    for (int lit : lits) {
      if (lit == kTrue) return;
      if (lit == kFalse) continue;
      clause.push_back(lit);
    }
    std::sort(clause.begin(), clause.end());
    clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
    for (std::size_t i = 0; i + 1 < clause.size(); ++i) {
      for (std::size_t j = i + 1; j < clause.size(); ++j) {
        if (clause[i] == -clause[j]) return;
      }
    }
    if (clause.empty()) {
      contradiction();
      return;
    }
    push(std::move(clause));
  }

  void add(const std::vector<int>& lits) {
    if (lits.empty()) {
      contradiction();
      return;
    }
    std::vector<int> clause = lits;
    std::sort(clause.begin(), clause.end());
    clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
    push(std::move(clause));
  }

  /// An unsatisfiable pair of units over a fresh variable.
  void contradiction() {
    const int v = ++cnf_.variables;
    push({v});
    push({-v});
  }

  Cnf take() { return std::move(cnf_); }

 private:
  void push(std::vector<int> clause) {
    if (seen_.insert(clause).second) cnf_.clauses.push_back(std::move(clause));
  }

  Cnf cnf_;
  std::set<std::vector<int>> seen_;
};

bool bit(BoolVec x, int k) { return ((x >> (k - 1)) & 1U) != 0; }

}  // namespace

void Cnf::append(const Cnf& other) {
  variables = std::max(variables, other.variables);
  clauses.insert(clauses.end(), other.clauses.begin(), other.clauses.end());
}

VarMap::VarMap(int n, int depth, std::vector<BoolVec> inputs)
    : n_(n), d_(depth), pairs_(n * (n - 1) / 2), inputs_(std::move(inputs)) {
  if (n < 1 || n > 32) throw std::invalid_argument("channel count must be in 1..32");
  if (depth < 0) throw std::invalid_argument("negative depth");
  const int inner = std::max(0, d_ - 1);
  total_ = c_count() + u_count() + static_cast<int>(inputs_.size()) * inner * n_;
}

int VarMap::c(int l, int i, int j) const {
  if (l < 1 || l > d_ || i < 1 || j > n_ || i >= j) throw std::out_of_range("c variable out of range");
  // Pairs (i,j) in lexicographic order.
  const int before = (i - 1) * n_ - (i - 1) * i / 2;
  return (l - 1) * pairs_ + before + (j - i);
}

int VarMap::u(int l, int k) const {
  if (l < 1 || l > d_ || k < 1 || k > n_) throw std::out_of_range("u variable out of range");
  return c_count() + (l - 1) * n_ + k;
}

int VarMap::x(std::size_t b, int l, int k) const {
  if (b >= inputs_.size() || l < 1 || l >= d_ || k < 1 || k > n_) {
    throw std::out_of_range("x variable out of range");
  }
  const auto per_input = static_cast<std::size_t>(d_ - 1) * static_cast<std::size_t>(n_);
  return c_count() + u_count() + static_cast<int>(b * per_input) + (l - 1) * n_ + k;
}

Cnf encode_structure(const VarMap& vm) {
  Fragment f(vm.variables());
  const int n = vm.channels();
  for (int l = 1; l <= vm.depth(); ++l) {
    for (int k = 1; k <= n; ++k) {
      std::vector<int> incident;
      for (int m = 1; m <= n; ++m) {
        if (m != k) incident.push_back(vm.c(l, std::min(k, m), std::max(k, m)));
      }
      std::vector<int> used{-vm.u(l, k)};
      used.insert(used.end(), incident.begin(), incident.end());
      f.add(used);
      for (int v : incident) f.add({-v, vm.u(l, k)});
      for (std::size_t a = 0; a < incident.size(); ++a) {
        for (std::size_t b = a + 1; b < incident.size(); ++b) f.add({-incident[a], -incident[b]});
      }
    }
  }
  return f.take();
}

Cnf encode_input_sort(const VarMap& vm, BoolVec b) {
  const auto& xs = vm.inputs();
  const auto it = std::find(xs.begin(), xs.end(), b);
  if (it == xs.end()) throw std::invalid_argument("input is not part of the variable map");
  const auto index = static_cast<std::size_t>(it - xs.begin());
  const int n = vm.channels();
  const int d = vm.depth();
  const BoolVec target = sorted_of(b, n);

  auto value = [&](int l, int k) {
    if (l == 0) return constant(bit(b, k));
    if (l == d) return constant(bit(target, k));
    return vm.x(index, l, k);
  };

  Fragment f(vm.variables());
  if (d == 0) {
    if (b != target) f.contradiction();
    return f.take();
  }
  for (int l = 1; l <= d; ++l) {
    for (int i = 1; i <= n; ++i) {
      for (int j = i + 1; j <= n; ++j) {
        const int c = vm.c(l, i, j);
        const int xi = value(l - 1, i);
        const int xj = value(l - 1, j);
        const int yi = value(l, i);
        const int yj = value(l, j);
        // yi <-> xi AND xj
        f.add({-c, -yi, xi});
        f.add({-c, -yi, xj});
        f.add({-c, yi, -xi, -xj});
        // yj <-> xi OR xj
        f.add({-c, yj, -xi});
        f.add({-c, yj, -xj});
        f.add({-c, -yj, xi, xj});
      }
    }
    for (int k = 1; k <= n; ++k) {
      const int u = vm.u(l, k);
      const int xk = value(l - 1, k);
      const int yk = value(l, k);
      f.add({u, -xk, yk});
      f.add({u, xk, -yk});
    }
  }
  return f.take();
}

Cnf encode_symmetry(const VarMap& vm, const EncodeOptions& opts) {
  Fragment f(vm.variables());
  const int n = vm.channels();
  const int d = vm.depth();
  const int fixed = opts.prefix ? opts.prefix->depth() : 0;
  if (opts.sigma1) {
    for (int l = std::max(1, fixed); l < d; ++l) {
      for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) f.add({-vm.c(l, i, j), -vm.c(l + 1, i, j)});
      }
    }
  }
  if (opts.sigma2) {
    for (int l = fixed + 2; l <= d; ++l) {
      if (l < 2) continue;
      for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) f.add({-vm.c(l, i, j), vm.u(l - 1, i), vm.u(l - 1, j)});
      }
    }
  }
  if (opts.sigma3 && d >= 1) {
    for (int i = 1; i < n; ++i) {
      std::vector<int> clause;
      for (int l = 1; l <= d; ++l) clause.push_back(vm.c(l, i, i + 1));
      f.add(clause);
    }
  }
  return f.take();
}

Cnf encode_fixed_prefix(const VarMap& vm, const Network& prefix) {
  if (prefix.depth() > vm.depth()) throw std::invalid_argument("prefix is deeper than the encoded network");
  if (prefix.channels() != vm.channels()) throw std::invalid_argument("prefix channel count differs");
  if (prefix.generalized()) throw std::invalid_argument("prefix must be a standard network");
  Fragment f(vm.variables());
  const int n = vm.channels();
  for (int l = 1; l <= prefix.depth(); ++l) {
    const Layer& layer = prefix.layer(l - 1);
    for (int i = 1; i <= n; ++i) {
      for (int j = i + 1; j <= n; ++j) {
        const bool present = std::find(layer.begin(), layer.end(), Comparator{i, j}) != layer.end();
        f.add({present ? vm.c(l, i, j) : -vm.c(l, i, j)});
      }
    }
  }
  return f.take();
}

Encoding build(int n, int depth, const InputSet& inputs, const EncodeOptions& opts) {
  if (inputs.channels() != n) throw std::invalid_argument("input set length differs from n");
  const InputSet windowed = opts.pad > 0 ? windows(inputs, opts.pad) : inputs;
  std::vector<BoolVec> kept;
  for (BoolVec b : windowed) {
    if (!is_sorted(b, n)) kept.push_back(b);
  }
  Encoding e{VarMap(n, depth, std::move(kept)), Cnf{}};
  e.cnf.variables = e.vars.variables();
  e.cnf.append(encode_structure(e.vars));
  if (depth >= 1) e.cnf.append(encode_symmetry(e.vars, opts));
  if (opts.prefix) e.cnf.append(encode_fixed_prefix(e.vars, *opts.prefix));
  if (depth == 0) {
    if (!e.vars.inputs().empty()) {
      const int v = ++e.cnf.variables;
      e.cnf.clauses.push_back({v});
      e.cnf.clauses.push_back({-v});
    }
    return e;
  }
  for (BoolVec b : e.vars.inputs()) e.cnf.append(encode_input_sort(e.vars, b));
  return e;
}

std::string to_dimacs(const Cnf& cnf) {
  std::string out = "p cnf " + std::to_string(cnf.variables) + ' ' + std::to_string(cnf.clauses.size()) + '\n';
  for (const auto& clause : cnf.clauses) {
    for (int lit : clause) {
      out += std::to_string(lit);
      out += ' ';
    }
    out += "0\n";
  }
  return out;
}

Cnf parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  Cnf cnf;
  bool header = false;
  std::size_t expected = 0;
  std::vector<int> clause;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == 'c' || line[0] == '%') continue;
    std::istringstream ls(line);
    if (line[0] == 'p') {
      std::string p, fmt;
      long long v = 0, c = 0;
      if (!(ls >> p >> fmt >> v >> c) || fmt != "cnf" || v < 0 || c < 0) {
        throw std::invalid_argument("bad DIMACS header on line " + std::to_string(line_no));
      }
      cnf.variables = static_cast<int>(v);
      expected = static_cast<std::size_t>(c);
      header = true;
      continue;
    }
    if (!header) throw std::invalid_argument("clause before DIMACS header on line " + std::to_string(line_no));
    long long lit = 0;
    while (ls >> lit) {
      if (lit == 0) {
        cnf.clauses.push_back(clause);
        clause.clear();
      } else {
        if (std::llabs(lit) > cnf.variables) {
          throw std::invalid_argument("literal out of range on line " + std::to_string(line_no));
        }
        clause.push_back(static_cast<int>(lit));
      }
    }
    if (!ls.eof()) throw std::invalid_argument("unexpected token on line " + std::to_string(line_no));
  }
  if (!header) throw std::invalid_argument("missing DIMACS header");
  if (!clause.empty()) throw std::invalid_argument("last clause is not 0-terminated");
  if (cnf.clauses.size() != expected) throw std::invalid_argument("clause count differs from header");
  return cnf;
}

std::string_view name_of(Verdict v) {
  switch (v) {
    case Verdict::sat:
      return "SAT";
    case Verdict::unsat:
      return "UNSAT";
    case Verdict::unknown:
      return "UNKNOWN";
  }
  return "UNKNOWN";
}

SolverOutput parse_solver_output(std::string_view text) {
  SolverOutput out;
  std::istringstream in{std::string(text)};
  std::string line;
  bool status_seen = false;
  std::vector<int> literals;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.starts_with("s ")) {
      const std::string status = line.substr(2);
      status_seen = true;
      if (status == "SATISFIABLE") {
        out.verdict = Verdict::sat;
      } else if (status == "UNSATISFIABLE") {
        out.verdict = Verdict::unsat;
      } else {
        out.verdict = Verdict::unknown;
        out.diagnostic = "solver reported " + status;
      }
    } else if (line.starts_with("v ") || line == "v") {
      std::istringstream ls(line.substr(1));
      long long lit = 0;
      while (ls >> lit) {
        if (lit != 0) literals.push_back(static_cast<int>(lit));
      }
      if (!ls.eof()) {
        out.verdict = Verdict::unknown;
        out.diagnostic = "malformed value line: " + line;
        return out;
      }
    }
  }
  if (!status_seen) {
    out.verdict = Verdict::unknown;
    out.diagnostic = "no status line in solver output";
    return out;
  }
  if (out.verdict == Verdict::sat) {
    if (literals.empty()) {
      out.verdict = Verdict::unknown;
      out.diagnostic = "satisfiable without a model";
      return out;
    }
    int top = 0;
    for (int lit : literals) top = std::max(top, std::abs(lit));
    out.model.assign(static_cast<std::size_t>(top) + 1, false);
    for (int lit : literals) out.model[static_cast<std::size_t>(std::abs(lit))] = lit > 0;
  }
  return out;
}

Network decode_network(const VarMap& vm, const std::vector<bool>& model) {
  const int n = vm.channels();
  Network net(n);
  auto truth = [&model](int v) { return static_cast<std::size_t>(v) < model.size() && model[static_cast<std::size_t>(v)]; };
  for (int l = 1; l <= vm.depth(); ++l) {
    Layer layer;
    for (int i = 1; i <= n; ++i) {
      for (int j = i + 1; j <= n; ++j) {
        if (truth(vm.c(l, i, j))) layer.push_back({i, j});
      }
    }
    net.add_layer(std::move(layer));
  }
  return net;
}

}  // namespace sortnet
