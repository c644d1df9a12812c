#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sortnet/network.hpp"

namespace sortnet {

/// Clause list over variables 1..variables.
struct Cnf {
  int variables = 0;
  std::vector<std::vector<int>> clauses;

  /// Appends every clause of other; variable counts take the maximum.
  void append(const Cnf& other);
};

/// Variable numbering for Psi(n, d, X): all c(l,i,j) first, then u(l,k), then
/// x(b,l,k) for 1 <= l <= d-1 in input order. Values before the first and after
/// the last layer are constants and get no variable.
class VarMap {
 public:
  VarMap(int n, int depth, std::vector<BoolVec> inputs);

  [[nodiscard]] int channels() const { return n_; }
  [[nodiscard]] int depth() const { return d_; }
  [[nodiscard]] const std::vector<BoolVec>& inputs() const { return inputs_; }
  [[nodiscard]] int variables() const { return total_; }

  /// 1 <= l <= d, 1 <= i < j <= n.
  [[nodiscard]] int c(int l, int i, int j) const;
  /// 1 <= l <= d, 1 <= k <= n.
  [[nodiscard]] int u(int l, int k) const;
  /// Input index b, 1 <= l <= d-1, 1 <= k <= n.
  [[nodiscard]] int x(std::size_t b, int l, int k) const;

  [[nodiscard]] int c_count() const { return d_ * pairs_; }
  [[nodiscard]] int u_count() const { return d_ * n_; }

 private:
  int n_;
  int d_;
  int pairs_;
  std::vector<BoolVec> inputs_;
  int total_;
};

struct EncodeOptions {
  bool sigma1 = true;
  bool sigma2 = true;
  bool sigma3 = true;
  /// Window padding: only inputs 0^l1 m 1^l2 with l1 + l2 = pad are kept.
  int pad = 0;
  std::optional<Network> prefix;
};

/// u(l,k) <-> OR of the comparators at layer l touching k, and at most one of
/// them.
[[nodiscard]] Cnf encode_structure(const VarMap& vm);

/// The network maps b to sorted(b). Throws std::invalid_argument if b is not
/// one of vm.inputs().
[[nodiscard]] Cnf encode_input_sort(const VarMap& vm, BoolVec b);

/// sigma1: no comparator repeated in consecutive layers.
/// sigma2: a comparator at layer l >= 2 uses a channel busy at layer l-1.
/// sigma3: every (i,i+1) appears in some layer.
/// With a fixed prefix of depth p, sigma1 and sigma2 only constrain layers
/// after the prefix, and sigma2 is not emitted for layer p+1.
[[nodiscard]] Cnf encode_symmetry(const VarMap& vm, const EncodeOptions& opts);

/// Unit clauses pinning the first layers to the prefix.
/// Throws std::invalid_argument if the prefix is deeper than vm.depth(), has a
/// different channel count, or is generalized.
[[nodiscard]] Cnf encode_fixed_prefix(const VarMap& vm, const Network& prefix);

struct Encoding {
  VarMap vars;
  Cnf cnf;
};

/// Psi(n, d, X) or Psi_C(n, d, X) with the selected optimizations. X is
/// windowed here when opts.pad > 0; sorted members are dropped.
[[nodiscard]] Encoding build(int n, int depth, const InputSet& inputs, const EncodeOptions& opts = {});

/// "p cnf V C" followed by one 0-terminated clause per line.
[[nodiscard]] std::string to_dimacs(const Cnf& cnf);
/// Reads a DIMACS CNF. Throws std::invalid_argument on malformed text.
[[nodiscard]] Cnf parse_dimacs(std::string_view text);

enum class Verdict { sat, unsat, unknown };

[[nodiscard]] std::string_view name_of(Verdict v);

struct SolverOutput {
  Verdict verdict = Verdict::unknown;
  /// model[v] for v >= 1; index 0 unused.
  std::vector<bool> model;
  std::string diagnostic;
};

/// Parses "s SATISFIABLE" / "s UNSATISFIABLE" and "v ..." lines.
[[nodiscard]] SolverOutput parse_solver_output(std::string_view text);

/// Network whose comparators are the true c(l,i,j) of the model.
[[nodiscard]] Network decode_network(const VarMap& vm, const std::vector<bool>& model);

}  // namespace sortnet
