#include <doctest.h>

#include "oracles.hpp"
#include "sortnet/encode.hpp"
#include "sortnet/words.hpp"

using namespace sortnet;

namespace {

bool has_clause(const Cnf& cnf, std::vector<int> clause) {
  std::sort(clause.begin(), clause.end());
  for (auto c : cnf.clauses) {
    std::sort(c.begin(), c.end());
    if (c == clause) return true;
  }
  return false;
}

std::vector<BoolVec> unsorted_after(const Network& prefix) {
  std::vector<BoolVec> out;
  const int n = prefix.channels();
  for (BoolVec x = 0; x < (1U << n); ++x) {
    const BoolVec y = oracle::run(prefix, x);
    if (!oracle::sorted(y, n)) out.push_back(y);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

TEST_CASE("variable map") {
  const VarMap vm(2, 1, {parse_boolvec("10")});
  CHECK(vm.c_count() == 1);
  CHECK(vm.u_count() == 2);
  CHECK(vm.variables() == 3);
  const VarMap deep(4, 3, {1, 2});
  CHECK(deep.c(1, 1, 2) == 1);
  CHECK(deep.u(1, 1) == deep.c_count() + 1);
  CHECK(deep.x(1, 2, 4) == deep.variables());
  CHECK_THROWS((void)deep.x(0, 3, 1));
}

TEST_CASE("structure clauses") {
  const VarMap vm(3, 1, {});
  const Cnf cnf = encode_structure(vm);
  // per channel: one u -> OR clause, two c -> u clauses, one at-most-one pair
  CHECK(cnf.clauses.size() == 3 * 4);
  CHECK(has_clause(cnf, {-vm.c(1, 1, 2), -vm.c(1, 1, 3)}));
  CHECK(has_clause(cnf, {-vm.u(1, 1), vm.c(1, 1, 2), vm.c(1, 1, 3)}));
}

TEST_CASE("input clauses") {
  const BoolVec b = parse_boolvec("10");
  const VarMap vm(2, 1, {b});
  const Cnf frag = encode_input_sort(vm, b);
  CHECK(has_clause(frag, {vm.u(1, 1)}));
  CHECK(has_clause(frag, {vm.u(1, 2)}));
  Cnf both = encode_structure(vm);
  both.append(frag);
  both.clauses.push_back({-vm.c(1, 1, 2)});
  CHECK_FALSE(oracle::dpll(both));

  const BoolVec s = parse_boolvec("011");
  const VarMap vs(3, 2, {s});
  CHECK(oracle::dpll(encode_input_sort(vs, s)));
  CHECK_THROWS_AS((void)encode_input_sort(vs, parse_boolvec("101")), std::invalid_argument);
}

TEST_CASE("symmetry clauses") {
  EncodeOptions only1{true, false, false};
  CHECK(encode_symmetry(VarMap(3, 2, {}), only1).clauses.size() == 3);
  EncodeOptions only3{false, false, true};
  const VarMap vm(4, 3, {});
  const Cnf s3 = encode_symmetry(vm, only3);
  CHECK(s3.clauses.size() == 3);
  for (int i = 1; i < 4; ++i) CHECK(has_clause(s3, {vm.c(1, i, i + 1), vm.c(2, i, i + 1), vm.c(3, i, i + 1)}));
  EncodeOptions only2{false, true, false};
  CHECK(encode_symmetry(VarMap(4, 1, {}), only2).clauses.empty());
}

TEST_CASE("fixed prefix clauses") {
  const VarMap vm(4, 2, {});
  const Cnf f4 = encode_fixed_prefix(vm, Network(4, {first_layer(4)}));
  CHECK(f4.clauses.size() == 6);
  for (std::vector<int> unit : {std::vector<int>{vm.c(1, 1, 2)}, {vm.c(1, 3, 4)}, {-vm.c(1, 1, 3)},
                                {-vm.c(1, 1, 4)}, {-vm.c(1, 2, 3)}, {-vm.c(1, 2, 4)}}) {
    CHECK(has_clause(f4, unit));
  }
  CHECK(encode_fixed_prefix(vm, Network(4)).clauses.empty());
  const VarMap v5(5, 3, {});
  CHECK(encode_fixed_prefix(v5, net_of(Sentence::parse("01221_h"))).clauses.size() == 20);
  CHECK_THROWS((void)encode_fixed_prefix(VarMap(4, 1, {}), Network(4, {first_layer(4), {{2, 3}}})));
}

TEST_CASE("small instances") {
  const Encoding e21 = build(2, 1, unsorted_inputs(2));
  const auto m21 = oracle::dpll(e21.cnf);
  REQUIRE(m21);
  CHECK(decode_network(e21.vars, *m21) == Network(2, {{{1, 2}}}));
  CHECK_FALSE(oracle::dpll(build(4, 2, unsorted_inputs(4)).cnf));
  const Encoding e43 = build(4, 3, unsorted_inputs(4));
  const auto m43 = oracle::dpll(e43.cnf);
  REQUIRE(m43);
  CHECK(oracle::sorts_all(decode_network(e43.vars, *m43)));
  CHECK_FALSE(oracle::dpll(build(3, 0, unsorted_inputs(3)).cnf));
  CHECK(oracle::dpll(build(3, 1, InputSet(3, {parse_boolvec("011")}), EncodeOptions{true, true, false}).cnf));
  CHECK(build(3, 1, InputSet(3, {parse_boolvec("011")})).vars.inputs().empty());
}

TEST_CASE("verdicts match exhaustive search for every flag combination") {
  for (int n = 2; n <= 4; ++n) {
    const std::vector<BoolVec> xs = unsorted_inputs(n).members();
    for (int d = 0; d <= 3; ++d) {
      const bool expected = oracle::depth_suffices(n, d, xs);
      for (int flags = 0; flags < 8; ++flags) {
        CAPTURE(n);
        CAPTURE(d);
        CAPTURE(flags);
        EncodeOptions opts{(flags & 1) != 0, (flags & 2) != 0, (flags & 4) != 0};
        const Encoding e = build(n, d, unsorted_inputs(n), opts);
        const auto model = oracle::dpll(e.cnf);
        REQUIRE(model.has_value() == expected);
        if (model && d > 0) REQUIRE(oracle::sorts_all(decode_network(e.vars, *model)));
      }
    }
  }
}

TEST_CASE("prefix instances match exhaustive search") {
  for (int n = 4; n <= 5; ++n) {
    std::vector<Network> prefixes{Network(n, {first_layer(n)})};
    for (const auto& s : generate_sentences(n, PrefixSet::RGn)) prefixes.push_back(net_of(s));
    for (const auto& prefix : prefixes) {
      for (int d = prefix.depth(); d <= 4; ++d) {
        const bool expected = oracle::depth_suffices(n, d - prefix.depth(), unsorted_after(prefix));
        EncodeOptions opts;
        opts.prefix = prefix;
        const Encoding e = build(n, d, unsorted_inputs(prefix), opts);
        const auto model = oracle::dpll(e.cnf);
        CAPTURE(to_json_string(prefix));
        CAPTURE(d);
        REQUIRE(model.has_value() == expected);
        if (model && d > 0) {
          const Network net = decode_network(e.vars, *model);
          REQUIRE(net.prefix(prefix.depth()) == prefix);
          REQUIRE(oracle::sorts_all(net));
        }
      }
    }
  }
}

TEST_CASE("windowed instances") {
  const Encoding e = build(5, 3, unsorted_inputs(5), EncodeOptions{true, true, true, 2, std::nullopt});
  CHECK(e.vars.inputs() == windows(unsorted_inputs(5), 2).members());
}

TEST_CASE("DIMACS text") {
  Cnf cnf;
  cnf.variables = 2;
  cnf.clauses = {{1, -2}, {2}};
  CHECK(to_dimacs(cnf) == "p cnf 2 2\n1 -2 0\n2 0\n");
  const Cnf back = parse_dimacs(to_dimacs(cnf));
  CHECK(back.variables == 2);
  CHECK(back.clauses == cnf.clauses);
  CHECK_THROWS((void)parse_dimacs("1 2 0\n"));
  CHECK_THROWS((void)parse_dimacs("p cnf x y\n"));
}

TEST_CASE("solver output") {
  CHECK(parse_solver_output("s UNSATISFIABLE\n").verdict == Verdict::unsat);
  const SolverOutput sat = parse_solver_output("c hello\ns SATISFIABLE\nv 1 -2\nv 3 0\n");
  CHECK(sat.verdict == Verdict::sat);
  REQUIRE(sat.model.size() >= 4);
  CHECK(sat.model[1]);
  CHECK_FALSE(sat.model[2]);
  CHECK(sat.model[3]);
  const SolverOutput bad = parse_solver_output("segmentation fault\n");
  CHECK(bad.verdict == Verdict::unknown);
  CHECK_FALSE(bad.diagnostic.empty());
}
