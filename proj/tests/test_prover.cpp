#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "sortnet/prover.hpp"

using namespace sortnet;

namespace {

std::optional<ProverConfig> prover() {
  auto solver = detect_solver();
  if (!solver) return std::nullopt;
  ProverConfig cfg;
  cfg.solver = *solver;
  cfg.solver.timeout_seconds = 600;
  return cfg;
}

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / ("sortnet-test-" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir;
}

CampaignResult without_times(CampaignResult r) {
  r.wall_seconds = r.cpu_seconds = 0;
  for (auto& i : r.instances) i.encode_seconds = i.solve_seconds = 0;
  return r;
}

}  // namespace

TEST_CASE("pad schedule") {
  CHECK(default_pads(9) == std::vector<int>{5, 3, 0});
  CHECK(default_pads(4) == std::vector<int>{0});
  CHECK(default_pads(5) == std::vector<int>{1, 0});
}

TEST_CASE("prefix instances") {
  CHECK(prefixes_for(6, 4).size() == 5);
  CHECK(prefixes_for(9, 6).size() == 22);
  const auto one = prefixes_for(6, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].second->depth() == 1);
  CHECK_FALSE(prefixes_for(6, 0)[0].second.has_value());
  CHECK(parse_find_mode("two-layer") == FindMode::two_layer);
  CHECK_THROWS((void)parse_find_mode("both"));
}

TEST_CASE("solver subprocess") {
  const auto cfg = prover();
  if (!cfg) {
    MESSAGE("no DIMACS solver available; skipped");
    return;
  }
  const SolverRun sat = run_solver(parse_dimacs("p cnf 1 1\n1 0\n"), cfg->solver);
  CHECK(sat.verdict == Verdict::sat);
  REQUIRE(sat.model.size() >= 2);
  CHECK(sat.model[1]);
  CHECK(run_solver(parse_dimacs("p cnf 1 2\n1 0\n-1 0\n"), cfg->solver).verdict == Verdict::unsat);
  CHECK(run_solver(build(4, 2, unsorted_inputs(4)).cnf, cfg->solver).verdict == Verdict::unsat);
}

TEST_CASE("timeouts and broken solvers") {
  const auto dir = scratch_dir();
  const auto slow = dir / "slow.sh";
  std::ofstream(slow) << "#!/bin/sh\nsleep 30\n";
  std::filesystem::permissions(slow, std::filesystem::perms::owner_all);
  SolverConfig cfg = solver_at(slow.string());
  cfg.timeout_seconds = 0.3;
  cfg.work_dir = dir;
  const SolverRun run = run_solver(parse_dimacs("p cnf 1 1\n1 0\n"), cfg);
  CHECK(run.timed_out);
  CHECK(run.verdict == Verdict::unknown);
  CHECK(run.seconds < 10);

  ProverConfig pc;
  pc.solver = cfg;
  const CampaignResult c = prove_lower_bound(4, 2, {0}, pc);
  CHECK(c.claim == Claim::inconclusive);

  const auto broken = dir / "broken.sh";
  std::ofstream(broken) << "#!/bin/sh\necho garbage\n";
  std::filesystem::permissions(broken, std::filesystem::perms::owner_all);
  SolverConfig bc = solver_at(broken.string());
  bc.work_dir = dir;
  const SolverRun bad = run_solver(parse_dimacs("p cnf 1 1\n1 0\n"), bc);
  CHECK(bad.verdict == Verdict::unknown);
  CHECK_FALSE(bad.timed_out);
  CHECK_THROWS_AS((void)run_solver(parse_dimacs("p cnf 1 1\n1 0\n"), solver_at((dir / "missing").string())),
                  std::runtime_error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("network search") {
  const auto cfg = prover();
  if (!cfg) return;
  const CampaignResult six = find_network(6, 5, FindMode::two_layer, *cfg);
  CHECK(six.claim == Claim::upper);
  REQUIRE(six.witness());
  CHECK(oracle::sorts_all(*six.witness()));
  CHECK(six.witness()->depth() == 5);

  const CampaignResult four = find_network(4, 2, FindMode::free, *cfg);
  CHECK(four.claim == Claim::lower);
  CHECK_FALSE(four.witness());

  const CampaignResult layer1 = find_network(5, 5, FindMode::layer1, *cfg);
  REQUIRE(layer1.witness());
  CHECK(layer1.witness()->layer(0) == first_layer(5, FirstLayerStyle::crossing));
}

TEST_CASE("lower bounds") {
  const auto cfg = prover();
  if (!cfg) return;
  const CampaignResult six = prove_lower_bound(6, 4, {2, 0}, *cfg);
  CHECK(six.claim == Claim::lower);
  std::set<std::size_t> ids;
  for (const auto& i : six.instances) {
    ids.insert(i.prefix_id);
    if (i.pad == 0) CHECK(i.verdict == Verdict::unsat);
  }
  CHECK(ids.size() == 5);
  CHECK(prove_lower_bound(2, 0, {0}, *cfg).claim == Claim::lower);
  CHECK(prove_lower_bound(6, 5, {2, 0}, *cfg).claim == Claim::upper);
}

TEST_CASE("windowed SAT never settles a prefix") {
  const auto cfg = prover();
  if (!cfg) return;
  const CampaignResult c = prove_lower_bound(8, 5, {4, 0}, *cfg, false);
  for (std::size_t k = 0; k < c.instances.size(); ++k) {
    const auto& i = c.instances[k];
    if (i.pad > 0 && i.verdict == Verdict::sat) {
      REQUIRE(k + 1 < c.instances.size());
      CHECK(c.instances[k + 1].prefix_id == i.prefix_id);
      CHECK(c.instances[k + 1].pad == 0);
    }
  }
  CHECK(c.claim == Claim::lower);
}

TEST_CASE("optimal depth") {
  const auto cfg = prover();
  if (!cfg) return;
  CHECK(compute_T(1, *cfg).value == 0);
  CHECK(compute_T(2, *cfg).value == 1);
  const DepthResult seven = compute_T(7, *cfg);
  CHECK(seven.value == 6);
  REQUIRE(seven.upper);
  REQUIRE(seven.upper->witness());
  CHECK(oracle::sorts_all(*seven.upper->witness()));
  REQUIRE(seven.lower);
  CHECK(seven.lower->claim == Claim::lower);
}

TEST_CASE("campaigns are deterministic across worker counts") {
  auto cfg = prover();
  if (!cfg) return;
  const CampaignResult a = prove_lower_bound(7, 6, {3, 0}, *cfg);
  cfg->workers = 3;
  const CampaignResult b = prove_lower_bound(7, 6, {3, 0}, *cfg);
  CHECK(without_times(a) == without_times(b));
}

TEST_CASE("published tables") {
  const auto row = published_counts(11);
  REQUIRE(row);
  CHECK(row->g == 35696);
  CHECK(row->rg == 482);
  CHECK(row->s == 7916);
  CHECK(row->rs == 88);
  CHECK(row->r == 48);
  CHECK(published_counts(4)->g == 10);
  CHECK(published_counts(4)->rg == 8);
  CHECK(published_counts(20)->a == 18);
  CHECK_FALSE(published_counts(2));

  std::ostringstream csv;
  const auto rows = reproduce_tables(6, csv);
  CHECK(rows.size() == 4);
  CHECK(csv.str().starts_with("n,G,RG,S,RS,R,A\n3,4,4,"));
}

TEST_CASE("campaign JSON") {
  CampaignResult empty;
  empty.n = 5;
  empty.depth = 3;
  const nlohmann::json doc = to_json(empty);
  CHECK(doc.at("instances").empty());
  CHECK(campaign_from_json(doc) == empty);

  CampaignResult r;
  r.n = 4;
  r.depth = 3;
  r.claim = Claim::upper;
  InstanceResult sat;
  sat.prefix = "F_n";
  sat.depth = 3;
  sat.verdict = Verdict::sat;
  sat.witness = Network(4, {{{1, 2}, {3, 4}}, {{1, 3}, {2, 4}}, {{2, 3}}});
  InstanceResult unsat = sat;
  unsat.verdict = Verdict::unsat;
  unsat.witness.reset();
  unsat.pad = 1;
  r.instances = {unsat, sat};
  const auto path = scratch_dir() / "campaign.json";
  export_campaign(r, path);
  CHECK(import_campaign(path) == r);
  std::filesystem::remove_all(path.parent_path());

  nlohmann::json tampered = to_json(r);
  tampered["instances"][1]["witness"]["layers"][2] = nlohmann::json::array();
  try {
    (void)campaign_from_json(tampered);
    FAIL("tampered witness accepted");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).starts_with("/instances/1/witness"));
  }
  nlohmann::json missing = to_json(r);
  missing["instances"][0].erase("verdict");
  CHECK_THROWS_WITH_AS((void)campaign_from_json(missing), "/instances/0/verdict: missing", std::invalid_argument);
}
