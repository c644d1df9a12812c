#pragma once

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sortnet/encode.hpp"
#include "sortnet/network.hpp"
#include "sortnet/words.hpp"

namespace sortnet {

struct SolverConfig {
  std::string executable;
  std::vector<std::string> args;
  double timeout_seconds = 3600;
  /// CNF and solver output files go here; the system temp dir when empty.
  std::filesystem::path work_dir;
  /// Keep files of successful runs too (failed runs always keep them).
  bool keep_files = false;
};

/// Solver from $SAT_SOLVER, else the first of cadical, kissat,
/// cryptominisat5, glucose, z3 found on PATH. z3 gets "-dimacs".
[[nodiscard]] std::optional<SolverConfig> detect_solver();
/// Config for an explicit executable (adds "-dimacs" for z3).
[[nodiscard]] SolverConfig solver_at(const std::string& path);

struct SolverRun {
  Verdict verdict = Verdict::unknown;
  bool timed_out = false;
  std::vector<bool> model;
  std::string diagnostic;
  double seconds = 0;
};

/// Runs the solver on cnf in a subprocess. Returns unknown with timed_out set
/// when the wall-clock limit passes or cancel() becomes true. Throws
/// std::runtime_error if the process cannot be started.
[[nodiscard]] SolverRun run_solver(const Cnf& cnf, const SolverConfig& cfg,
                                   const std::function<bool()>& cancel = {});

struct InstanceResult {
  /// 1-based position of the prefix in canonical R_n order; 0 without prefix.
  std::size_t prefix_id = 0;
  std::string prefix;
  int depth = 0;
  int pad = 0;
  Verdict verdict = Verdict::unknown;
  bool timed_out = false;
  double encode_seconds = 0;
  double solve_seconds = 0;
  std::optional<Network> witness;

  bool operator==(const InstanceResult&) const = default;
};

enum class Claim { upper, lower, inconclusive };

[[nodiscard]] std::string_view name_of(Claim c);

struct CampaignResult {
  int n = 0;
  int depth = 0;
  /// upper: T(n) <= depth (witness found); lower: T(n) > depth.
  Claim claim = Claim::inconclusive;
  std::string ordering = "canonical";
  std::vector<InstanceResult> instances;
  double wall_seconds = 0;
  double cpu_seconds = 0;

  [[nodiscard]] std::optional<Network> witness() const;
  bool operator==(const CampaignResult&) const = default;
};

struct ProverConfig {
  SolverConfig solver;
  /// Concurrent solver processes.
  int workers = 1;
  bool sigma1 = true;
  bool sigma2 = true;
  bool sigma3 = true;
  /// Encode one input per distinct prefix output instead of every input the
  /// prefix leaves unsorted; both have the same models.
  bool distinct_prefix_outputs = true;
};

enum class FindMode { free, layer1, two_layer };

[[nodiscard]] FindMode parse_find_mode(std::string_view name);

/// Instance set for depth d: R_n for n >= 3 and d >= 2, otherwise a single
/// instance (first layer F_n when d >= 1).
[[nodiscard]] std::vector<std::pair<std::string, std::optional<Network>>> prefixes_for(int n, int depth);

/// [n-4, n-6, 0] clipped to 0..n-1, largest first, duplicates removed.
[[nodiscard]] std::vector<int> default_pads(int n);

/// Searches a depth-d sorting network. Instances run in order; the result
/// reports the lowest-index SAT instance. Every witness is checked with
/// is_sorting_network; a failing witness throws std::logic_error.
[[nodiscard]] CampaignResult find_network(int n, int depth, FindMode mode, const ProverConfig& cfg);

/// Tries every prefix from prefixes_for(n, d), each with the pads largest
/// first; SAT at a pad > 0 moves on to the next smaller pad. Claims
/// T(n) > d only if every prefix ends UNSAT. With stop_on_sat, the first SAT
/// at pad 0 ends the campaign with an upper-bound claim.
[[nodiscard]] CampaignResult prove_lower_bound(int n, int depth, std::vector<int> pads, const ProverConfig& cfg,
                                               bool stop_on_sat = true);

struct DepthResult {
  std::optional<int> value;
  /// Campaign at depth value (witness) and at depth value-1 (all UNSAT).
  std::optional<CampaignResult> upper;
  std::optional<CampaignResult> lower;
};

/// Smallest depth with a sorting network, by increasing depth.
[[nodiscard]] DepthResult compute_T(int n, const ProverConfig& cfg,
                                    const std::function<void(const CampaignResult&)>& progress = {});

/// Published values: |G_n|, |R(G_n)|, |S_n|, |R(S_n)|, |R_n| for 3 <= n <= 19
/// and A_n for even 12 <= n <= 40. Missing cells are zero.
[[nodiscard]] std::optional<CountsRow> published_counts(int n);

/// Writes the CSV "n,G,RG,S,RS,R,A" for 3..max_n and, when diff is given, one
/// line per cell that differs from the published value. Returns the rows.
std::vector<CountsRow> reproduce_tables(int max_n, std::ostream& csv, std::ostream* diff = nullptr);

[[nodiscard]] nlohmann::json to_json(const CampaignResult& r);
/// Throws std::invalid_argument naming the offending field; re-verifies every
/// witness.
[[nodiscard]] CampaignResult campaign_from_json(const nlohmann::json& j);
void export_campaign(const CampaignResult& r, const std::filesystem::path& path);
[[nodiscard]] CampaignResult import_campaign(const std::filesystem::path& path);

}  // namespace sortnet
