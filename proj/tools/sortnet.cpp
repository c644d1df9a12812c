// Command-line front end: prefix generation, CNF encoding, solving and
// lower-bound campaigns.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "sortnet/encode.hpp"
#include "sortnet/network.hpp"
#include "sortnet/prover.hpp"
#include "sortnet/saturation.hpp"
#include "sortnet/words.hpp"

using namespace sortnet;

namespace {

constexpr int kConclusive = 0;
constexpr int kSat = 10;
constexpr int kUnsat = 20;
constexpr int kInconclusive = 30;

struct SolverFlags {
  std::string path;
  double timeout = 3600;
  int workers = 1;
  bool keep = false;
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f) {
  cmd->add_option("--solver", f.path, "DIMACS solver executable (default: $SAT_SOLVER or PATH search)");
  cmd->add_option("--timeout", f.timeout, "Per-instance wall-clock limit in seconds")->check(CLI::PositiveNumber);
  cmd->add_option("--workers", f.workers, "Concurrent solver processes")->check(CLI::PositiveNumber);
  cmd->add_flag("--keep-files", f.keep, "Keep CNF and solver output files");
}

SolverConfig solver_of(const SolverFlags& f) {
  std::optional<SolverConfig> cfg = f.path.empty() ? detect_solver() : std::optional(solver_at(f.path));
  if (!cfg) throw std::runtime_error("no SAT solver found; set SAT_SOLVER or pass --solver");
  cfg->timeout_seconds = f.timeout;
  cfg->keep_files = f.keep;
  return *cfg;
}

ProverConfig prover_of(const SolverFlags& f) {
  ProverConfig cfg;
  cfg.solver = solver_of(f);
  cfg.workers = f.workers;
  return cfg;
}

std::ostream& open_out(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot write " + path);
  return file;
}

Network read_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return network_from_json(nlohmann::json::parse(in));
}

int exit_code(Claim c) {
  switch (c) {
    case Claim::upper:
      return kSat;
    case Claim::lower:
      return kUnsat;
    case Claim::inconclusive:
      return kInconclusive;
  }
  return kInconclusive;
}

void report(const CampaignResult& c) {
  std::cerr << "n=" << c.n << " depth=" << c.depth << " claim=" << name_of(c.claim)
            << " instances=" << c.instances.size() << " wall=" << c.wall_seconds << "s\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal-depth sorting network search"};
  app.require_subcommand(1);

  int n = 0;
  int depth = 0;
  std::string out_path;
  SolverFlags solver;

  auto* gen = app.add_subcommand("gen", "Emit a prefix set, one sentence (or network JSON) per line");
  std::string set_name = "rn";
  gen->add_option("--n", n, "Channels")->required()->check(CLI::Range(1, 40));
  gen->add_option("--set", set_name, "gn|rgn|sn|rsn|rn")->check(CLI::IsMember({"gn", "rgn", "sn", "rsn", "rn"}));
  gen->add_option("--out", out_path, "Output file (default stdout)");
  bool gen_networks = false;
  gen->add_flag("--networks", gen_networks, "Emit network JSON instead of sentences");

  auto* encode = app.add_subcommand("encode", "Write the DIMACS CNF of one instance");
  std::string prefix_file;
  int prefix_index = 0;
  int pad = 0;
  bool no_s1 = false, no_s2 = false, no_s3 = false;
  encode->add_option("--n", n, "Channels")->required()->check(CLI::Range(1, 24));
  encode->add_option("--depth", depth, "Depth")->required()->check(CLI::NonNegativeNumber);
  auto* pf = encode->add_option("--prefix", prefix_file, "Prefix network JSON file");
  encode->add_option("--prefix-index", prefix_index, "1-based index into canonical R_n")
      ->check(CLI::PositiveNumber)
      ->excludes(pf);
  encode->add_option("--pad", pad, "Window padding")->check(CLI::NonNegativeNumber);
  encode->add_flag("--no-sigma1", no_s1, "Drop the consecutive-repeat clauses");
  encode->add_flag("--no-sigma2", no_s2, "Drop the eager-placement clauses");
  encode->add_flag("--no-sigma3", no_s3, "Drop the adjacent-comparator clauses");
  encode->add_option("--out", out_path, "Output CNF file (default stdout)");

  auto* solve = app.add_subcommand("solve", "Run the solver on a DIMACS file");
  std::string cnf_path;
  solve->add_option("--cnf", cnf_path, "CNF file")->required()->check(CLI::ExistingFile);
  add_solver_flags(solve, solver);

  auto* find = app.add_subcommand("find", "Search a sorting network; prints the witness JSON");
  std::string mode = "two-layer";
  find->add_option("--n", n, "Channels")->required()->check(CLI::Range(1, 24));
  find->add_option("--depth", depth, "Depth")->required()->check(CLI::NonNegativeNumber);
  find->add_option("--mode", mode, "free|layer1|two-layer")
      ->check(CLI::IsMember({"free", "layer1", "two-layer"}));
  add_solver_flags(find, solver);

  auto* prove = app.add_subcommand("prove", "Lower-bound campaign; prints the JSON report");
  std::vector<int> pads;
  bool keep_going = false;
  prove->add_option("--n", n, "Channels")->required()->check(CLI::Range(1, 24));
  prove->add_option("--depth", depth, "Depth")->required()->check(CLI::NonNegativeNumber);
  prove->add_option("--pads", pads, "Window paddings, e.g. 5,3,0")->delimiter(',');
  prove->add_flag("--no-stop-on-sat", keep_going, "Run every prefix even after a witness is found");
  prove->add_option("--out", out_path, "Report file (default stdout)");
  add_solver_flags(prove, solver);

  auto* optimal = app.add_subcommand("optimal", "Compute T(n) by increasing depth");
  optimal->add_option("--n", n, "Channels")->required()->check(CLI::Range(1, 24));
  add_solver_flags(optimal, solver);

  auto* tables = app.add_subcommand("tables", "Write the count table CSV");
  int max_n = 16;
  tables->add_option("--max-n", max_n, "Largest n")->check(CLI::Range(3, 40));
  tables->add_option("--out", out_path, "CSV file (default stdout)");
  bool show_diff = false;
  tables->add_flag("--diff", show_diff, "Report cells that differ from the published tables on stderr");

  CLI11_PARSE(app, argc, argv);

  try {
    std::ofstream file;
    if (*gen) {
      std::ostream& out = open_out(out_path, file);
      const PrefixSet set = parse_prefix_set(set_name);
      if (set == PrefixSet::Gn || set == PrefixSet::Sn) {
        const Layer first = first_layer(n);
        for_each_second_layer(n, [&](const Layer& second) {
          const Network net(n, {first, second});
          if (set == PrefixSet::Sn && !is_saturated(net)) return;
          out << to_json_string(net) << '\n';
        });
      } else {
        for_each_sentence(n, set, [&](const Sentence& s) {
          if (gen_networks) {
            out << to_json_string(net_of(s)) << '\n';
          } else {
            out << s.to_string() << '\n';
          }
        });
      }
      return kConclusive;
    }
    if (*encode) {
      EncodeOptions opts;
      opts.sigma1 = !no_s1;
      opts.sigma2 = !no_s2;
      opts.sigma3 = !no_s3;
      opts.pad = pad;
      if (!prefix_file.empty()) opts.prefix = read_network(prefix_file);
      if (prefix_index > 0) {
        const auto rn = generate_sentences(n, PrefixSet::Rn);
        if (static_cast<std::size_t>(prefix_index) > rn.size()) {
          throw std::invalid_argument("--prefix-index exceeds |R_n| = " + std::to_string(rn.size()));
        }
        opts.prefix = net_of(rn[static_cast<std::size_t>(prefix_index) - 1]);
      }
      const InputSet inputs = opts.prefix ? unsorted_inputs(*opts.prefix) : unsorted_inputs(n);
      const Encoding enc = build(n, depth, inputs, opts);
      open_out(out_path, file) << to_dimacs(enc.cnf);
      std::cerr << "variables=" << enc.cnf.variables << " clauses=" << enc.cnf.clauses.size() << '\n';
      return kConclusive;
    }
    if (*solve) {
      std::ifstream in(cnf_path);
      std::stringstream text;
      text << in.rdbuf();
      const SolverRun run = run_solver(parse_dimacs(text.str()), solver_of(solver));
      std::cout << "s " << name_of(run.verdict) << '\n';
      if (!run.diagnostic.empty()) std::cerr << run.diagnostic << '\n';
      return run.verdict == Verdict::sat ? kSat : run.verdict == Verdict::unsat ? kUnsat : kInconclusive;
    }
    if (*find) {
      const CampaignResult c = find_network(n, depth, parse_find_mode(mode), prover_of(solver));
      report(c);
      if (auto w = c.witness()) std::cout << to_json_string(*w) << '\n';
      return exit_code(c.claim);
    }
    if (*prove) {
      if (pads.empty()) pads = default_pads(n);
      const CampaignResult c = prove_lower_bound(n, depth, pads, prover_of(solver), !keep_going);
      report(c);
      open_out(out_path, file) << to_json(c).dump(2) << '\n';
      return exit_code(c.claim);
    }
    if (*optimal) {
      const DepthResult r = compute_T(n, prover_of(solver), report);
      if (!r.value) {
        std::cout << "T(" << n << ") undetermined\n";
        return kInconclusive;
      }
      std::cout << "T(" << n << ") = " << *r.value << '\n';
      if (r.upper && r.upper->witness()) std::cout << to_json_string(*r.upper->witness()) << '\n';
      return kConclusive;
    }
    if (*tables) {
      reproduce_tables(max_n, open_out(out_path, file), show_diff ? &std::cerr : nullptr);
      return kConclusive;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kConclusive;
}
