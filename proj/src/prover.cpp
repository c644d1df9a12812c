#include "sortnet/prover.hpp"

#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

extern char** environ;

namespace sortnet {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::atomic<unsigned> file_counter{0};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool is_z3(const std::string& path) {
  const auto name = std::filesystem::path(path).filename().string();
  return name == "z3" || name.starts_with("z3.") || name.starts_with("z3-");
}

std::optional<std::string> find_on_path(const std::string& name) {
  const char* path = std::getenv("PATH");
  if (path == nullptr) return std::nullopt;
  std::stringstream ss(path);
  std::string dir;
  while (std::getline(ss, dir, ':')) {
    if (dir.empty()) continue;
    const auto candidate = std::filesystem::path(dir) / name;
    if (::access(candidate.c_str(), X_OK) == 0) return candidate.string();
  }
  return std::nullopt;
}

/// Inputs for one instance: windowed unsorted inputs, optionally thinned to
/// one input per distinct prefix output.
InputSet instance_inputs(int n, const std::optional<Network>& prefix, int pad, bool distinct_outputs) {
  InputSet unsorted = prefix ? unsorted_inputs(*prefix) : unsorted_inputs(n);
  if (pad > 0) unsorted = windows(unsorted, pad);
  if (!prefix || !distinct_outputs) return unsorted;
  std::map<BoolVec, BoolVec> first_by_output;
  for (BoolVec x : unsorted) first_by_output.emplace(evaluate(*prefix, x), x);
  std::vector<BoolVec> kept;
  kept.reserve(first_by_output.size());
  for (const auto& [out, x] : first_by_output) kept.push_back(x);
  return InputSet(n, std::move(kept));
}

struct PrefixTask {
  std::size_t id = 0;
  std::string label;
  std::optional<Network> prefix;
};

InstanceResult run_instance(int n, int depth, const PrefixTask& task, int pad, const ProverConfig& cfg,
                            const std::function<bool()>& cancel) {
  InstanceResult r;
  r.prefix_id = task.id;
  r.prefix = task.label;
  r.depth = depth;
  r.pad = pad;

  const auto t0 = Clock::now();
  const InputSet inputs = instance_inputs(n, task.prefix, pad, cfg.distinct_prefix_outputs);
  EncodeOptions opts;
  opts.sigma1 = cfg.sigma1;
  opts.sigma2 = cfg.sigma2;
  opts.sigma3 = cfg.sigma3;
  opts.prefix = task.prefix;
  const Encoding enc = build(n, depth, inputs, opts);
  r.encode_seconds = seconds_since(t0);

  SolverRun run;
  if (enc.cnf.clauses.empty()) {
    run.verdict = Verdict::sat;
    run.model.assign(static_cast<std::size_t>(enc.cnf.variables) + 1, false);
  } else {
    run = run_solver(enc.cnf, cfg.solver, cancel);
  }
  r.solve_seconds = run.seconds;
  r.verdict = run.verdict;
  r.timed_out = run.timed_out;
  if (run.verdict != Verdict::sat) return r;

  Network witness = decode_network(enc.vars, run.model);
  if (task.prefix && witness.prefix(task.prefix->depth()) != *task.prefix) {
    throw std::logic_error("decoded network does not start with the fixed prefix");
  }
  if (!sorts(witness, inputs)) throw std::logic_error("decoded network fails to sort the encoded inputs");
  if (pad == 0 && !is_sorting_network(witness)) {
    throw std::logic_error("decoded network is not a sorting network");
  }
  r.witness = std::move(witness);
  return r;
}

struct TaskOutcome {
  std::vector<InstanceResult> attempts;
  Verdict final_verdict = Verdict::unknown;
  bool done = false;
};

CampaignResult run_campaign(int n, int depth, const std::vector<PrefixTask>& tasks, const std::vector<int>& pads,
                            const ProverConfig& cfg, bool stop_on_sat) {
  const auto start = Clock::now();
  std::vector<TaskOutcome> outcomes(tasks.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> best_sat{tasks.size()};
  std::mutex error_mutex;
  std::exception_ptr error;

  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      if (stop_on_sat && i > best_sat.load()) continue;
      auto cancel = [&, i]() { return stop_on_sat && best_sat.load() < i; };
      try {
        TaskOutcome& out = outcomes[i];
        for (std::size_t p = 0; p < pads.size(); ++p) {
          if (cancel()) break;
          InstanceResult r = run_instance(n, depth, tasks[i], pads[p], cfg, cancel);
          const bool last = p + 1 == pads.size();
          const Verdict v = r.verdict;
          out.attempts.push_back(std::move(r));
          if (v == Verdict::unsat || last) {
            out.final_verdict = v;
            out.done = true;
            break;
          }
        }
        if (out.done && out.final_verdict == Verdict::sat) {
          std::size_t cur = best_sat.load();
          while (i < cur && !best_sat.compare_exchange_weak(cur, i)) {
          }
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        best_sat.store(0);
      }
    }
  };

  const int width = std::max(1, std::min<int>(cfg.workers, static_cast<int>(tasks.size())));
  if (width == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < width; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  CampaignResult result;
  result.n = n;
  result.depth = depth;
  const std::size_t limit = stop_on_sat ? best_sat.load() : tasks.size() - 1;
  bool all_unsat = true;
  bool any_sat = false;
  for (std::size_t i = 0; i < tasks.size() && (tasks.empty() || i <= limit); ++i) {
    const auto& out = outcomes[i];
    result.instances.insert(result.instances.end(), out.attempts.begin(), out.attempts.end());
    if (!out.done || out.final_verdict != Verdict::unsat) all_unsat = false;
    if (out.done && out.final_verdict == Verdict::sat) any_sat = true;
  }
  for (const auto& r : result.instances) result.cpu_seconds += r.encode_seconds + r.solve_seconds;
  result.claim = any_sat ? Claim::upper : (all_unsat ? Claim::lower : Claim::inconclusive);
  result.wall_seconds = seconds_since(start);
  return result;
}

std::vector<PrefixTask> tasks_for(int n, int depth) {
  std::vector<PrefixTask> tasks;
  std::size_t id = 0;
  for (auto& [label, prefix] : prefixes_for(n, depth)) {
    tasks.push_back({prefix && prefix->depth() == 2 ? ++id : 0, label, prefix});
  }
  return tasks;
}

std::vector<int> normalize_pads(int n, std::vector<int> pads) {
  for (int& w : pads) w = std::clamp(w, 0, std::max(0, n - 1));
  pads.push_back(0);
  std::sort(pads.begin(), pads.end(), std::greater<>());
  pads.erase(std::unique(pads.begin(), pads.end()), pads.end());
  return pads;
}

// Published count tables.
constexpr std::uint64_t kG[] = {4,       10,       26,        76,         232,        764,
                                2620,    9496,     35696,     140152,     568504,     2390480,
                                10349536, 46206736, 211799312, 997313824, 4809701440};
constexpr std::uint64_t kS[] = {2,       4,       10,       28,       70,        230,       676,
                                2456,    7916,    31374,    109856,   467716,    1759422,   7968204,
                                31922840, 152664200, 646888154};
constexpr std::uint64_t kRG[] = {4, 8, 16, 20, 52, 61, 165, 152, 482, 414, 1378, 1024, 3780, 2627, 10187, 6422, 26796};
constexpr std::uint64_t kRS[] = {2, 2, 6, 6, 14, 15, 37, 27, 88, 70, 212, 136, 494, 323, 1149, 651, 2632};
constexpr std::uint64_t kR[] = {1, 2, 4, 5, 8, 12, 22, 21, 48, 50, 117, 94, 262, 211, 609, 411, 1367};
constexpr std::uint64_t kA[] = {1, 1, 4, 7, 18, 31, 70, 126, 261, 484, 960, 1800, 3515, 6643, 12852};

}  // namespace

std::string_view name_of(Claim c) {
  switch (c) {
    case Claim::upper:
      return "upper";
    case Claim::lower:
      return "lower";
    case Claim::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

std::optional<SolverConfig> detect_solver() {
  if (const char* env = std::getenv("SAT_SOLVER"); env != nullptr && *env != '\0') {
    std::string path = env;
    if (path.find('/') == std::string::npos) {
      if (auto found = find_on_path(path)) path = *found;
    }
    return solver_at(path);
  }
  for (const char* name : {"cadical", "kissat", "cryptominisat5", "glucose", "z3"}) {
    if (auto found = find_on_path(name)) return solver_at(*found);
  }
  return std::nullopt;
}

SolverConfig solver_at(const std::string& path) {
  SolverConfig cfg;
  cfg.executable = path;
  if (is_z3(path)) cfg.args = {"-dimacs"};
  return cfg;
}

SolverRun run_solver(const Cnf& cnf, const SolverConfig& cfg, const std::function<bool()>& cancel) {
  if (cfg.timeout_seconds <= 0) throw std::invalid_argument("solver timeout must be positive");
  const auto dir = cfg.work_dir.empty() ? std::filesystem::temp_directory_path() : cfg.work_dir;
  std::filesystem::create_directories(dir);
  const std::string stem =
      "sortnet-" + std::to_string(::getpid()) + "-" + std::to_string(file_counter.fetch_add(1));
  const auto cnf_path = dir / (stem + ".cnf");
  const auto out_path = dir / (stem + ".out");
  {
    std::ofstream out(cnf_path, std::ios::binary);
    out << to_dimacs(cnf);
    if (!out) throw std::runtime_error("cannot write " + cnf_path.string());
  }

  std::vector<std::string> argv_store{cfg.executable};
  argv_store.insert(argv_store.end(), cfg.args.begin(), cfg.args.end());
  argv_store.push_back(cnf_path.string());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  argv.push_back(nullptr);

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, out_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  posix_spawn_file_actions_addopen(&actions, STDERR_FILENO, "/dev/null", O_WRONLY, 0);
  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
  posix_spawnattr_setpgroup(&attr, 0);

  const auto start = Clock::now();
  pid_t pid = 0;
  const int rc = posix_spawn(&pid, cfg.executable.c_str(), &actions, &attr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  posix_spawnattr_destroy(&attr);
  if (rc != 0) {
    throw std::runtime_error("cannot start solver " + cfg.executable + ": " + std::strerror(rc));
  }

  SolverRun run;
  int status = 0;
  auto pause = std::chrono::milliseconds(2);
  for (;;) {
    const pid_t done = ::waitpid(pid, &status, WNOHANG);
    if (done == pid) break;
    if (seconds_since(start) > cfg.timeout_seconds || (cancel && cancel())) {
      ::kill(-pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      run.timed_out = true;
      break;
    }
    std::this_thread::sleep_for(pause);
    pause = std::min(pause * 2, std::chrono::milliseconds(50));
  }
  run.seconds = seconds_since(start);

  if (run.timed_out) {
    run.verdict = Verdict::unknown;
    run.diagnostic = "solver stopped after " + std::to_string(run.seconds) + " s";
  } else {
    SolverOutput parsed = parse_solver_output(read_file(out_path));
    run.verdict = parsed.verdict;
    run.model = std::move(parsed.model);
    run.diagnostic = std::move(parsed.diagnostic);
    if (WIFEXITED(status) && run.verdict == Verdict::unknown && run.diagnostic.empty()) {
      run.diagnostic = "solver exit status " + std::to_string(WEXITSTATUS(status));
    }
  }
  const bool failed = run.verdict == Verdict::unknown && !run.timed_out;
  if (!cfg.keep_files && !failed) {
    std::error_code ec;
    std::filesystem::remove(cnf_path, ec);
    std::filesystem::remove(out_path, ec);
  }
  return run;
}

std::optional<Network> CampaignResult::witness() const {
  for (const auto& r : instances) {
    if (r.witness && r.pad == 0) return r.witness;
  }
  return std::nullopt;
}

FindMode parse_find_mode(std::string_view name) {
  if (name == "free") return FindMode::free;
  if (name == "layer1") return FindMode::layer1;
  if (name == "two-layer" || name == "two_layer") return FindMode::two_layer;
  throw std::invalid_argument("unknown mode \"" + std::string(name) + "\"");
}

std::vector<std::pair<std::string, std::optional<Network>>> prefixes_for(int n, int depth) {
  std::vector<std::pair<std::string, std::optional<Network>>> out;
  if (n >= 3 && depth >= 2) {
    for (const auto& s : generate_sentences(n, PrefixSet::Rn)) out.emplace_back(s.to_string(), net_of(s));
  } else if (n >= 2 && depth >= 1) {
    out.emplace_back("F_n", Network(n, {first_layer(n)}));
  } else {
    out.emplace_back("", std::nullopt);
  }
  return out;
}

std::vector<int> default_pads(int n) { return normalize_pads(n, {n - 4, n - 6, 0}); }

CampaignResult find_network(int n, int depth, FindMode mode, const ProverConfig& cfg) {
  std::vector<PrefixTask> tasks;
  switch (mode) {
    case FindMode::free:
      tasks.push_back({0, "", std::nullopt});
      break;
    case FindMode::layer1:
      if (n >= 2 && depth >= 1) {
        tasks.push_back({0, "F'_n", Network(n, {first_layer(n, FirstLayerStyle::crossing)})});
      } else {
        tasks.push_back({0, "", std::nullopt});
      }
      break;
    case FindMode::two_layer:
      tasks = tasks_for(n, depth);
      break;
  }
  return run_campaign(n, depth, tasks, {0}, cfg, true);
}

CampaignResult prove_lower_bound(int n, int depth, std::vector<int> pads, const ProverConfig& cfg, bool stop_on_sat) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (depth < 0) throw std::invalid_argument("depth must be non-negative");
  return run_campaign(n, depth, tasks_for(n, depth), normalize_pads(n, std::move(pads)), cfg, stop_on_sat);
}

DepthResult compute_T(int n, const ProverConfig& cfg, const std::function<void(const CampaignResult&)>& progress) {
  if (n < 1 || n > kMaxEnumerationChannels) throw std::invalid_argument("compute_T supports 1 <= n <= 24");
  DepthResult result;
  for (int d = 0; d <= n; ++d) {
    CampaignResult c = prove_lower_bound(n, d, default_pads(n), cfg, true);
    if (progress) progress(c);
    switch (c.claim) {
      case Claim::upper:
        result.value = d;
        result.upper = std::move(c);
        return result;
      case Claim::lower:
        result.lower = std::move(c);
        break;
      case Claim::inconclusive:
        result.upper = std::move(c);
        return result;
    }
  }
  return result;
}

std::optional<CountsRow> published_counts(int n) {
  if (n < 3 || n > 40) return std::nullopt;
  CountsRow row;
  row.n = n;
  if (n <= 19) {
    const auto i = static_cast<std::size_t>(n - 3);
    row.g = kG[i];
    row.s = kS[i];
    row.rg = kRG[i];
    row.rs = kRS[i];
    row.r = kR[i];
  }
  if (n >= 12 && n % 2 == 0) row.a = kA[static_cast<std::size_t>((n - 12) / 2)];
  return row;
}

std::vector<CountsRow> reproduce_tables(int max_n, std::ostream& csv, std::ostream* diff) {
  std::vector<CountsRow> rows;
  csv << "n,G,RG,S,RS,R,A\n";
  for (int n = 3; n <= max_n; ++n) {
    const CountsRow row = counts(n);
    rows.push_back(row);
    csv << row.n << ',' << row.g << ',' << row.rg << ',' << row.s << ',' << row.rs << ',' << row.r << ','
        << row.a << '\n';
    if (diff == nullptr) continue;
    const auto published = published_counts(n);
    if (!published) continue;
    const std::pair<const char*, std::pair<std::uint64_t, std::uint64_t>> cells[] = {
        {"G", {row.g, published->g}},   {"RG", {row.rg, published->rg}}, {"S", {row.s, published->s}},
        {"RS", {row.rs, published->rs}}, {"R", {row.r, published->r}}};
    for (const auto& [name, values] : cells) {
      if (values.second != 0 && values.first != values.second) {
        *diff << "n=" << n << ' ' << name << " computed=" << values.first << " published=" << values.second << '\n';
      }
    }
    const bool a_published = n % 2 == 0;
    if (a_published && row.a != published->a && (n >= 12 || published->a == 0)) {
      *diff << "n=" << n << " A computed=" << row.a << " published=" << published->a << '\n';
    }
  }
  return rows;
}

nlohmann::json to_json(const CampaignResult& r) {
  nlohmann::json instances = nlohmann::json::array();
  for (const auto& i : r.instances) {
    instances.push_back({{"prefix_id", i.prefix_id},
                         {"prefix", i.prefix},
                         {"depth", i.depth},
                         {"pad", i.pad},
                         {"verdict", std::string(name_of(i.verdict))},
                         {"timed_out", i.timed_out},
                         {"encode_seconds", i.encode_seconds},
                         {"solve_seconds", i.solve_seconds},
                         {"witness", i.witness ? to_json(*i.witness) : nlohmann::json(nullptr)}});
  }
  return {{"n", r.n},
          {"depth", r.depth},
          {"claim", std::string(name_of(r.claim))},
          {"ordering", r.ordering},
          {"wall_seconds", r.wall_seconds},
          {"cpu_seconds", r.cpu_seconds},
          {"instances", instances}};
}

namespace {

const nlohmann::json& field(const nlohmann::json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw std::invalid_argument(where + "/" + key + ": missing");
  return j.at(key);
}

template <typename T>
T get_as(const nlohmann::json& j, const std::string& key, const std::string& where) {
  const auto& v = field(j, key, where);
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw std::invalid_argument(where + "/" + key + ": wrong type");
  }
}

Verdict parse_verdict(const std::string& s, const std::string& where) {
  if (s == "SAT") return Verdict::sat;
  if (s == "UNSAT") return Verdict::unsat;
  if (s == "UNKNOWN") return Verdict::unknown;
  throw std::invalid_argument(where + ": unknown verdict \"" + s + "\"");
}

Claim parse_claim(const std::string& s, const std::string& where) {
  if (s == "upper") return Claim::upper;
  if (s == "lower") return Claim::lower;
  if (s == "inconclusive") return Claim::inconclusive;
  throw std::invalid_argument(where + ": unknown claim \"" + s + "\"");
}

}  // namespace

CampaignResult campaign_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("/: expected an object");
  CampaignResult r;
  r.n = get_as<int>(j, "n", "");
  if (r.n < 1 || r.n > kMaxEnumerationChannels) throw std::invalid_argument("/n: out of range");
  r.depth = get_as<int>(j, "depth", "");
  r.claim = parse_claim(get_as<std::string>(j, "claim", ""), "/claim");
  r.ordering = get_as<std::string>(j, "ordering", "");
  r.wall_seconds = get_as<double>(j, "wall_seconds", "");
  r.cpu_seconds = get_as<double>(j, "cpu_seconds", "");
  const auto& list = field(j, "instances", "");
  if (!list.is_array()) throw std::invalid_argument("/instances: expected an array");
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string where = "/instances/" + std::to_string(k);
    const auto& e = list[k];
    if (!e.is_object()) throw std::invalid_argument(where + ": expected an object");
    InstanceResult i;
    i.prefix_id = get_as<std::size_t>(e, "prefix_id", where);
    i.prefix = get_as<std::string>(e, "prefix", where);
    i.depth = get_as<int>(e, "depth", where);
    i.pad = get_as<int>(e, "pad", where);
    i.verdict = parse_verdict(get_as<std::string>(e, "verdict", where), where + "/verdict");
    i.timed_out = get_as<bool>(e, "timed_out", where);
    i.encode_seconds = get_as<double>(e, "encode_seconds", where);
    i.solve_seconds = get_as<double>(e, "solve_seconds", where);
    const auto& w = field(e, "witness", where);
    if (!w.is_null()) {
      try {
        i.witness = network_from_json(w);
      } catch (const std::exception& ex) {
        throw std::invalid_argument(where + "/witness: " + ex.what());
      }
    }
    if (i.witness.has_value() != (i.verdict == Verdict::sat)) {
      throw std::invalid_argument(where + "/witness: present exactly for SAT verdicts");
    }
    if (i.witness) {
      const Network& net = *i.witness;
      if (net.channels() != r.n || net.depth() != i.depth) {
        throw std::invalid_argument(where + "/witness: wrong dimensions");
      }
      const bool ok = i.pad == 0 ? is_sorting_network(net) : sorts(net, windows(unsorted_inputs(r.n), i.pad));
      if (!ok) throw std::invalid_argument(where + "/witness: does not sort");
    }
    r.instances.push_back(std::move(i));
  }
  return r;
}

void export_campaign(const CampaignResult& r, const std::filesystem::path& path) {
  std::ofstream out(path);
  out << to_json(r).dump(2) << '\n';
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

CampaignResult import_campaign(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
  return campaign_from_json(j);
}

}  // namespace sortnet
