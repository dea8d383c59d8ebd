// Command-line front end: `nominate` learns weights for one query from a
// dissimilarity CSV and a supervision file, `simulate` runs the generated-
// graph experiment from a config file, and `compare` runs the paired
// signed-rank comparison of two metric series.
//
// Exit codes: 0 success, 2 input parse error (message names the line),
// 3 solver budget exhausted (result still written), 1 anything else.

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rankfuse/eval.hpp"
#include "rankfuse/ilp.hpp"
#include "rankfuse/io.hpp"
#include "rankfuse/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitParse = 2;
constexpr int kExitSolverLimit = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write '" + path + "'");
  }
  out << content;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

struct CommonFlags {
  long node_limit = 100000;
  double time_budget_s = 60.0;
  bool trace = false;

  rankfuse::SolverConfig solver_config() const {
    rankfuse::SolverConfig cfg;
    cfg.node_limit = node_limit;
    cfg.time_budget_s = time_budget_s;
    if (trace) cfg.trace = &std::cerr;
    return cfg;
  }
};

std::vector<std::pair<std::string, std::string>> solver_config_json(
    const rankfuse::SolverConfig& cfg) {
  return {
      {"node_limit", std::to_string(cfg.node_limit)},
      {"time_budget_s", rankfuse::format_double17(cfg.time_budget_s)},
      {"feas_tol", rankfuse::format_double17(cfg.feas_tol)},
      {"int_tol", rankfuse::format_double17(cfg.int_tol)},
  };
}

int run_nominate(const std::string& dissim_path, const std::string& sup_path,
                 const std::string& out_path, const std::string& baseline_out,
                 const std::string& export_lp, const CommonFlags& flags,
                 const std::string& tie_break, std::uint64_t seed) {
  const std::string dissim_bytes = read_file(dissim_path);
  const std::string sup_bytes = read_file(sup_path);

  std::istringstream dissim_stream(dissim_bytes);
  const rankfuse::DissimilarityCsv csv =
      rankfuse::parse_dissimilarity_csv(dissim_stream);

  std::map<std::string, int> row_of;
  for (std::size_t i = 0; i < csv.ids.size(); ++i) {
    row_of[csv.ids[i]] = static_cast<int>(i);
  }
  std::istringstream sup_stream(sup_bytes);
  std::vector<int> s_rows;
  std::map<std::string, int> sup_seen;
  for (const auto& [id, line] : rankfuse::read_supervision_ids(sup_stream)) {
    const auto it = row_of.find(id);
    if (it == row_of.end()) {
      throw rankfuse::ParseError("supervision id '" + id +
                                     "' not present in the dissimilarity file",
                                 line);
    }
    if (!sup_seen.emplace(id, line).second) {
      throw rankfuse::ParseError("duplicate supervision id '" + id + "'",
                                 line);
    }
    s_rows.push_back(it->second);
  }
  if (s_rows.empty()) {
    throw rankfuse::ParseError("supervision file lists no ids", 1);
  }

  const auto matrix = rankfuse::PersonalDissimilarityMatrix::ingest(csv.raw);
  const auto inst = rankfuse::SupervisionInstance::make(
      matrix.num_items(), s_rows);
  const rankfuse::IlpModel model = rankfuse::build_model(matrix, inst);
  if (!export_lp.empty()) {
    write_output(export_lp, rankfuse::to_lp_text(model));
  }

  const rankfuse::SolverConfig solver_cfg = flags.solver_config();
  const rankfuse::IlpSolution sol = rankfuse::solve(model, solver_cfg);
  const rankfuse::NominationList list =
      rankfuse::solution_to_ranker(matrix, sol);

  rankfuse::ProvenanceInfo prov;
  prov.inputs = {{"dissimilarities_sha256", sha256_hex(dissim_bytes)},
                 {"supervision_sha256", sha256_hex(sup_bytes)}};
  prov.config = solver_config_json(solver_cfg);
  prov.config.emplace_back("nodes_explored",
                           std::to_string(sol.nodes_explored));
  write_output(out_path,
               rankfuse::serialize_nomination_result(csv.ids, sol, list, prov));

  if (!baseline_out.empty()) {
    rankfuse::SeededRng rng(seed);
    const rankfuse::TieBreak tb = tie_break == "seeded"
                                      ? rankfuse::TieBreak::Seeded
                                      : rankfuse::TieBreak::Index;
    const rankfuse::SingletonResult single =
        rankfuse::singleton_baseline(matrix, inst, tb, &rng);
    rankfuse::IlpSolution as_solution{
        rankfuse::WeightVector::basis(matrix.num_representations(),
                                      single.column),
        {},
        single.objective_count,
        rankfuse::IlpSolution::Status::Optimal,
        0};
    const auto& cands = inst.candidate_rows();
    as_solution.x.assign(cands.size(), 0);
    {
      const std::vector<double> col = matrix.column(single.column);
      double worst = -std::numeric_limits<double>::infinity();
      for (int s : inst.s_rows()) worst = std::max(worst, col[s]);
      for (std::size_t p = 0; p < cands.size(); ++p) {
        if (col[cands[p]] < worst) as_solution.x[p] = 1;
      }
    }
    rankfuse::ProvenanceInfo bprov = prov;
    bprov.config.emplace_back("baseline", "\"singleton\"");
    bprov.config.emplace_back("baseline_column",
                              std::to_string(single.column));
    bprov.config.emplace_back("tie_break", "\"" + tie_break + "\"");
    bprov.config.emplace_back("seed", std::to_string(seed));
    write_output(baseline_out,
                 rankfuse::serialize_nomination_result(csv.ids, as_solution,
                                                       single.list, bprov));
  }

  return sol.status == rankfuse::IlpSolution::Status::IterationLimit
             ? kExitSolverLimit
             : kExitOk;
}

int run_simulate(const std::string& config_path, const std::string& out_path,
                 const CommonFlags& flags, std::optional<std::uint64_t> seed,
                 const std::string& restrict_mrr) {
  const std::string config_bytes = read_file(config_path);
  std::istringstream config_stream(config_bytes);
  rankfuse::ExperimentConfig cfg =
      rankfuse::parse_experiment_config(config_stream);
  cfg.solver = flags.solver_config();
  if (seed.has_value()) cfg.seed = *seed;
  cfg.candidate_restricted_rr = restrict_mrr != "full";

  const rankfuse::SimulationResult result = rankfuse::run_simulation(cfg);
  write_output(out_path, rankfuse::serialize_simulation_table(
                             result, cfg, sha256_hex(config_bytes)));

  int limited = 0;
  for (const auto& cell : result.table) limited += cell.limit_hits;
  return limited > 0 ? kExitSolverLimit : kExitOk;
}

int run_compare(const std::string& a_path, const std::string& b_path,
                const std::string& out_path) {
  const std::string a_bytes = read_file(a_path);
  const std::string b_bytes = read_file(b_path);
  std::istringstream a_stream(a_bytes);
  std::istringstream b_stream(b_bytes);
  const auto a = rankfuse::parse_value_series_csv(a_stream);
  const auto b = rankfuse::parse_value_series_csv(b_stream);

  std::map<std::string, double> b_of;
  for (const auto& [id, value] : b) b_of[id] = value;
  if (a.size() != b.size()) {
    throw std::invalid_argument("inputs pair different numbers of ids");
  }
  std::vector<std::string> ids;
  std::vector<double> first;
  std::vector<double> second;
  for (const auto& [id, value] : a) {
    const auto it = b_of.find(id);
    if (it == b_of.end()) {
      throw std::invalid_argument("id '" + id + "' missing from second input");
    }
    ids.push_back(id);
    first.push_back(value);
    second.push_back(it->second);
  }

  const rankfuse::ComparisonReport rep =
      rankfuse::compare_paired(ids, first, second);
  rankfuse::ProvenanceInfo prov;
  prov.inputs = {{"first_sha256", sha256_hex(a_bytes)},
                 {"second_sha256", sha256_hex(b_bytes)}};
  write_output(out_path, rankfuse::serialize_comparison_report(rep, prov));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"learn query-specific weights over dissimilarity "
               "representations and emit nomination lists"};
  app.require_subcommand(1);

  std::string dissim_path;
  std::string sup_path;
  std::string config_path;
  std::string a_path;
  std::string b_path;
  std::string out_path = "-";
  std::string baseline_out;
  std::string export_lp;
  std::string tie_break = "index";
  std::string restrict_mrr = "candidate";
  std::uint64_t seed = 0;
  CommonFlags flags;

  CLI::App* nominate =
      app.add_subcommand("nominate", "rank items for one query");
  nominate->add_option("dissimilarities", dissim_path,
                       "CSV with header id,d1,...,dJ")
      ->required();
  nominate->add_option("supervision", sup_path,
                       "newline-separated ids known similar to the query")
      ->required();
  nominate->add_option("--out", out_path, "result path, '-' for stdout");
  nominate->add_option("--baseline-out", baseline_out,
                       "also write the single-best-column baseline result");
  nominate->add_option("--export-lp", export_lp,
                       "write the model in LP text format");
  nominate->add_option("--node-limit", flags.node_limit, "search node budget");
  nominate->add_option("--time-budget-s", flags.time_budget_s,
                       "wall-clock budget in seconds");
  nominate->add_option("--tie-break", tie_break, "index or seeded")
      ->check(CLI::IsMember({"index", "seeded"}));
  nominate->add_option("--seed", seed, "seed for the seeded tie-break");
  nominate->add_flag("--trace", flags.trace, "log one line per search node");

  CLI::App* simulate =
      app.add_subcommand("simulate", "run the generated-graph experiment");
  simulate->add_option("config", config_path, "flat key = value config file")
      ->required();
  simulate->add_option("--out", out_path, "table path, '-' for stdout");
  simulate->add_option("--node-limit", flags.node_limit, "search node budget");
  simulate->add_option("--time-budget-s", flags.time_budget_s,
                       "wall-clock budget per solve in seconds");
  simulate->add_option("--seed", seed, "override the config seed");
  simulate
      ->add_option("--restrict-mrr", restrict_mrr,
                   "rank held-out items among candidates only, or in the "
                   "full list")
      ->check(CLI::IsMember({"full", "candidate"}));
  simulate->add_flag("--trace", flags.trace, "log one line per search node");

  CLI::App* compare = app.add_subcommand(
      "compare", "paired signed-rank comparison of two id,value series");
  compare->add_option("first", a_path, "CSV with header id,value")->required();
  compare->add_option("second", b_path, "CSV with header id,value")
      ->required();
  compare->add_option("--out", out_path, "report path, '-' for stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (nominate->parsed()) {
      return run_nominate(dissim_path, sup_path, out_path, baseline_out,
                          export_lp, flags, tie_break, seed);
    }
    if (simulate->parsed()) {
      return run_simulate(config_path, out_path, flags,
                          simulate->count("--seed") > 0
                              ? std::optional<std::uint64_t>(seed)
                              : std::nullopt,
                          restrict_mrr);
    }
    return run_compare(a_path, b_path, out_path);
  } catch (const rankfuse::ParseError& e) {
    std::cerr << "parse error at " << e.what() << '\n';
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    // Semantically invalid input (non-finite entries, degenerate pairings).
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}
