#pragma once

// File formats: the dissimilarity CSV, supervision id lists, flat key=value
// experiment configs, and the JSON result documents. Serialization is
// deterministic; floating-point values carry 17 significant digits so a
// parse of the output reproduces the exact doubles.

#include <charconv>
#include <cstdio>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rankfuse/core.hpp"
#include "rankfuse/eval.hpp"
#include "rankfuse/ilp.hpp"

namespace rankfuse {

inline constexpr std::string_view kToolName = "rankfuse";
inline constexpr std::string_view kToolVersion = "0.1.0";

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

inline double parse_number(std::string_view token, int line) {
  token = trim(token);
  double value = 0.0;
  const char* begin = token.data();
  const char* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || token.empty()) {
    throw ParseError("expected a number, got '" + std::string(token) + "'",
                     line);
  }
  return value;
}

inline long parse_integer(std::string_view token, int line) {
  token = trim(token);
  long value = 0;
  const char* begin = token.data();
  const char* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || token.empty()) {
    throw ParseError("expected an integer, got '" + std::string(token) + "'",
                     line);
  }
  return value;
}

}  // namespace detail

inline std::string format_double17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct DissimilarityCsv {
  std::vector<std::string> ids;             // one per row
  std::vector<std::vector<double>> raw;     // rows x J
  int num_representations = 0;
};

/// Header `id,d1,...,dJ`, then one row per non-query item. Errors carry the
/// offending 1-based line number.
inline DissimilarityCsv parse_dissimilarity_csv(std::istream& in) {
  DissimilarityCsv out;
  std::string line;
  int line_no = 0;

  if (!std::getline(in, line)) {
    throw ParseError("missing header", 1);
  }
  ++line_no;
  const auto header = detail::split(line, ',');
  if (header.size() < 2 || detail::trim(header[0]) != "id") {
    throw ParseError("header must be id,d1,...,dJ", line_no);
  }
  for (std::size_t j = 1; j < header.size(); ++j) {
    const std::string expected = "d" + std::to_string(j);
    if (detail::trim(header[j]) != expected) {
      throw ParseError("expected header column '" + expected + "'", line_no);
    }
  }
  out.num_representations = static_cast<int>(header.size()) - 1;

  std::map<std::string, int> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split(line, ',');
    if (fields.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) +
                           " fields, got " + std::to_string(fields.size()),
                       line_no);
    }
    std::string id(detail::trim(fields[0]));
    if (id.empty()) {
      throw ParseError("empty id", line_no);
    }
    if (!seen.emplace(id, line_no).second) {
      throw ParseError("duplicate id '" + id + "'", line_no);
    }
    std::vector<double> row(out.num_representations);
    for (int j = 0; j < out.num_representations; ++j) {
      row[j] = detail::parse_number(fields[j + 1], line_no);
    }
    out.ids.push_back(std::move(id));
    out.raw.push_back(std::move(row));
  }
  if (out.raw.empty()) {
    throw ParseError("no data rows", line_no + 1);
  }
  return out;
}

/// Newline-separated ids; blank lines are skipped. Returns each id with its
/// line number so callers can point at unknown or duplicate entries.
inline std::vector<std::pair<std::string, int>> read_supervision_ids(
    std::istream& in) {
  std::vector<std::pair<std::string, int>> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view id = detail::trim(line);
    if (id.empty()) continue;
    out.emplace_back(std::string(id), line_no);
  }
  return out;
}

/// Flat `key = value` config; `#` starts a comment. Keys are exactly the
/// experiment fields; unknown keys are rejected with their line.
inline ExperimentConfig parse_experiment_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body(line);
    if (const auto hash = body.find('#'); hash != std::string_view::npos) {
      body = body.substr(0, hash);
    }
    body = detail::trim(body);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("expected key = value", line_no);
    }
    const std::string_view key = detail::trim(body.substr(0, eq));
    const std::string_view value = detail::trim(body.substr(eq + 1));
    if (key == "n") {
      cfg.n = static_cast<int>(detail::parse_integer(value, line_no));
    } else if (key == "k") {
      cfg.k = static_cast<int>(detail::parse_integer(value, line_no));
    } else if (key == "alpha_truth_grid") {
      cfg.alpha_truth_grid.clear();
      for (const auto tok : detail::split(value, ',')) {
        cfg.alpha_truth_grid.push_back(detail::parse_number(tok, line_no));
      }
    } else if (key == "s_size") {
      cfg.s_size = static_cast<int>(detail::parse_integer(value, line_no));
    } else if (key == "star_size") {
      cfg.star_size = static_cast<int>(detail::parse_integer(value, line_no));
    } else if (key == "monte_carlo_reps") {
      cfg.monte_carlo_reps =
          static_cast<int>(detail::parse_integer(value, line_no));
    } else if (key == "seed") {
      cfg.seed =
          static_cast<std::uint64_t>(detail::parse_integer(value, line_no));
    } else if (key == "m_embed") {
      cfg.m_embed = static_cast<int>(detail::parse_integer(value, line_no));
    } else if (key == "mode") {
      if (value == "NoiselessP") {
        cfg.mode = SimulationMode::NoiselessP;
      } else if (value == "NoisyAbar") {
        cfg.mode = SimulationMode::NoisyAbar;
      } else {
        throw ParseError("mode must be NoiselessP or NoisyAbar", line_no);
      }
    } else {
      throw ParseError("unknown key '" + std::string(key) + "'", line_no);
    }
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), line_no + 1);
  }
  return cfg;
}

/// CSV with header `id,value`, as consumed by the paired comparison.
inline std::vector<std::pair<std::string, double>> parse_value_series_csv(
    std::istream& in) {
  std::vector<std::pair<std::string, double>> out;
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) {
    throw ParseError("missing header", 1);
  }
  ++line_no;
  {
    const auto header = detail::split(line, ',');
    if (header.size() != 2 || detail::trim(header[0]) != "id" ||
        detail::trim(header[1]) != "value") {
      throw ParseError("header must be id,value", line_no);
    }
  }
  std::map<std::string, int> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split(line, ',');
    if (fields.size() != 2) {
      throw ParseError("expected 2 fields", line_no);
    }
    std::string id(detail::trim(fields[0]));
    if (id.empty()) throw ParseError("empty id", line_no);
    if (!seen.emplace(id, line_no).second) {
      throw ParseError("duplicate id '" + id + "'", line_no);
    }
    out.emplace_back(std::move(id), detail::parse_number(fields[1], line_no));
  }
  if (out.empty()) throw ParseError("no data rows", line_no + 1);
  return out;
}

// ---------------------------------------------------------------------------
// JSON emission. Hand-rolled so numbers come out with exactly 17 significant
// digits; nlohmann/json is fine for parsing these documents back.

namespace detail {

inline void json_escape(std::string_view s, std::string& out) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\r':
        out += "\\r";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

}  // namespace detail

struct ProvenanceInfo {
  std::vector<std::pair<std::string, std::string>> inputs;  // name -> sha256
  std::vector<std::pair<std::string, std::string>> config;  // key -> literal json
};

/// Provenance common to all result documents: tool, version, generator,
/// input hashes, and the effective configuration.
inline void append_provenance(const ProvenanceInfo& prov, std::string& out) {
  out += "\"provenance\": {";
  out += "\"tool\": ";
  detail::json_escape(kToolName, out);
  out += ", \"version\": ";
  detail::json_escape(kToolVersion, out);
  out += ", \"generator\": ";
  detail::json_escape(SeededRng::generator_name(), out);
  out += ", \"inputs\": {";
  for (std::size_t i = 0; i < prov.inputs.size(); ++i) {
    if (i > 0) out += ", ";
    detail::json_escape(prov.inputs[i].first, out);
    out += ": ";
    detail::json_escape(prov.inputs[i].second, out);
  }
  out += "}, \"config\": {";
  for (std::size_t i = 0; i < prov.config.size(); ++i) {
    if (i > 0) out += ", ";
    detail::json_escape(prov.config[i].first, out);
    out += ": ";
    out += prov.config[i].second;  // pre-rendered JSON literal
  }
  out += "}}";
}

/// The nomination result document: weights, objective, solver status, the
/// full ranked list, and provenance.
inline std::string serialize_nomination_result(
    const std::vector<std::string>& ids, const IlpSolution& sol,
    const NominationList& list, const ProvenanceInfo& prov) {
  std::string out;
  out += "{\n\"alpha\": [";
  for (int j = 0; j < sol.alpha.size(); ++j) {
    if (j > 0) out += ", ";
    out += format_double17(sol.alpha[j]);
  }
  out += "],\n\"objective\": " + std::to_string(sol.objective_value);
  out += ",\n\"status\": ";
  detail::json_escape(to_string(sol.status), out);
  out += ",\n\"ranking\": [\n";
  for (int rank = 1; rank <= list.size(); ++rank) {
    const int row = list.row_at_rank(rank);
    out += "  {\"id\": ";
    detail::json_escape(ids.at(row), out);
    out += ", \"rank\": " + std::to_string(rank);
    out += ", \"fused_value\": " + format_double17(list.fused_at_rank(rank));
    out += rank < list.size() ? "},\n" : "}\n";
  }
  out += "],\n";
  append_provenance(prov, out);
  out += "\n}\n";
  return out;
}

inline std::string serialize_comparison_report(const ComparisonReport& rep,
                                               const ProvenanceInfo& prov) {
  std::string out;
  out += "{\n\"n_pairs\": " + std::to_string(rep.ids.size());
  out += ",\n\"n_zero_dropped\": " + std::to_string(rep.n_zero_dropped);
  out += ",\n\"w_statistic\": " + format_double17(rep.wilcoxon.w_statistic);
  out += ",\n\"p_one_sided\": " + format_double17(rep.wilcoxon.p_one_sided);
  out += ",\n\"mean_difference\": " + format_double17(rep.mean_difference);
  out += ",\n\"ci_halfwidth\": " + format_double17(rep.ci_halfwidth);
  out += ",\n\"direction\": ";
  detail::json_escape(rep.direction, out);
  out += ",\n\"differences\": [\n";
  for (std::size_t i = 0; i < rep.differences.size(); ++i) {
    out += "  {\"id\": ";
    detail::json_escape(rep.ids[i], out);
    out += ", \"first\": " + format_double17(rep.first[i]);
    out += ", \"second\": " + format_double17(rep.second[i]);
    out += ", \"difference\": " + format_double17(rep.differences[i]);
    out += i + 1 < rep.differences.size() ? "},\n" : "}\n";
  }
  out += "],\n";
  append_provenance(prov, out);
  out += "\n}\n";
  return out;
}

/// Flat table for plotting: one row per (truth mixing value, scheme).
/// Provenance rides along as `#` comment lines.
inline std::string serialize_simulation_table(
    const SimulationResult& result, const ExperimentConfig& cfg,
    const std::string& config_sha256) {
  std::string out;
  out += "# tool=";
  out += kToolName;
  out += " version=";
  out += kToolVersion;
  out += " generator=";
  out += SeededRng::generator_name();
  out += "\n# config_sha256=" + config_sha256;
  out += " seed=" + std::to_string(cfg.seed);
  out += " mode=";
  out += to_string(cfg.mode);
  out += "\nalpha_truth,scheme,mean_rr,ci_halfwidth,reps_used,limit_hits\n";
  for (const SimulationCell& cell : result.table) {
    out += format_double17(cell.alpha_truth);
    out += ',';
    out += to_string(cell.scheme);
    out += ',';
    out += format_double17(cell.mean_rr);
    out += ',';
    out += format_double17(cell.ci_halfwidth);
    out += ',';
    out += std::to_string(cell.reps_used);
    out += ',';
    out += std::to_string(cell.limit_hits);
    out += '\n';
  }
  return out;
}

}  // namespace rankfuse
