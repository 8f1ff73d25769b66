#include "mixrate/report.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include "mixrate/ensemble_io.hpp"
#include "mixrate/error.hpp"

namespace mixrate {

namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt_double(*v) : std::string(); }

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, begin);
    out.emplace_back(s.substr(begin, pos - begin));
    if (pos == std::string_view::npos) return out;
    begin = pos + 1;
  }
}

double to_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::ParseError, "bad number '" + s + "'");
}

std::uint64_t to_uint(const std::string& s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::ParseError, "bad integer '" + s + "'");
  }
  return v;
}

std::optional<double> to_opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return to_double(s);
}

}  // namespace

std::string format_csv(std::span<const TrialRecord> records) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& r : records) {
    std::string probs;
    for (std::size_t k = 0; k < r.probabilities.size(); ++k) {
      if (k) probs += ';';
      probs += fmt_double(r.probabilities[k]);
    }
    char elapsed[32];
    std::snprintf(elapsed, sizeof elapsed, "%.6f", r.elapsed);
    out += std::to_string(r.trial_id) + ',' + std::to_string(r.seed) + ',' +
           std::to_string(r.dim) + ',' + std::to_string(r.n_states) + ',' + probs + ',' +
           fmt_double(r.max_rate) + ',' + fmt_opt(r.binary_max_rate) + ',' +
           fmt_double(r.bound_thm) + ',' + fmt_double(r.shannon) + ',' + fmt_opt(r.ratio_thm) +
           ',' + fmt_opt(r.ratio_conj) + ',' + fmt_double(r.fd_residual) + ',' +
           (r.stm_ok ? "true" : "false") + ',' + elapsed + '\n';
  }
  return out;
}

std::vector<TrialRecord> parse_csv(std::string_view text) {
  auto lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines.front() != kCsvHeader) {
    throw Error(ErrorKind::ParseError, "missing or unexpected CSV header");
  }
  std::vector<TrialRecord> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split(lines[i], ',');
    if (f.size() != 14) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(i + 1) + " has " +
                                             std::to_string(f.size()) + " fields");
    }
    TrialRecord r;
    r.trial_id = to_uint(f[0]);
    r.seed = to_uint(f[1]);
    r.dim = to_uint(f[2]);
    r.n_states = to_uint(f[3]);
    if (!f[4].empty()) {
      for (const auto& p : split(f[4], ';')) r.probabilities.push_back(to_double(p));
    }
    r.max_rate = to_double(f[5]);
    r.binary_max_rate = to_opt(f[6]);
    r.bound_thm = to_double(f[7]);
    r.shannon = to_double(f[8]);
    r.ratio_thm = to_opt(f[9]);
    r.ratio_conj = to_opt(f[10]);
    r.fd_residual = to_double(f[11]);
    if (f[12] != "true" && f[12] != "false") throw Error(ErrorKind::ParseError, "bad stm_ok");
    r.stm_ok = f[12] == "true";
    r.elapsed = to_double(f[13]);
    out.push_back(std::move(r));
  }
  return out;
}

nlohmann::json to_json(const TrialRecord& r) {
  const auto opt = [](const std::optional<double>& v) -> nlohmann::json {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  nlohmann::json j = {{"trial_id", r.trial_id},
                      {"seed", r.seed},
                      {"dim", r.dim},
                      {"n_states", r.n_states},
                      {"probabilities", r.probabilities},
                      {"max_rate", r.max_rate},
                      {"binary_max_rate", opt(r.binary_max_rate)},
                      {"bound_thm", r.bound_thm},
                      {"shannon", r.shannon},
                      {"ratio_thm", opt(r.ratio_thm)},
                      {"ratio_conj", opt(r.ratio_conj)},
                      {"fd_residual", r.fd_residual},
                      {"stm_ok", r.stm_ok},
                      {"elapsed", r.elapsed}};
  if (r.error) j["error"] = *r.error;
  return j;
}

TrialRecord record_from_json(const nlohmann::json& j) {
  const auto opt = [&j](const char* key) -> std::optional<double> {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return j[key].get<double>();
  };
  try {
    TrialRecord r;
    r.trial_id = j.at("trial_id").get<std::uint64_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.dim = j.at("dim").get<std::size_t>();
    r.n_states = j.at("n_states").get<std::size_t>();
    r.probabilities = j.at("probabilities").get<std::vector<double>>();
    r.max_rate = j.at("max_rate").get<double>();
    r.binary_max_rate = opt("binary_max_rate");
    r.bound_thm = j.at("bound_thm").get<double>();
    r.shannon = j.at("shannon").get<double>();
    r.ratio_thm = opt("ratio_thm");
    r.ratio_conj = opt("ratio_conj");
    r.fd_residual = j.at("fd_residual").get<double>();
    r.stm_ok = j.at("stm_ok").get<bool>();
    r.elapsed = j.at("elapsed").get<double>();
    if (j.contains("error")) r.error = j["error"].get<std::string>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

std::string format_json(std::span<const TrialRecord> records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records) arr.push_back(to_json(r));
  return arr.dump(2) + "\n";
}

std::vector<TrialRecord> parse_json_report(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  if (!doc.is_array()) throw Error(ErrorKind::ParseError, "report must be a JSON array");
  std::vector<TrialRecord> out;
  for (const auto& j : doc) out.push_back(record_from_json(j));
  return out;
}

void write_report(std::span<const TrialRecord> records, const std::string& path,
                  ReportFormat format) {
  write_text_file(path, format == ReportFormat::Csv ? format_csv(records) : format_json(records));
}

}  // namespace mixrate
