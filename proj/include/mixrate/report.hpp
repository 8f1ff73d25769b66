#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mixrate/harness.hpp"

namespace mixrate {

enum class ReportFormat { Csv, Json };

inline constexpr const char* kCsvHeader =
    "trial_id,seed,dim,n_states,probs,max_rate,binary_max_rate,bound_thm,shannon,ratio_thm,"
    "ratio_conj,fd_residual,stm_ok,elapsed";

/// Header line plus one line per record. Doubles print with 17 significant
/// digits; absent optionals are empty fields; probs are ';'-joined.
std::string format_csv(std::span<const TrialRecord> records);
std::vector<TrialRecord> parse_csv(std::string_view text);

nlohmann::json to_json(const TrialRecord& r);
TrialRecord record_from_json(const nlohmann::json& j);
std::string format_json(std::span<const TrialRecord> records);
std::vector<TrialRecord> parse_json_report(std::string_view text);

/// Throws IoError.
void write_report(std::span<const TrialRecord> records, const std::string& path,
                  ReportFormat format);

}  // namespace mixrate
