#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "mixrate/complex_matrix.hpp"
#include "mixrate/ensemble.hpp"

namespace mixrate {

// Wire format (UTF-8 JSON):
//   ensemble:     {"dim": d, "probabilities": [p1, ...], "states": [M1, ...]}
//   hamiltonians: {"dim": d, "hamiltonians": [H1, ...]}
// Each matrix is d rows of d [re, im] pairs, row-major.

nlohmann::json matrix_to_json(const ComplexMatrix& m);
/// Throws ParseError on a shape mismatch or non-numeric entry.
ComplexMatrix matrix_from_json(const nlohmann::json& j, std::size_t dim);

/// Throws ParseError for malformed JSON / schema, InvariantViolation (with
/// member index) for data that parses but fails validation.
Ensemble parse_ensemble(std::string_view text);
std::string serialize_ensemble(const Ensemble& e);

HamiltonianSet parse_hamiltonians(std::string_view text, bool normalized = false);
std::string serialize_hamiltonians(const HamiltonianSet& hams);

/// Reads a whole file; throws IoError.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace mixrate
