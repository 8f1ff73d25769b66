#include "mixrate/ensemble_io.hpp"

#include <fstream>
#include <sstream>

#include "mixrate/error.hpp"

namespace mixrate {

using nlohmann::json;

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const nlohmann::json& j, std::size_t dim) {
  if (!j.is_array() || j.size() != dim) {
    throw Error(ErrorKind::ParseError, "matrix must have " + std::to_string(dim) + " rows");
  }
  std::vector<Complex> entries;
  entries.reserve(dim * dim);
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != dim) {
      throw Error(ErrorKind::ParseError, "matrix row must have " + std::to_string(dim) + " entries");
    }
    for (const auto& z : row) {
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
        throw Error(ErrorKind::ParseError, "matrix entry must be a [re, im] pair");
      }
      entries.emplace_back(z[0].get<double>(), z[1].get<double>());
    }
  }
  return ComplexMatrix(dim, std::move(entries));
}

namespace {

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

std::size_t read_dim(const json& doc) {
  if (!doc.is_object() || !doc.contains("dim") || !doc["dim"].is_number_integer() ||
      doc["dim"].get<long long>() < 1) {
    throw Error(ErrorKind::ParseError, "missing or invalid \"dim\"");
  }
  return doc["dim"].get<std::size_t>();
}

const json& read_array(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_array()) {
    throw Error(ErrorKind::ParseError, std::string("missing array \"") + key + "\"");
  }
  return doc[key];
}

}  // namespace

Ensemble parse_ensemble(std::string_view text) {
  const json doc = parse_json(text);
  const std::size_t dim = read_dim(doc);
  const json& probs_j = read_array(doc, "probabilities");
  const json& states_j = read_array(doc, "states");

  std::vector<double> probs;
  for (const auto& p : probs_j) {
    if (!p.is_number()) throw Error(ErrorKind::ParseError, "probability must be a number");
    probs.push_back(p.get<double>());
  }
  std::vector<DensityMatrix> states;
  for (std::size_t x = 0; x < states_j.size(); ++x) {
    states.emplace_back(matrix_from_json(states_j[x], dim), x);
  }
  return Ensemble(std::move(probs), std::move(states));
}

std::string serialize_ensemble(const Ensemble& e) {
  json doc;
  doc["dim"] = e.dim();
  doc["probabilities"] = std::vector<double>(e.probabilities().begin(), e.probabilities().end());
  json states = json::array();
  for (const auto& s : e.states()) states.push_back(matrix_to_json(s.matrix()));
  doc["states"] = std::move(states);
  return doc.dump();
}

HamiltonianSet parse_hamiltonians(std::string_view text, bool normalized) {
  const json doc = parse_json(text);
  const std::size_t dim = read_dim(doc);
  const json& hams_j = read_array(doc, "hamiltonians");
  std::vector<Hamiltonian> hams;
  for (std::size_t x = 0; x < hams_j.size(); ++x) {
    hams.emplace_back(matrix_from_json(hams_j[x], dim), normalized, x);
  }
  return HamiltonianSet(std::move(hams));
}

std::string serialize_hamiltonians(const HamiltonianSet& hams) {
  json doc;
  doc["dim"] = hams.dim();
  json arr = json::array();
  for (const auto& h : hams) arr.push_back(matrix_to_json(h.matrix()));
  doc["hamiltonians"] = std::move(arr);
  return doc.dump();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path);
}

}  // namespace mixrate
