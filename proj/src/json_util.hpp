#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "frachill/error.hpp"
#include "frachill/types.hpp"

namespace frachill::detail {

using nlohmann::json;

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Schema, path.string() + ": " + e.what());
  }
}

inline const json& member(const json& doc, const char* key) {
  if (!doc.is_object()) fail(ErrorKind::Schema, "expected a JSON object");
  auto it = doc.find(key);
  if (it == doc.end()) fail(ErrorKind::Schema, std::string("missing field '") + key + "'");
  return *it;
}

inline double as_number(const json& v, const char* what) {
  if (!v.is_number()) fail(ErrorKind::Schema, std::string("'") + what + "' must be a number");
  return v.get<double>();
}

inline double number(const json& doc, const char* key) { return as_number(member(doc, key), key); }

inline double number_or(const json& doc, const char* key, double fallback) {
  return doc.contains(key) ? number(doc, key) : fallback;
}

inline int integer(const json& doc, const char* key) {
  const json& v = member(doc, key);
  if (!v.is_number_integer()) fail(ErrorKind::Schema, std::string("'") + key + "' must be an integer");
  return v.get<int>();
}

inline RVector vector_of(const json& v, const char* what) {
  if (!v.is_array()) fail(ErrorKind::Schema, std::string("'") + what + "' must be an array");
  RVector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = as_number(v[i], what);
  return out;
}

inline RMatrix matrix_of(const json& v, const char* what) {
  if (!v.is_array() || v.empty() || !v[0].is_array())
    fail(ErrorKind::Schema, std::string("'") + what + "' must be an array of rows");
  const std::size_t rows = v.size();
  const std::size_t cols = v[0].size();
  RMatrix out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!v[r].is_array() || v[r].size() != cols)
      fail(ErrorKind::DimensionMismatch, std::string("'") + what + "' has ragged rows");
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = as_number(v[r][c], what);
  }
  return out;
}

inline json matrix_to_json(const RMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

inline json vector_to_json(const RVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

}  // namespace frachill::detail
