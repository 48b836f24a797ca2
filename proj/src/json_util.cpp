#include "ega/json_util.hpp"

#include <cstdint>
#include <cstdio>

#include "ega/error.hpp"

using nlohmann::json;

namespace ega {

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (long i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vector vector_from_json(const json& doc) {
  if (!doc.is_array()) throw ValidationError("expected JSON array for vector");
  Vector v(doc.size());
  for (size_t i = 0; i < doc.size(); ++i) v[static_cast<long>(i)] = doc[i].get<double>();
  return v;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (long r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (long c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& doc) {
  if (!doc.is_array()) throw ValidationError("expected JSON array for matrix");
  const long rows = static_cast<long>(doc.size());
  if (rows == 0) return Matrix(0, 0);
  const long cols = static_cast<long>(doc[0].size());
  Matrix m(rows, cols);
  for (long r = 0; r < rows; ++r) {
    if (static_cast<long>(doc[r].size()) != cols) {
      throw ValidationError("ragged JSON matrix");
    }
    for (long c = 0; c < cols; ++c) m(r, c) = doc[r][c].get<double>();
  }
  return m;
}

std::string fnv1a_hex(const std::string& text) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace ega
