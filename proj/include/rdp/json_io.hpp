#pragma once

#include <json.hpp>

#include "rdp/matrix.hpp"

namespace rdp {

inline nlohmann::json int_json(const Integer& x) {
  if (x.fits_int64()) return x.to_int64();
  return x.str();
}

inline Integer json_int(const nlohmann::json& j) {
  if (j.is_string()) return Integer::parse(j.get<std::string>());
  return Integer(static_cast<long long>(j.get<int64_t>()));
}

inline nlohmann::json matrix_json(const IntMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (size_t j = 0; j < m.cols(); ++j) row.push_back(int_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

inline IntMatrix json_matrix(const nlohmann::json& j) {
  IntMatrix m;
  for (const auto& row : j) {
    IntVector v;
    for (const auto& x : row) v.push_back(json_int(x));
    m.append_row(v);
  }
  return m;
}

}  // namespace rdp
