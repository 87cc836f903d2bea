// Copyright 2026 The ofts Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <stdexcept>
#include <string>
#include <tuple>

#include "json.hpp"
#include "ofts/ilf.hpp"

namespace ofts {
namespace {

using nlohmann::json;

json vector_json(const Eigen::Ref<const Eigen::VectorXd>& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

const json& require(const json& doc, const char* key) {
  if (!doc.contains(key)) {
    throw std::invalid_argument(std::string("ILF parameters: missing key '") + key + "'");
  }
  return doc.at(key);
}

double number(const json& doc, const char* key) {
  const json& v = require(doc, key);
  if (!v.is_number()) {
    throw std::invalid_argument(std::string("ILF parameters: '") + key + "' must be a number");
  }
  return v.get<double>();
}

Vector vector_from(const json& v, const char* key) {
  // A single-row matrix is accepted for Y.
  const json& row = (v.is_array() && v.size() == 1 && v[0].is_array()) ? v[0] : v;
  if (!row.is_array() || row.empty()) {
    throw std::invalid_argument(std::string("ILF parameters: '") + key +
                                "' must be a non-empty array");
  }
  Vector out(static_cast<Eigen::Index>(row.size()));
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (!row[i].is_number()) {
      throw std::invalid_argument(std::string("ILF parameters: '") + key +
                                  "' has a non-numeric entry");
    }
    out(static_cast<Eigen::Index>(i)) = row[i].get<double>();
  }
  return out;
}

Matrix matrix_from(const json& v, const char* key) {
  if (!v.is_array() || v.empty()) {
    throw std::invalid_argument(std::string("ILF parameters: '") + key +
                                "' must be an array of rows");
  }
  const auto n = static_cast<Eigen::Index>(v.size());
  Matrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& row = v[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw std::invalid_argument(std::string("ILF parameters: '") + key +
                                  "' must be square");
    }
    out.row(i) = vector_from(row, key).transpose();
  }
  return out;
}

}  // namespace

std::string ilf_params_to_json(const ILFParams& params) {
  json doc;
  json rows = json::array();
  for (Eigen::Index i = 0; i < params.dim(); ++i) {
    rows.push_back(vector_json(params.X().row(i).transpose()));
  }
  doc["X"] = rows;
  doc["Y"] = vector_json(params.Y().transpose());
  doc["nu1"] = params.nu1();
  doc["nu2"] = params.nu2();
  doc["r1"] = vector_json(params.r1());
  doc["r2"] = vector_json(params.r2());
  doc["zeta1"] = params.zeta1();
  doc["zeta2"] = params.zeta2();
  doc["zeta3"] = params.zeta3();
  return doc.dump(2);
}

ILFParams ilf_params_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("ILF parameters: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("ILF parameters: expected an object");
  const Matrix x = matrix_from(require(doc, "X"), "X");
  const Vector y = vector_from(require(doc, "Y"), "Y");
  const double nu1 = number(doc, "nu1");
  const double nu2 = number(doc, "nu2");
  Vector r1;
  Vector r2;
  if (doc.contains("r1") || doc.contains("r2")) {
    r1 = vector_from(require(doc, "r1"), "r1");
    r2 = vector_from(require(doc, "r2"), "r2");
  } else if (x.rows() == 2) {
    std::tie(r1, r2) = planar_ilf_weights(nu1, nu2);
  } else {
    throw std::invalid_argument("ILF parameters: r1 and r2 are required when n != 2");
  }
  return ILFParams(x, y.transpose(), nu1, nu2, r1, r2, number(doc, "zeta1"),
                   number(doc, "zeta2"), number(doc, "zeta3"));
}

}  // namespace ofts
