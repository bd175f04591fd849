// Copyright 2026 The norbip authors
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

#include "norbip/instance_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace norbip {

namespace {

using nlohmann::json;

std::string join_issues(const std::vector<std::string>& issues) {
  std::ostringstream os;
  os << "instance parse failed (" << issues.size() << " issue(s)):";
  for (const auto& s : issues) os << "\n  - " << s;
  return os.str();
}

struct CellReader {
  std::vector<std::string> issues;

  Rational cell(const json& value, const std::string& where) {
    try {
      if (value.is_string()) return Rational::parse(value.get<std::string>());
      if (value.is_number_integer()) return Rational(value.get<std::int64_t>(), 1);
      if (value.is_number_unsigned()) {
        return Rational(mpz_class(value.dump()), mpz_class(1));
      }
      if (value.is_number_float()) {
        issues.push_back(where + ": floating-point literal " + value.dump() +
                         "; write it as a string (\"1/4\" or \"0.25\")");
        return Rational(0);
      }
      issues.push_back(where + ": expected a rational, got " + value.dump());
    } catch (const std::exception& e) {
      issues.push_back(where + ": " + e.what());
    }
    return Rational(0);
  }

  RationalVector vector(const json& doc, const std::string& key, Index want) {
    RationalVector out = RationalVector::Zero(want < 0 ? 0 : want);
    if (!doc.contains(key)) {
      issues.push_back("missing field '" + key + "'");
      return out;
    }
    const json& arr = doc[key];
    if (!arr.is_array()) {
      issues.push_back("'" + key + "' is not an array");
      return out;
    }
    out = RationalVector::Zero(static_cast<Index>(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i)
      out(static_cast<Index>(i)) = cell(arr[i], key + "[" + std::to_string(i) + "]");
    return out;
  }

  RationalMatrix matrix(const json& doc, const std::string& key, Index want_rows) {
    RationalMatrix out(0, 0);
    if (!doc.contains(key)) {
      issues.push_back("missing field '" + key + "'");
      return out;
    }
    const json& arr = doc[key];
    if (!arr.is_array()) {
      issues.push_back("'" + key + "' is not an array of rows");
      return out;
    }
    const Index rows = static_cast<Index>(arr.size());
    Index cols = 0;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_array()) {
        issues.push_back("'" + key + "' row " + std::to_string(i) + " is not an array");
        return out;
      }
      cols = std::max(cols, static_cast<Index>(arr[i].size()));
    }
    out = RationalMatrix::Zero(rows, cols);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (static_cast<Index>(arr[i].size()) != cols) {
        issues.push_back("'" + key + "' row " + std::to_string(i) + " has " +
                         std::to_string(arr[i].size()) + " entries, expected " +
                         std::to_string(cols));
      }
      for (std::size_t j = 0; j < arr[i].size(); ++j) {
        out(static_cast<Index>(i), static_cast<Index>(j)) =
            cell(arr[i][j], key + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
      }
    }
    (void)want_rows;
    return out;
  }

  Index count(const json& doc, const std::string& key) {
    if (!doc.contains(key) || !doc[key].is_number_integer()) {
      issues.push_back("missing or non-integer field '" + key + "'");
      return 0;
    }
    return doc[key].get<Index>();
  }
};

json vector_to_json(const RationalVector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i).str());
  return arr;
}

json matrix_to_json(const RationalMatrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

ParseError::ParseError(std::vector<std::string> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

BilevelInstance instance_from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError({std::string("invalid JSON: ") + e.what()});
  }
  if (!doc.is_object()) throw ParseError({"top-level JSON value is not an object"});

  CellReader reader;
  BilevelInstance inst;
  inst.name = doc.value("name", std::string("unnamed"));
  inst.n_u = reader.count(doc, "n_u");
  inst.n_l = reader.count(doc, "n_l");
  inst.m_u = reader.count(doc, "m_u");
  inst.m_l = reader.count(doc, "m_l");
  inst.c_x = reader.vector(doc, "c_x", inst.n_u);
  inst.c_y = reader.vector(doc, "c_y", inst.n_l);
  inst.G = reader.matrix(doc, "G", inst.m_u);
  inst.H = reader.matrix(doc, "H", inst.m_u);
  inst.q = reader.vector(doc, "q", inst.m_u);
  inst.A = reader.matrix(doc, "A", inst.m_l);
  inst.B = reader.matrix(doc, "B", inst.m_l);
  inst.b = reader.vector(doc, "b", inst.m_l);
  inst.d = reader.vector(doc, "d", inst.n_l);
  if (!reader.issues.empty()) throw ParseError(std::move(reader.issues));

  // Zero-row matrices lose their column count in JSON; restore it so that
  // empty instances still validate.
  if (inst.G.rows() == 0) inst.G.resize(0, inst.n_u);
  if (inst.H.rows() == 0) inst.H.resize(0, inst.n_l);
  if (inst.A.rows() == 0) inst.A.resize(0, inst.n_u);
  if (inst.B.rows() == 0) inst.B.resize(0, inst.n_l);
  return inst;
}

std::string instance_to_json_text(const BilevelInstance& inst) {
  json doc;
  doc["name"] = inst.name;
  doc["n_u"] = inst.n_u;
  doc["n_l"] = inst.n_l;
  doc["m_u"] = inst.m_u;
  doc["m_l"] = inst.m_l;
  doc["c_x"] = vector_to_json(inst.c_x);
  doc["c_y"] = vector_to_json(inst.c_y);
  doc["G"] = matrix_to_json(inst.G);
  doc["H"] = matrix_to_json(inst.H);
  doc["q"] = vector_to_json(inst.q);
  doc["A"] = matrix_to_json(inst.A);
  doc["B"] = matrix_to_json(inst.B);
  doc["b"] = vector_to_json(inst.b);
  doc["d"] = vector_to_json(inst.d);
  return doc.dump(2);
}

BilevelInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return instance_from_json_text(buffer.str());
}

void save_instance(const BilevelInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instance file '" + path + "'");
  out << instance_to_json_text(inst) << "\n";
}

}  // namespace norbip
