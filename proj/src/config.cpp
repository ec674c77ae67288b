// Copyright 2026 The delay-lqgame Authors
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

#include "delay_lqgame/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "delay_lqgame/errors.hpp"

namespace delay_lqgame {
namespace {

using nlohmann::json;

std::string at(const std::string& path, std::string_view key) {
  return path + "/" + std::string(key);
}

std::string at(const std::string& path, std::size_t i) {
  return path + "/" + std::to_string(i);
}

void expect_keys(const json& j, const std::string& path,
                 std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw ParseError(path.empty() ? "/" : path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw ParseError(at(path, key), "unknown field");
  }
}

const json& require(const json& j, const std::string& path, std::string_view key) {
  auto it = j.find(std::string(key));
  if (it == j.end()) throw ParseError(at(path, key), "missing required field");
  return *it;
}

double parse_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path, "expected a number");
  return j.get<double>();
}

Vector parse_vector(const json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = parse_number(j[i], at(path, i));
  return v;
}

Matrix parse_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) {
    throw ParseError(path, "expected a non-empty array of rows");
  }
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) throw ParseError(at(path, 0), "expected a non-empty row");
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string row_path = at(path, r);
    if (!j[r].is_array() || j[r].size() != cols) {
      throw ParseError(row_path, "rows must all have " + std::to_string(cols) + " entries");
    }
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = parse_number(j[r][c], at(row_path, c));
  }
  return m;
}

std::vector<Matrix> parse_matrix_list(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ParseError(path, "expected a non-empty list of matrices");
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_matrix(j[i], at(path, i)));
  return out;
}

double parse_delay(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_object()) {
    expect_keys(j, path, {"sc", "ca"});
    return parse_number(require(j, path, "sc"), at(path, "sc")) +
           parse_number(require(j, path, "ca"), at(path, "ca"));
  }
  throw ParseError(path, "expected a delay number or {sc, ca} object");
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json matrix_list_json(const std::vector<Matrix>& ms) {
  json out = json::array();
  for (const auto& m : ms) out.push_back(matrix_json(m));
  return out;
}

std::vector<double> grid(double lo, double hi, int points) {
  std::vector<double> out;
  for (int i = 0; i < points; ++i) out.push_back(lo + (hi - lo) * i / (points - 1));
  return out;
}

}  // namespace

ExperimentConfig load_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("/", std::string("malformed JSON: ") + e.what());
  }
  expect_keys(doc, "", {"plant", "weights", "x0", "scheme", "sweep"});

  const json& pj = require(doc, "", "plant");
  expect_keys(pj, "/plant", {"A", "B", "delays", "h"});
  Matrix a = parse_matrix(require(pj, "/plant", "A"), "/plant/A");
  std::vector<Matrix> b = parse_matrix_list(require(pj, "/plant", "B"), "/plant/B");
  const json& dj = require(pj, "/plant", "delays");
  if (!dj.is_array()) throw ParseError("/plant/delays", "expected a list");
  std::vector<double> delays;
  for (std::size_t i = 0; i < dj.size(); ++i) {
    delays.push_back(parse_delay(dj[i], at("/plant/delays", i)));
  }
  const double h = parse_number(require(pj, "/plant", "h"), "/plant/h");
  ContinuousPlant plant(std::move(a), std::move(b), std::move(delays), h);

  const json& wj = require(doc, "", "weights");
  expect_keys(wj, "/weights", {"Q", "QN", "R", "horizon"});
  std::vector<Matrix> q = parse_matrix_list(require(wj, "/weights", "Q"), "/weights/Q");
  std::vector<Matrix> qn =
      wj.contains("QN") ? parse_matrix_list(wj["QN"], "/weights/QN") : q;
  std::vector<Matrix> r = parse_matrix_list(require(wj, "/weights", "R"), "/weights/R");
  const json& hj = require(wj, "/weights", "horizon");
  if (!hj.is_number_integer()) throw ParseError("/weights/horizon", "expected an integer");
  GameWeights weights(std::move(q), std::move(qn), std::move(r), hj.get<int>());

  Vector x0 = doc.contains("x0") ? parse_vector(doc["x0"], "/x0")
                                 : Vector::Zero(plant.states());

  Scheme scheme = Scheme::kProposed;
  if (doc.contains("scheme")) {
    if (!doc["scheme"].is_string()) throw ParseError("/scheme", "expected a string");
    scheme = scheme_from_string(doc["scheme"].get<std::string>());
  }

  std::optional<DelaySweep> sweep;
  if (doc.contains("sweep")) {
    const json& sj = doc["sweep"];
    expect_keys(sj, "/sweep", {"delays_grid"});
    const json& gj = require(sj, "/sweep", "delays_grid");
    if (!gj.is_array()) throw ParseError("/sweep/delays_grid", "expected a list of lists");
    DelaySweep s;
    for (std::size_t i = 0; i < gj.size(); ++i) {
      const std::string path = at("/sweep/delays_grid", i);
      if (!gj[i].is_array()) throw ParseError(path, "expected a list of delays");
      std::vector<double> values;
      for (std::size_t k = 0; k < gj[i].size(); ++k) {
        values.push_back(parse_number(gj[i][k], at(path, k)));
      }
      s.grid.push_back(std::move(values));
    }
    sweep = std::move(s);
  }

  ExperimentConfig config{std::move(plant), std::move(weights), std::move(x0),
                          scheme, std::move(sweep)};
  validate(config);
  return config;
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), "cannot open configuration file");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& config) {
  const auto& p = config.plant;
  const auto& w = config.weights;
  json doc;
  doc["plant"] = {{"A", matrix_json(p.a())},
                  {"B", matrix_list_json(p.b())},
                  {"delays", p.delays()},
                  {"h", p.h()}};
  doc["weights"] = {{"Q", matrix_list_json(w.q())},
                    {"QN", matrix_list_json(w.qn())},
                    {"R", matrix_list_json(w.r())},
                    {"horizon", w.horizon()}};
  doc["x0"] = std::vector<double>(config.x0.data(), config.x0.data() + config.x0.size());
  doc["scheme"] = std::string(to_string(config.scheme));
  if (config.sweep) doc["sweep"] = {{"delays_grid", config.sweep->grid}};
  return doc.dump(2) + "\n";
}

ExperimentConfig preset_generic() {
  Matrix a(2, 2);
  a << 0.0, 1.0, -3.0, -4.0;
  Matrix b(2, 1);
  b << 0.0, 1.0;
  ContinuousPlant plant(a, {b, b}, {0.01, 0.01}, 0.05);

  const Matrix q = 100.0 * Matrix::Identity(2, 2);
  const Matrix r = Matrix::Identity(1, 1);
  GameWeights weights({q, q}, {q, q}, {r, r}, 50);

  Vector x0(2);
  x0 << 1.0, 0.0;
  const auto delays = grid(0.0, 0.02, 6);
  ExperimentConfig config{std::move(plant), std::move(weights), std::move(x0),
                          Scheme::kProposed, DelaySweep{{delays, delays}}};
  validate(config);
  return config;
}

ExperimentConfig preset_lfc() {
  constexpr double kT12 = 2.4;
  constexpr double kKp = 1.0;
  constexpr double kTp = 0.2;
  constexpr double kTt = 0.3;
  constexpr double kTg = 0.08;
  constexpr double kDroop = 0.2545;
  constexpr int kTie = 6;

  Matrix a = Matrix::Zero(9, 9);
  // Per area: frequency, generator output, valve position, requested output.
  const int areas[2][4] = {{0, 1, 2, 7}, {3, 4, 5, 8}};
  for (const auto& area : areas) {
    const int f = area[0], pg = area[1], xg = area[2], pc = area[3];
    a(f, f) = -1.0 / kTp;
    a(f, pg) = kKp / kTp;
    a(f, kTie) = kKp / kTp;
    a(pg, pg) = -1.0 / kTt;
    a(pg, xg) = 1.0 / kTt;
    a(xg, f) = -1.0 / (kDroop * kTg);
    a(xg, xg) = -1.0 / kTg;
    a(xg, pc) = 1.0 / kTg;
  }
  a(kTie, 0) = kT12;
  a(kTie, 3) = -kT12;

  Matrix b1 = Matrix::Zero(9, 1);
  Matrix b2 = Matrix::Zero(9, 1);
  b1(7, 0) = 1.0;
  b2(8, 0) = 1.0;
  ContinuousPlant plant(a, {b1, b2}, {0.004, 0.004}, 0.01);

  Matrix q = Matrix::Zero(9, 9);
  q(kTie, kTie) = 1.0;
  const Matrix r = Matrix::Identity(1, 1);
  GameWeights weights({q, q}, {q, q}, {r, r}, 50);

  Vector x0 = Vector::Zero(9);
  x0[0] = 0.1;
  const auto delays = grid(0.0, 0.008, 4);
  ExperimentConfig config{std::move(plant), std::move(weights), std::move(x0),
                          Scheme::kProposed, DelaySweep{{delays, delays}}};
  validate(config);
  return config;
}

}  // namespace delay_lqgame
