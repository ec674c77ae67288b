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

#include "delay_lqgame/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "delay_lqgame/errors.hpp"

namespace delay_lqgame {
namespace {

using nlohmann::json;

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from(const json& j, int rows, int cols, const std::string& path) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows) {
    throw ParseError(path, "expected " + std::to_string(rows) + " rows");
  }
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != cols) {
      throw ParseError(path + "/" + std::to_string(r),
                       "expected " + std::to_string(cols) + " entries");
    }
    for (int c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) {
        throw ParseError(path + "/" + std::to_string(r) + "/" + std::to_string(c),
                         "expected a number");
      }
      m(r, c) = j[r][c].get<double>();
    }
  }
  return m;
}

int int_field(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number_integer()) {
    throw ParseError(std::string("/") + key, "expected an integer");
  }
  return doc[key].get<int>();
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_field(std::string_view field, int line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError("line " + std::to_string(line), "bad number '" + std::string(field) + "'");
  }
  return v;
}

void append_row(std::string& out, const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
}

std::string td_header(std::size_t p) {
  std::string h;
  for (std::size_t i = 1; i <= p; ++i) h += "td" + std::to_string(i) + ",";
  return h;
}

std::string j_header(std::size_t p) {
  std::string h = "j_total";
  for (std::size_t i = 1; i <= p; ++i) h += ",j_" + std::to_string(i);
  return h;
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw Error("format_double: conversion failed");
  return std::string(buf.data(), ptr);
}

std::string plant_fingerprint(const DiscretePlant& plant) {
  // FNV-1a over dimensions and the IEEE-754 bit patterns of every entry.
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  auto mix = [&](std::uint64_t word) {
    for (int b = 0; b < 8; ++b) {
      hash ^= (word >> (8 * b)) & 0xffU;
      hash *= 0x100000001b3ULL;
    }
  };
  auto mix_matrix = [&](const Matrix& m) {
    mix(static_cast<std::uint64_t>(m.rows()));
    mix(static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) mix(std::bit_cast<std::uint64_t>(m(r, c)));
    }
  };
  mix_matrix(plant.phi());
  for (int i = 0; i < plant.controllers(); ++i) {
    mix_matrix(plant.gamma0(i));
    mix_matrix(plant.gamma1(i));
  }
  std::array<char, 17> hex{};
  std::snprintf(hex.data(), hex.size(), "%016llx", static_cast<unsigned long long>(hash));
  return hex.data();
}

std::string trajectory_csv(const Trajectory& trajectory) {
  const int m = static_cast<int>(trajectory.states.front().size());
  const int p = trajectory.controllers();
  const int n = p ? static_cast<int>(trajectory.controls.front().front().size()) : 0;

  std::string out = "k";
  for (int s = 1; s <= m; ++s) out += ",x_" + std::to_string(s);
  for (int i = 1; i <= p; ++i) {
    for (int c = 1; c <= n; ++c) out += ",u_" + std::to_string(i) + "_" + std::to_string(c);
  }
  out += '\n';
  for (int k = 0; k <= trajectory.horizon(); ++k) {
    out += std::to_string(k);
    for (int s = 0; s < m; ++s) out += "," + format_double(trajectory.states[k][s]);
    for (int i = 0; i < p; ++i) {
      for (int c = 0; c < n; ++c) {
        out += ',';
        if (k < trajectory.horizon()) out += format_double(trajectory.controls[i][k][c]);
      }
    }
    out += '\n';
  }
  return out;
}

Trajectory parse_trajectory_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  for (auto line : split(text, '\n')) {
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.size() < 2) throw ParseError("line 1", "trajectory needs a header and rows");

  const auto header = split(lines[0], ',');
  int m = 0;
  int p = 0;
  int n = 0;
  for (std::size_t c = 1; c < header.size(); ++c) {
    const auto name = header[c];
    if (name.starts_with("x_")) {
      ++m;
    } else if (name.starts_with("u_")) {
      const auto parts = split(name, '_');
      if (parts.size() != 3) throw ParseError("line 1", "bad column '" + std::string(name) + "'");
      p = std::max(p, static_cast<int>(parse_field(parts[1], 1)));
      n = std::max(n, static_cast<int>(parse_field(parts[2], 1)));
    } else {
      throw ParseError("line 1", "unknown column '" + std::string(name) + "'");
    }
  }
  if (m == 0 || static_cast<int>(header.size()) != 1 + m + p * n) {
    throw ParseError("line 1", "inconsistent trajectory header");
  }

  const int horizon = static_cast<int>(lines.size()) - 2;
  Trajectory tr;
  tr.controls.assign(p, {});
  for (int k = 0; k <= horizon; ++k) {
    const int line_no = k + 2;
    const auto fields = split(lines[k + 1], ',');
    if (fields.size() != header.size()) {
      throw ParseError("line " + std::to_string(line_no), "wrong number of fields");
    }
    Vector x(m);
    for (int s = 0; s < m; ++s) x[s] = parse_field(fields[1 + s], line_no);
    tr.states.push_back(std::move(x));
    if (k == horizon) break;
    for (int i = 0; i < p; ++i) {
      Vector u(n);
      for (int c = 0; c < n; ++c) u[c] = parse_field(fields[1 + m + i * n + c], line_no);
      tr.controls[i].push_back(std::move(u));
    }
  }
  return tr;
}

std::string trajectory_sidecar(const Trajectory& trajectory, const RunMetadata& meta) {
  json doc;
  doc["scheme"] = std::string(to_string(meta.scheme));
  doc["delays"] = meta.delays;
  doc["seed"] = meta.seed;
  doc["horizon"] = trajectory.horizon();
  doc["j_total"] = trajectory.total_cost;
  doc["j"] = trajectory.player_costs;
  if (meta.deviation) {
    const auto& d = *meta.deviation;
    doc["nash_check"] = {{"trials", d.trials},
                         {"min_delta", d.min_delta},
                         {"worst_trial", d.worst_trial},
                         {"pass", d.pass}};
  }
  return doc.dump(2) + "\n";
}

std::string discrete_plant_json(const DiscretePlant& plant) {
  json doc;
  doc["states"] = plant.states();
  doc["inputs"] = plant.inputs();
  doc["controllers"] = plant.controllers();
  doc["Phi"] = matrix_json(plant.phi());
  json g0 = json::array();
  json g1 = json::array();
  for (int i = 0; i < plant.controllers(); ++i) {
    g0.push_back(matrix_json(plant.gamma0(i)));
    g1.push_back(matrix_json(plant.gamma1(i)));
  }
  doc["Gamma0"] = std::move(g0);
  doc["Gamma1"] = std::move(g1);
  doc["fingerprint"] = plant_fingerprint(plant);
  return doc.dump(2) + "\n";
}

std::string gains_json(const GainSchedule& gains, const DiscretePlant& plant) {
  json doc;
  doc["states"] = gains.states();
  doc["inputs"] = gains.inputs();
  doc["controllers"] = gains.controllers();
  doc["horizon"] = gains.horizon();
  doc["scheme"] = std::string(to_string(gains.scheme()));
  doc["plant_fingerprint"] = plant_fingerprint(plant);
  json steps = json::array();
  for (int k = 0; k < gains.horizon(); ++k) {
    json per = json::array();
    for (int i = 0; i < gains.controllers(); ++i) {
      json b = json::array();
      for (int j = 0; j < gains.controllers(); ++j) b.push_back(matrix_json(gains.b_coef(k, i, j)));
      per.push_back({{"A", matrix_json(gains.a_coef(k, i))}, {"B", std::move(b)}});
    }
    steps.push_back(std::move(per));
  }
  doc["steps"] = std::move(steps);
  return doc.dump(2) + "\n";
}

LoadedGains parse_gains_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("/", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("/", "expected an object");
  const int m = int_field(doc, "states");
  const int n = int_field(doc, "inputs");
  const int p = int_field(doc, "controllers");
  const int horizon = int_field(doc, "horizon");
  if (m <= 0 || n <= 0 || p <= 0 || horizon <= 0) {
    throw ParseError("/", "dimensions must be positive");
  }
  if (!doc.contains("scheme") || !doc["scheme"].is_string()) {
    throw ParseError("/scheme", "expected a string");
  }
  if (!doc.contains("plant_fingerprint") || !doc["plant_fingerprint"].is_string()) {
    throw ParseError("/plant_fingerprint", "expected a string");
  }
  const json& steps = doc["steps"];
  if (!steps.is_array() || static_cast<int>(steps.size()) != horizon) {
    throw ParseError("/steps", "expected one entry per step");
  }

  const BlockLayout layout{m, n, p};
  std::vector<Matrix> coefs;
  for (int k = 0; k < horizon; ++k) {
    const std::string sp = "/steps/" + std::to_string(k);
    if (!steps[k].is_array() || static_cast<int>(steps[k].size()) != p) {
      throw ParseError(sp, "expected one entry per controller");
    }
    Matrix x(p * n, layout.dim());
    for (int i = 0; i < p; ++i) {
      const std::string ip = sp + "/" + std::to_string(i);
      const json& entry = steps[k][i];
      if (!entry.is_object() || !entry.contains("A") || !entry.contains("B")) {
        throw ParseError(ip, "expected {A, B}");
      }
      x.block(i * n, 0, n, m) = matrix_from(entry["A"], n, m, ip + "/A");
      const json& b = entry["B"];
      if (!b.is_array() || static_cast<int>(b.size()) != p) {
        throw ParseError(ip + "/B", "expected one matrix per controller");
      }
      for (int j = 0; j < p; ++j) {
        x.block(i * n, layout.offset(j + 1), n, n) =
            matrix_from(b[j], n, n, ip + "/B/" + std::to_string(j));
      }
    }
    coefs.push_back(std::move(x));
  }
  return LoadedGains{
      GainSchedule(m, n, p, scheme_from_string(doc["scheme"].get<std::string>()),
                   std::move(coefs)),
      doc["plant_fingerprint"].get<std::string>()};
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  const std::size_t p = rows.empty() ? 2 : rows.front().delays.size();
  std::string out = td_header(p) + j_header(p) + (p >= 2 ? ",ratio" : "") + "\n";
  for (const auto& row : rows) {
    std::vector<double> values = row.delays;
    values.push_back(row.j_total);
    values.insert(values.end(), row.j.begin(), row.j.end());
    if (p >= 2) values.push_back(row.ratio);
    append_row(out, values);
    out += '\n';
  }
  return out;
}

std::string sweep_json(const std::vector<SweepRow>& rows) {
  json out = json::array();
  for (const auto& row : rows) {
    json r = {{"delays", row.delays}, {"j_total", row.j_total}, {"j", row.j}};
    if (row.j.size() >= 2) r["ratio"] = row.ratio;
    out.push_back(std::move(r));
  }
  return out.dump(2) + "\n";
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
  const std::size_t p = rows.empty() ? 2 : rows.front().delays.size();
  std::string out = "scheme," + td_header(p) + j_header(p) + "\n";
  for (const auto& row : rows) {
    std::vector<double> values = row.delays;
    values.push_back(row.j_total);
    values.insert(values.end(), row.j.begin(), row.j.end());
    out += std::string(to_string(row.scheme)) + ",";
    append_row(out, values);
    out += '\n';
  }
  return out;
}

std::string comparison_json(const std::vector<ComparisonRow>& rows) {
  json out = json::array();
  for (const auto& row : rows) {
    out.push_back({{"scheme", std::string(to_string(row.scheme))},
                   {"delays", row.delays},
                   {"j_total", row.j_total},
                   {"j", row.j}});
  }
  return out.dump(2) + "\n";
}

}  // namespace delay_lqgame
