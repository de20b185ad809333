// Copyright 2026 The lpusim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lpu/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace lpu::io {

using nlohmann::json;

namespace {

void check_schema(const json& j, const std::string& expected) {
  if (!j.contains("schema") || !j["schema"].is_string())
    throw std::runtime_error("file has no schema field");
  const std::string s = j["schema"];
  if (s != expected)
    throw std::runtime_error("incompatible schema: found '" + s + "', expected '" + expected +
                             "'");
}

}  // namespace

void atomic_write(const std::filesystem::path& path, const std::string& contents) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << contents;
    if (!out.good()) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string matrix_to_json(const CMat& u) {
  json j;
  j["schema"] = kMatrixSchema;
  j["dim"] = u.rows();
  json entries = json::array();
  for (int r = 0; r < u.rows(); ++r)
    for (int c = 0; c < u.cols(); ++c)
      entries.push_back({u(r, c).real(), u(r, c).imag()});
  j["entries"] = entries;
  return j.dump(2) + "\n";
}

CMat matrix_from_json(const std::string& text) {
  const json j = json::parse(text);
  check_schema(j, kMatrixSchema);
  const int dim = j.at("dim");
  const auto& entries = j.at("entries");
  if (static_cast<int>(entries.size()) != dim * dim)
    throw std::runtime_error("matrix file: entry count does not match dim");
  CMat u(dim, dim);
  int k = 0;
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) {
      u(r, c) = Complex(entries[k][0], entries[k][1]);
      ++k;
    }
  return u;
}

void save_matrix(const std::filesystem::path& path, const CMat& u) {
  atomic_write(path, matrix_to_json(u));
}

CMat load_matrix(const std::filesystem::path& path) { return matrix_from_json(read_file(path)); }

std::string mesh_config_to_json(const mesh::MeshConfig& c) {
  json j;
  j["schema"] = kMeshConfigSchema;
  j["mode_count"] = c.mode_count();
  json params = json::array();
  for (const auto& p : c.params())
    params.push_back({{"i", p.row}, {"j", p.diag}, {"alpha", p.alpha}, {"phi", p.phi}});
  j["params"] = params;
  return j.dump(2) + "\n";
}

mesh::MeshConfig mesh_config_from_json(const std::string& text) {
  const json j = json::parse(text);
  check_schema(j, kMeshConfigSchema);
  mesh::MeshConfig c(j.at("mode_count"));
  std::size_t seen = 0;
  for (const auto& p : j.at("params")) {
    c.set(p.at("i"), p.at("j"), p.at("alpha"), p.at("phi"));
    ++seen;
  }
  if (seen != c.params().size())
    throw std::runtime_error("mesh config file: wrong number of MZI entries");
  return c;
}

void save_mesh_config(const std::filesystem::path& path, const mesh::MeshConfig& c) {
  atomic_write(path, mesh_config_to_json(c));
}

mesh::MeshConfig load_mesh_config(const std::filesystem::path& path) {
  return mesh_config_from_json(read_file(path));
}

std::string chip_to_json(const chip::ChipModel& c) {
  json j;
  j["schema"] = kChipSchema;
  j["mode_count"] = c.mode_count;
  json heaters = json::array();
  for (const auto& h : c.heaters)
    heaters.push_back({{"alpha0", h.alpha0},
                       {"beta", h.beta},
                       {"gamma", h.gamma},
                       {"v_min", h.v_min},
                       {"v_max", h.v_max}});
  j["heaters"] = heaters;
  json cal = json::array();
  for (const auto& h : c.calibrated)
    cal.push_back({{"alpha0", h.alpha0},
                   {"beta", h.beta},
                   {"gamma", h.gamma},
                   {"v_min", h.v_min},
                   {"v_max", h.v_max}});
  j["calibrated"] = cal;
  json groups = json::array();
  for (const auto& g : c.crosstalk.groups)
    groups.push_back({{"heaters", g.heaters},
                      {"heater_resistance", g.heater_resistance},
                      {"ground_resistance", g.ground_resistance}});
  j["crosstalk_groups"] = groups;
  j["precorrect_crosstalk"] = c.precorrect_crosstalk;
  j["input_transmission"] = c.input_transmission;
  j["mode_transmission"] = c.mode_transmission;
  j["coupler_reflectivity"] = c.coupler_reflectivity;
  j["detector_efficiency"] = c.detector_efficiency;
  json split = json::array();
  for (bool b : c.mode_splitter) split.push_back(b);
  j["mode_splitter"] = split;
  j["interference_visibility"] = c.interference_visibility;
  j["phase_setting_noise"] = c.phase_setting_noise;
  j["voltage_resolution"] = c.voltage_resolution;
  return j.dump(2) + "\n";
}

chip::ChipModel chip_from_json(const std::string& text) {
  const json j = json::parse(text);
  check_schema(j, kChipSchema);
  chip::ChipModel c = chip::ChipModel::ideal(j.at("mode_count"));
  auto read_heaters = [&](const json& arr, std::vector<chip::HeaterModel>* out) {
    out->clear();
    for (const auto& h : arr) {
      chip::HeaterModel m;
      m.alpha0 = h.at("alpha0");
      m.beta = h.at("beta");
      m.gamma = h.at("gamma");
      m.v_min = h.at("v_min");
      m.v_max = h.at("v_max");
      out->push_back(m);
    }
  };
  read_heaters(j.at("heaters"), &c.heaters);
  read_heaters(j.at("calibrated"), &c.calibrated);
  c.crosstalk.groups.clear();
  for (const auto& g : j.at("crosstalk_groups")) {
    chip::CrosstalkModel::Group grp;
    grp.heaters = g.at("heaters").get<std::vector<int>>();
    grp.heater_resistance = g.at("heater_resistance").get<std::vector<double>>();
    grp.ground_resistance = g.at("ground_resistance");
    c.crosstalk.groups.push_back(std::move(grp));
  }
  c.precorrect_crosstalk = j.at("precorrect_crosstalk");
  c.input_transmission = j.at("input_transmission");
  c.mode_transmission = j.at("mode_transmission").get<std::vector<double>>();
  c.coupler_reflectivity = j.at("coupler_reflectivity").get<std::vector<double>>();
  c.detector_efficiency = j.at("detector_efficiency").get<std::vector<double>>();
  c.mode_splitter = j.at("mode_splitter").get<std::vector<bool>>();
  c.interference_visibility = j.at("interference_visibility");
  c.phase_setting_noise = j.at("phase_setting_noise");
  c.voltage_resolution = j.at("voltage_resolution");
  const std::size_t mzis = static_cast<std::size_t>(c.mode_count * (c.mode_count - 1) / 2);
  if (c.heaters.size() != 2 * mzis || c.calibrated.size() != 2 * mzis)
    throw std::runtime_error("chip file: heater table size does not match mode count");
  return c;
}

void save_chip(const std::filesystem::path& path, const chip::ChipModel& c) {
  atomic_write(path, chip_to_json(c));
}

chip::ChipModel load_chip(const std::filesystem::path& path) {
  return chip_from_json(read_file(path));
}

std::string voltage_table(const std::vector<double>& set_voltages, bool quantize_4p9mv) {
  std::ostringstream os;
  os << "# port voltage_V";
  if (quantize_4p9mv) os << " (quantized to 4.9 mV)";
  os << "\n";
  for (std::size_t port = 0; port < 32; ++port) {
    double v = port < set_voltages.size() ? set_voltages[port] : 0.0;
    if (quantize_4p9mv) v = std::round(v / 0.0049) * 0.0049;
    os << port << " ";
    if (port < set_voltages.size()) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6f", v);
      os << buf;
    } else {
      os << "unused";
    }
    os << "\n";
  }
  return os.str();
}

std::string distribution_table(const fock::OutcomeDistribution& dist, std::uint64_t seed) {
  std::ostringstream os;
  os << "# m=" << dist.modes << " n=" << dist.photons
     << " subspace=" << fock::subspace_name(dist.subspace) << " seed=" << seed << "\n";
  if (dist.subspace == fock::Subspace::kPostSelected)
    os << "# success_probability=" << dist.success_probability << "\n";
  for (const auto& [state, p] : dist.p) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", p);
    os << state.str() << " " << buf << "\n";
  }
  return os.str();
}

std::string counts_table(const std::map<fock::FockState, long long>& counts, int modes,
                         int photons, const std::string& subspace, std::uint64_t seed) {
  std::ostringstream os;
  os << "# m=" << modes << " n=" << photons << " subspace=" << subspace << " seed=" << seed
     << "\n";
  for (const auto& [state, c] : counts) os << state.str() << " " << c << "\n";
  return os.str();
}

}  // namespace lpu::io
