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

#ifndef LPU_IO_HPP_
#define LPU_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "lpu/chip.hpp"
#include "lpu/complex_matrix.hpp"
#include "lpu/fock.hpp"
#include "lpu/mesh.hpp"

namespace lpu::io {

inline constexpr const char* kMatrixSchema = "lpu.matrix/1";
inline constexpr const char* kMeshConfigSchema = "lpu.mesh-config/1";
inline constexpr const char* kChipSchema = "lpu.chip/1";
inline constexpr const char* kReportSchema = "lpu.report/1";

/// Writes to a temp file in the same directory, then renames.
void atomic_write(const std::filesystem::path& path, const std::string& contents);

std::string read_file(const std::filesystem::path& path);

/// FNV-1a 64-bit content hash (provenance tag, not cryptographic).
std::uint64_t fnv1a64(const std::string& bytes);

// --- matrices ------------------------------------------------------------

std::string matrix_to_json(const CMat& u);
CMat matrix_from_json(const std::string& text);
void save_matrix(const std::filesystem::path& path, const CMat& u);
CMat load_matrix(const std::filesystem::path& path);

// --- mesh configurations --------------------------------------------------

std::string mesh_config_to_json(const mesh::MeshConfig& c);
mesh::MeshConfig mesh_config_from_json(const std::string& text);
void save_mesh_config(const std::filesystem::path& path, const mesh::MeshConfig& c);
mesh::MeshConfig load_mesh_config(const std::filesystem::path& path);

// --- chip model ------------------------------------------------------------

std::string chip_to_json(const chip::ChipModel& c);
chip::ChipModel chip_from_json(const std::string& text);
void save_chip(const std::filesystem::path& path, const chip::ChipModel& c);
chip::ChipModel load_chip(const std::filesystem::path& path);

/// 32-port voltage table (30 heaters plus two unused ports), optional 4.9 mV
/// quantization.
std::string voltage_table(const std::vector<double>& set_voltages, bool quantize_4p9mv);

// --- tabular exports -------------------------------------------------------

/// One outcome per line: occupation digit string then value. Header records
/// m, n, subspace and seed.
std::string distribution_table(const fock::OutcomeDistribution& dist, std::uint64_t seed);
std::string counts_table(const std::map<fock::FockState, long long>& counts, int modes,
                         int photons, const std::string& subspace, std::uint64_t seed);

}  // namespace lpu::io

#endif  // LPU_IO_HPP_
