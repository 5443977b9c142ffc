// Copyright 2026 The cczs Authors
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

#ifndef CCZS_IO_HPP
#define CCZS_IO_HPP

#include <json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

#include "cczs/circuits.hpp"
#include "cczs/device.hpp"
#include "cczs/gateset.hpp"
#include "cczs/lambda.hpp"
#include "cczs/noise.hpp"
#include "cczs/process.hpp"
#include "cczs/state_tomo.hpp"

namespace cczs {

/// Malformed or inconsistent input files. The CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct DeviceFile {
    DeviceParams device;  // modes Q1, C1, Q0, C2, Q2 with three levels each
    CoherenceTimeDistribution coherence;
    double cz_rate = 0.0;  // Hz; the per-coupler exchange is |J| = pi * cz_rate
    double single_qubit_time = 20e-9;

    double coupling() const { return kPi * cz_rate; }
    DecoherenceRates rates() const;
};

DeviceFile parse_device(const nlohmann::json& j);
DeviceFile load_device(const std::string& path);
NoisyGateSetModel parse_gateset(const nlohmann::json& j);
NoisyGateSetModel load_gateset(const std::string& path);

nlohmann::json read_json(const std::string& path);

/// {"re": [[...]], "im": [[...]]}
nlohmann::json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const nlohmann::json& j);
nlohmann::json real_matrix_to_json(const RMatrix& m);

nlohmann::json circuit_to_json(const Circuit& c);
/// {"shots": n, "counts": [[8 ints] x 27]}
nlohmann::json state_dataset_to_json(const StateDataset& d);
StateDataset state_dataset_from_json(const nlohmann::json& j);
/// {"shots": n, "counts": [64][27][8]}
nlohmann::json tomography_dataset_to_json(const TomographyDataset& d);
TomographyDataset tomography_dataset_from_json(const nlohmann::json& j);

/// Columns: time_s, p1, p2, p3.
std::string populations_csv(const std::vector<double>& times, const std::vector<Populations>& pops);
/// Columns: offset_hz, plateau_s, p1, p2, p3.
std::string chevron_csv(const ChevronDataset& d);
/// Rows of a real matrix, comma separated, full precision.
std::string matrix_csv(const RMatrix& m);

/// Shortest round-trip decimal representation.
std::string format_double(double v);

}  // namespace cczs

#endif
