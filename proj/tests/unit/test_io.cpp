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

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "cczs/io.hpp"

using namespace cczs;
using nlohmann::json;

namespace {

const std::string kData = CCZS_DATA_DIR;

TEST(DeviceFileTest, LoadsTableValues) {
    const auto f = load_device(kData + "/device.json");
    ASSERT_EQ(f.device.modes.size(), 5u);
    EXPECT_EQ(f.device.modes[0].name, "Q1");
    EXPECT_EQ(f.device.modes[2].name, "Q0");
    EXPECT_NEAR(f.device.modes[2].omega, 2 * kPi * 4.73e9, 1.0);
    EXPECT_TRUE(f.device.modes[1].coupler);
    EXPECT_EQ(f.device.couplings.size(), 4u);
    EXPECT_NEAR(f.coherence.t1_mean[0], 39.73e-6, 1e-12);
    EXPECT_NEAR(f.coherence.t2star_sd[2], 6.35e-6, 1e-12);
    EXPECT_NEAR(f.coupling(), kPi * 2.833e6, 1e-3);
    const auto r = f.rates();
    EXPECT_NEAR(r.gamma1[0], 1 / 39.73e-6, 1e-6);
    EXPECT_NEAR(r.gamma_phi[2], 1 / 21.49e-6 - 0.5 / 34.73e-6, 1e-6);
}

TEST(DeviceFileTest, MalformedInputs) {
    auto base = read_json(kData + "/device.json");
    auto broken = base;
    broken["qubits"].erase("Q2");
    EXPECT_THROW(parse_device(broken), ConfigError);
    broken = base;
    broken["qubits"]["Q0"]["t1"] = "long";
    EXPECT_THROW(parse_device(broken), ConfigError);
    broken = base;
    broken["qubits"]["Q0"]["t1"] = -1.0;
    EXPECT_THROW(parse_device(broken), ConfigError);
    broken = base;
    broken["gate"]["cz_rate"] = -2.0;
    EXPECT_THROW(parse_device(broken), ConfigError);
    EXPECT_THROW(load_device(kData + "/does_not_exist.json"), ConfigError);

    const std::string path = ::testing::TempDir() + "/bad.json";
    std::ofstream(path) << "{\"qubits\": [1, 2";
    EXPECT_THROW(read_json(path), ConfigError);
    std::remove(path.c_str());
}

TEST(GateSetFile, LoadsAndValidates) {
    const auto g = load_gateset(kData + "/gateset_gst.json");
    EXPECT_NO_THROW(g.validate());
    EXPECT_FALSE(g.adjustments.empty());
    for (const auto& q : g.qubits) {
        EXPECT_NEAR(q.rho0.trace().real(), 1.0, 1e-6);
        EXPECT_EQ(q.ptm.size(), kGateNames.size());
    }
    auto j = read_json(kData + "/gateset_gst.json");
    auto missing = j;
    missing["qubits"].erase("Q1");
    EXPECT_THROW(parse_gateset(missing), ConfigError);
    auto ragged = j;
    ragged["qubits"]["Q0"]["rho0"] = json::array({json::array({1.0, 0.0})});
    EXPECT_THROW(parse_gateset(ragged), ConfigError);
}

TEST(Json, MatrixRoundTrip) {
    const CMatrix m = random_unitary(5, 3);
    EXPECT_EQ(matrix_from_json(matrix_to_json(m)), m);
    json bad = matrix_to_json(m);
    bad["im"].erase(0);
    EXPECT_THROW(matrix_from_json(bad), ConfigError);
    const RMatrix r = RMatrix::Random(2, 3);
    const json rj = real_matrix_to_json(r);
    EXPECT_EQ(rj.size(), 2u);
    EXPECT_EQ(rj[1][2].get<double>(), r(1, 2));
}

TEST(Json, DatasetsRoundTrip) {
    StateDataset s;
    s.shots = 10;
    for (int j = 0; j < 27; ++j) s.at(j, j % 8) = 10;
    const auto s2 = state_dataset_from_json(state_dataset_to_json(s));
    EXPECT_EQ(s2.shots, 10);
    EXPECT_EQ(s2.counts, s.counts);

    TomographyDataset t;
    t.shots = 3;
    for (int i = 0; i < 64; ++i)
        for (int j = 0; j < 27; ++j) t.at(i, j, (i * j) % 8) = 3;
    const auto t2 = tomography_dataset_from_json(tomography_dataset_to_json(t));
    EXPECT_EQ(t2.counts, t.counts);

    json bad = state_dataset_to_json(s);
    bad["counts"].erase(0);
    EXPECT_THROW(state_dataset_from_json(bad), ConfigError);
    bad = state_dataset_to_json(s);
    bad["counts"][0][0] = 3;  // sum no longer matches shots
    EXPECT_THROW(state_dataset_from_json(bad), ConfigError);
}

TEST(Json, CircuitSerialization) {
    const json c = circuit_to_json(ghz_circuit());
    EXPECT_EQ(c.at("label"), "ghz");
    EXPECT_EQ(c.at("moments").size(), 3u);
    const auto& op = c.at("moments")[1][0];
    EXPECT_EQ(op.at("gate"), "CCZS");
    EXPECT_EQ(op.at("targets").size(), 3u);
    EXPECT_GT(op.at("duration").get<double>(), 0.0);
}

TEST(Csv, Layouts) {
    const std::string p = populations_csv({0.0, 1e-9}, {Populations{1, 0, 0}, Populations{0.5, 0.25, 0.25}});
    EXPECT_EQ(p, "time_s,p1,p2,p3\n0,1,0,0\n1e-09,0.5,0.25,0.25\n");
    RMatrix m(2, 2);
    m << 1, -0.5, 0.1, 3;
    EXPECT_EQ(matrix_csv(m), "1,-0.5\n0.1,3\n");
    ChevronDataset d;
    d.offsets_hz = {-1e6, 1e6};
    d.times_s = {0.0};
    d.populations = {Populations{1, 0, 0}, Populations{1, 0, 0}};
    const std::string cs = chevron_csv(d);
    EXPECT_EQ(cs.substr(0, cs.find('\n')), "offset_hz,plateau_s,p1,p2,p3");
    EXPECT_EQ(std::count(cs.begin(), cs.end(), '\n'), 3);
}

TEST(Csv, FormatDoubleRoundTrips) {
    for (double v : {0.1, 1.0 / 3, -2.5e-300, 6.02214076e23, 0.0}) {
        EXPECT_EQ(std::stod(format_double(v)), v);
    }
    EXPECT_EQ(format_double(0.25), "0.25");
}

}  // namespace
