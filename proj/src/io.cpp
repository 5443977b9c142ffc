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

#include "cczs/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace cczs {

using nlohmann::json;

namespace {

double number(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number()) {
        throw ConfigError(std::string("missing numeric field '") + key + "'");
    }
    return j.at(key).get<double>();
}

CMatrix parse_small_matrix(const json& j, int rows, int cols) {
    CMatrix m;
    if (j.is_object()) {
        m = matrix_from_json(j);
    } else {
        if (!j.is_array() || static_cast<int>(j.size()) != rows) {
            throw ConfigError("matrix has the wrong number of rows");
        }
        m.resize(rows, cols);
        for (int r = 0; r < rows; ++r) {
            if (!j[r].is_array() || static_cast<int>(j[r].size()) != cols) {
                throw ConfigError("matrix has the wrong number of columns");
            }
            for (int c = 0; c < cols; ++c) {
                m(r, c) = j[r][c].get<double>();
            }
        }
    }
    if (m.rows() != rows || m.cols() != cols) {
        throw ConfigError("matrix has the wrong shape");
    }
    return m;
}

}  // namespace

DecoherenceRates DeviceFile::rates() const {
    return DecoherenceRates::from_times(coherence.t1_mean, coherence.t2star_mean);
}

DeviceFile parse_device(const json& j) {
    try {
        DeviceFile f;
        const auto& qubits = j.at("qubits");
        const auto& couplers = j.at("couplers");
        const std::array<std::string, 3> qnames{"Q0", "Q1", "Q2"};
        auto qubit_mode = [&](const std::string& name) {
            const auto& q = qubits.at(name);
            return Mode{name, 2 * kPi * number(q, "f01"), 2 * kPi * number(q, "anharmonicity"), 3, false};
        };
        auto coupler_mode = [&](const std::string& name) {
            const auto& c = couplers.at(name);
            return Mode{name, 2 * kPi * number(c, "f_zero_flux"), 2 * kPi * number(c, "anharmonicity"), 3, true};
        };
        f.device.modes = {qubit_mode("Q1"), coupler_mode("C1"), qubit_mode("Q0"), coupler_mode("C2"),
                          qubit_mode("Q2")};
        for (const char* cname : {"C1", "C2"}) {
            const int ci = f.device.mode_index(cname);
            for (const auto& link : couplers.at(cname).at("links")) {
                const int qi = f.device.mode_index(link.at("qubit").get<std::string>());
                f.device.couplings.push_back(Coupling{ci, qi, 2 * kPi * number(link, "j")});
            }
        }
        f.device.validate();
        for (int k = 0; k < 3; ++k) {
            const auto& q = qubits.at(qnames[k]);
            f.coherence.t1_mean[k] = number(q, "t1");
            f.coherence.t1_sd[k] = number(q, "t1_err");
            f.coherence.t2star_mean[k] = number(q, "t2star");
            f.coherence.t2star_sd[k] = number(q, "t2star_err");
            if (!(f.coherence.t1_mean[k] > 0) || !(f.coherence.t2star_mean[k] > 0) || f.coherence.t1_sd[k] < 0 ||
                f.coherence.t2star_sd[k] < 0) {
                throw ConfigError("coherence times must be positive");
            }
        }
        const auto& gate = j.at("gate");
        f.cz_rate = number(gate, "cz_rate");
        if (f.cz_rate < 0) {
            throw ConfigError("cz_rate must be non-negative");
        }
        if (gate.contains("single_qubit_time")) {
            f.single_qubit_time = number(gate, "single_qubit_time");
        }
        return f;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("device file: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("device file: ") + e.what());
    }
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

DeviceFile load_device(const std::string& path) {
    return parse_device(read_json(path));
}

NoisyGateSetModel parse_gateset(const json& j) {
    try {
        std::array<CMatrix, 3> rho0, m0;
        std::array<std::map<std::string, RMatrix>, 3> ptm;
        for (int k = 0; k < 3; ++k) {
            const auto& q = j.at("qubits").at("Q" + std::to_string(k));
            rho0[k] = parse_small_matrix(q.at("rho0"), 2, 2);
            m0[k] = parse_small_matrix(q.at("M0"), 2, 2);
            for (const auto& [name, value] : q.at("ptm").items()) {
                ptm[k][name] = parse_small_matrix(value, 4, 4).real();
            }
        }
        auto gsm = NoisyGateSetModel::from_tables(rho0, m0, ptm);
        gsm.validate();
        return gsm;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("gate-set file: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("gate-set file: ") + e.what());
    }
}

NoisyGateSetModel load_gateset(const std::string& path) {
    return parse_gateset(read_json(path));
}

json matrix_to_json(const CMatrix& m) {
    json re = json::array(), im = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json rr = json::array(), ri = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            rr.push_back(m(r, c).real());
            ri.push_back(m(r, c).imag());
        }
        re.push_back(rr);
        im.push_back(ri);
    }
    return json{{"re", re}, {"im", im}};
}

CMatrix matrix_from_json(const json& j) {
    try {
        const auto& re = j.at("re");
        const auto& im = j.at("im");
        const auto rows = static_cast<Eigen::Index>(re.size());
        const auto cols = rows > 0 ? static_cast<Eigen::Index>(re[0].size()) : 0;
        if (static_cast<Eigen::Index>(im.size()) != rows) {
            throw ConfigError("matrix: re/im shape mismatch");
        }
        CMatrix m(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r) {
            if (static_cast<Eigen::Index>(re[r].size()) != cols || static_cast<Eigen::Index>(im[r].size()) != cols) {
                throw ConfigError("matrix: ragged rows");
            }
            for (Eigen::Index c = 0; c < cols; ++c) {
                m(r, c) = Complex(re[r][c].get<double>(), im[r][c].get<double>());
            }
        }
        return m;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("matrix: ") + e.what());
    }
}

json real_matrix_to_json(const RMatrix& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        out.push_back(row);
    }
    return out;
}

json circuit_to_json(const Circuit& c) {
    json moments = json::array();
    for (const auto& m : c.moments) {
        json ops = json::array();
        for (const auto& op : m.ops) {
            ops.push_back({{"gate", op.name}, {"targets", op.targets}, {"params", op.params}, {"duration", op.duration}});
        }
        moments.push_back(ops);
    }
    return json{{"label", c.label}, {"moments", moments}};
}

json state_dataset_to_json(const StateDataset& d) {
    json counts = json::array();
    for (int j = 0; j < 27; ++j) {
        json row = json::array();
        for (int s = 0; s < 8; ++s) row.push_back(d.at(j, s));
        counts.push_back(row);
    }
    return json{{"shots", d.shots}, {"counts", counts}};
}

StateDataset state_dataset_from_json(const json& j) {
    try {
        StateDataset d;
        d.shots = j.at("shots").get<int>();
        const auto& counts = j.at("counts");
        if (counts.size() != 27) {
            throw ConfigError("state dataset: expected 27 bases");
        }
        for (int b = 0; b < 27; ++b) {
            if (counts[b].size() != 8) {
                throw ConfigError("state dataset: expected 8 outcomes per basis");
            }
            for (int s = 0; s < 8; ++s) d.at(b, s) = counts[b][s].get<std::int64_t>();
        }
        d.validate();
        return d;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("state dataset: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

json tomography_dataset_to_json(const TomographyDataset& d) {
    json probes = json::array();
    for (int i = 0; i < 64; ++i) {
        json bases = json::array();
        for (int j = 0; j < 27; ++j) {
            json row = json::array();
            for (int s = 0; s < 8; ++s) row.push_back(d.at(i, j, s));
            bases.push_back(row);
        }
        probes.push_back(bases);
    }
    return json{{"shots", d.shots}, {"counts", probes}};
}

TomographyDataset tomography_dataset_from_json(const json& j) {
    try {
        TomographyDataset d;
        d.shots = j.at("shots").get<int>();
        const auto& c = j.at("counts");
        if (c.size() != 64) {
            throw ConfigError("tomography dataset: expected 64 preparations");
        }
        for (int i = 0; i < 64; ++i) {
            if (c[i].size() != 27) {
                throw ConfigError("tomography dataset: expected 27 bases");
            }
            for (int b = 0; b < 27; ++b) {
                if (c[i][b].size() != 8) {
                    throw ConfigError("tomography dataset: expected 8 outcomes");
                }
                for (int s = 0; s < 8; ++s) d.at(i, b, s) = c[i][b][s].get<std::int64_t>();
            }
        }
        d.validate();
        return d;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("tomography dataset: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string populations_csv(const std::vector<double>& times, const std::vector<Populations>& pops) {
    std::ostringstream out;
    out << "time_s,p1,p2,p3\n";
    for (std::size_t k = 0; k < times.size(); ++k) {
        out << format_double(times[k]) << ',' << format_double(pops[k][0]) << ',' << format_double(pops[k][1]) << ','
            << format_double(pops[k][2]) << '\n';
    }
    return out.str();
}

std::string chevron_csv(const ChevronDataset& d) {
    std::ostringstream out;
    out << "offset_hz,plateau_s,p1,p2,p3\n";
    for (std::size_t o = 0; o < d.offsets_hz.size(); ++o) {
        for (std::size_t t = 0; t < d.times_s.size(); ++t) {
            const auto& p = d.at(o, t);
            out << format_double(d.offsets_hz[o]) << ',' << format_double(d.times_s[t]) << ',' << format_double(p[0])
                << ',' << format_double(p[1]) << ',' << format_double(p[2]) << '\n';
        }
    }
    return out.str();
}

std::string matrix_csv(const RMatrix& m) {
    std::ostringstream out;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) out << ',';
            out << format_double(m(r, c));
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace cczs
