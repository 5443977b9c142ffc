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

#include "cczs/gates.hpp"

#include <cmath>
#include <stdexcept>

namespace cczs {

double wrap_angle(double a) {
    double r = std::fmod(a + kPi, 2 * kPi);
    if (r <= 0.0) {
        r += 2 * kPi;
    }
    return r - kPi;
}

GateParams GateParams::canonical() const {
    double t = std::fmod(theta, 2 * kPi);
    if (t < 0) {
        t += 2 * kPi;
    }
    double f = phi;
    if (t > kPi) {
        t = 2 * kPi - t;
        f += kPi;
    }
    return {t, wrap_angle(f), wrap_angle(gamma)};
}

CMatrix build_czs(const GateParams& p) {
    const double c2 = std::pow(std::cos(p.theta / 2), 2);
    const double s2 = std::pow(std::sin(p.theta / 2), 2);
    const Complex eg = std::exp(kI * p.gamma);
    const Complex off = 0.5 * (1.0 + eg) * std::sin(p.theta);
    CMatrix u = CMatrix::Zero(4, 4);
    u(0, 0) = 1.0;
    u(1, 1) = -eg * s2 + c2;
    u(1, 2) = off * std::exp(-kI * p.phi);
    u(2, 1) = off * std::exp(kI * p.phi);
    u(2, 2) = -eg * c2 + s2;
    u(3, 3) = -std::exp(-kI * p.gamma);
    return u;
}

CMatrix build_cczs(const GateParams& p) {
    CMatrix u = CMatrix::Identity(8, 8);
    u.bottomRightCorner(4, 4) = build_czs(p);
    return u;
}

namespace {

void require_symmetric(const DriveConfig& d, const char* who) {
    if (std::abs(d.delta1 - d.delta2) > 1e-12 * std::max(1.0, std::abs(d.delta1))) {
        throw std::invalid_argument(std::string(who) + ": requires delta1 == delta2");
    }
    if (std::norm(d.j01) + std::norm(d.j02) <= 0.0) {
        throw std::invalid_argument(std::string(who) + ": both couplings are zero");
    }
}

}  // namespace

double gate_time(const DriveConfig& d) {
    require_symmetric(d, "gate_time");
    const double delta = d.delta1;
    return kPi / std::sqrt(std::norm(d.j01) + std::norm(d.j02) + 0.25 * delta * delta);
}

GateParams angles_from_drives(const DriveConfig& d) {
    require_symmetric(d, "angles_from_drives");
    const double a1 = std::abs(d.j01);
    const double a2 = std::abs(d.j02);
    const double delta = d.delta1;
    GateParams p;
    p.theta = 2 * std::atan2(a2, a1);
    p.phi = (a1 > 0 && a2 > 0) ? wrap_angle(std::arg(d.j01) - std::arg(d.j02) + kPi) : 0.0;
    p.gamma = -kPi * delta / std::sqrt(4 * (a1 * a1 + a2 * a2) + delta * delta);
    return p;
}

DriveConfig drives_for_angles(const GateParams& p, double tau) {
    if (!(tau > 0)) {
        throw std::invalid_argument("drives_for_angles: tau must be positive");
    }
    const double delta = -2 * p.gamma / tau;
    const double omega2 = std::pow(kPi / tau, 2) - 0.25 * delta * delta;
    if (omega2 <= 0) {
        throw std::invalid_argument("drives_for_angles: gamma not reachable in this duration");
    }
    const double omega = std::sqrt(omega2);
    DriveConfig d;
    d.j01 = omega * std::cos(p.theta / 2);
    d.j02 = -omega * std::sin(p.theta / 2) * std::exp(-kI * p.phi);
    d.delta1 = d.delta2 = delta;
    d.tau = tau;
    return d;
}

CMatrix single_qubit_generator(const std::string& name, double angle, int levels) {
    if (levels != 2 && levels != 3) {
        throw std::invalid_argument("single_qubit_generator: levels must be 2 or 3");
    }
    CMatrix g = CMatrix::Zero(levels, levels);
    if (name == "I") {
        return g;
    }
    if (name == "X12") {
        if (levels != 3) {
            throw std::invalid_argument("X12 requires a qutrit");
        }
        // exp(-i pi/2 (X12 - P12)) swaps |1> and |2> with no phase.
        g(1, 2) = g(2, 1) = kPi / 2;
        g(1, 1) = g(2, 2) = -kPi / 2;
        return g;
    }
    CMatrix block;
    if (name == "Rx") {
        block = 0.5 * angle * pauli(1);
    } else if (name == "Ry") {
        block = 0.5 * angle * pauli(2);
    } else if (name == "Rz") {
        block = 0.5 * angle * pauli(3);
    } else if (name == "X") {
        block = 0.5 * kPi * (pauli(1) - pauli(0));
    } else {
        throw std::invalid_argument("single_qubit_gate: unknown gate '" + name + "'");
    }
    g.topLeftCorner(2, 2) = block;
    return g;
}

CMatrix single_qubit_gate(const std::string& name, double angle, int levels) {
    if (levels != 2 && levels != 3) {
        throw std::invalid_argument("single_qubit_gate: levels must be 2 or 3");
    }
    CMatrix u = CMatrix::Identity(levels, levels);
    const double c = std::cos(angle / 2);
    const double s = std::sin(angle / 2);
    if (name == "I") {
        return u;
    }
    if (name == "X12") {
        if (levels != 3) {
            throw std::invalid_argument("X12 requires a qutrit");
        }
        u(1, 1) = u(2, 2) = 0.0;
        u(1, 2) = u(2, 1) = 1.0;
        return u;
    }
    CMatrix b(2, 2);
    if (name == "Rx") {
        b << c, -kI * s, -kI * s, c;
    } else if (name == "Ry") {
        b << c, -s, s, c;
    } else if (name == "Rz") {
        b << std::exp(-kI * angle / 2.0), 0, 0, std::exp(kI * angle / 2.0);
    } else if (name == "X") {
        b << 0, 1, 1, 0;
    } else {
        throw std::invalid_argument("single_qubit_gate: unknown gate '" + name + "'");
    }
    u.topLeftCorner(2, 2) = b;
    return u;
}

std::vector<int> computational_indices(int n) {
    std::vector<int> idx;
    for (int b = 0; b < (1 << n); ++b) {
        int q = 0;
        for (int k = n - 1; k >= 0; --k) {
            q = q * 3 + ((b >> k) & 1);
        }
        idx.push_back(q);
    }
    return idx;
}

CMatrix embed_computational(const CMatrix& u, int n_qubits) {
    const int d2 = 1 << n_qubits;
    if (u.rows() != d2 || u.cols() != d2) {
        throw std::invalid_argument("embed_computational: dimension mismatch");
    }
    if (unitarity_error(u) > 1e-8) {
        throw std::invalid_argument("embed_computational: input is not unitary");
    }
    int d3 = 1;
    for (int k = 0; k < n_qubits; ++k) {
        d3 *= 3;
    }
    const auto idx = computational_indices(n_qubits);
    CMatrix out = CMatrix::Identity(d3, d3);
    for (int i = 0; i < d2; ++i) {
        for (int j = 0; j < d2; ++j) {
            out(idx[i], idx[j]) = u(i, j);
        }
    }
    return out;
}

CMatrix restrict_computational(const CMatrix& u, int n_qutrits) {
    const auto idx = computational_indices(n_qutrits);
    const int d2 = static_cast<int>(idx.size());
    CMatrix out(d2, d2);
    for (int i = 0; i < d2; ++i) {
        for (int j = 0; j < d2; ++j) {
            out(i, j) = u(idx[i], idx[j]);
        }
    }
    return out;
}

FrameCorrection virtual_z_correction(const CMatrix& u8) {
    if (u8.rows() != 8 || u8.cols() != 8) {
        throw std::invalid_argument("virtual_z_correction: expects an 8x8 unitary");
    }
    FrameCorrection fc;
    const double ref = std::arg(u8(0, 0));
    // |100> = 4, |010> = 2, |001> = 1 with Q0 most significant.
    const int single[3] = {4, 2, 1};
    for (int q = 0; q < 3; ++q) {
        fc.angles[q] = wrap_angle(ref - std::arg(u8(single[q], single[q])));
    }
    Eigen::VectorXcd phase(8);
    for (int b = 0; b < 8; ++b) {
        double a = 0.0;
        for (int q = 0; q < 3; ++q) {
            if ((b >> (2 - q)) & 1) {
                a += fc.angles[q];
            }
        }
        phase(b) = std::exp(kI * a);
    }
    fc.corrected = phase.asDiagonal() * u8;
    return fc;
}

}  // namespace cczs
