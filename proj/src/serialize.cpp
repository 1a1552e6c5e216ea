// Copyright 2026 The hhlsim Authors
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

#include "hhlsim/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "hhlsim/error.hpp"

namespace hhlsim {

using nlohmann::json;

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorKind::Parse, what); }

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) parse_error(std::string("missing field '") + key + "'");
    return j.at(key);
}

double number(const json& j, const char* what) {
    if (!j.is_number()) parse_error(std::string(what) + " must be a number");
    return j.get<double>();
}

std::vector<int> int_list(const json& j, const char* what) {
    if (!j.is_array()) parse_error(std::string(what) + " must be an array of integers");
    std::vector<int> out;
    for (const json& v : j) {
        if (!v.is_number_integer()) parse_error(std::string(what) + " must be an array of integers");
        out.push_back(v.get<int>());
    }
    return out;
}

GateKind kind_from_name(const std::string& name) {
    if (name == "x") return GateKind::X;
    if (name == "y") return GateKind::Y;
    if (name == "z") return GateKind::Z;
    if (name == "h") return GateKind::Hadamard;
    if (name == "phase") return GateKind::Phase;
    if (name == "h_theta") return GateKind::HTheta;
    if (name == "swap") return GateKind::Swap;
    if (name == "unitary") return GateKind::Unitary;
    parse_error("unknown gate '" + name + "'");
}

const char* kind_name(GateKind k) {
    switch (k) {
        case GateKind::X: return "x";
        case GateKind::Y: return "y";
        case GateKind::Z: return "z";
        case GateKind::Hadamard: return "h";
        case GateKind::Phase: return "phase";
        case GateKind::HTheta: return "h_theta";
        case GateKind::Swap: return "swap";
        case GateKind::Unitary: return "unitary";
    }
    return "?";
}

const char* pauli_name(Pauli p) {
    switch (p) {
        case Pauli::Z: return "Z";
        case Pauli::X: return "X";
        case Pauli::Y: return "Y";
    }
    return "?";
}

}  // namespace

constexpr double kZeroSnap = 1e-13;

double round12(double v) {
    if (!std::isfinite(v)) return v;
    if (std::abs(v) < kZeroSnap) return 0.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    const double r = std::strtod(buf, nullptr);
    return r == 0.0 ? 0.0 : r;  // no "-0.0" in files
}

// Numbers -----------------------------------------------------------------------

json to_json(Complex z) { return json::array({round12(z.real()), round12(z.imag())}); }

json to_json(const ComplexVec& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v[i]));
    return out;
}

json to_json(const ComplexMatrix& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(Complex(m(r, c))));
        out.push_back(std::move(row));
    }
    return out;
}

Complex complex_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    parse_error("complex numbers are written as numbers or [re, im] pairs");
}

ComplexVec vector_from_json(const json& j) {
    if (!j.is_array() || j.empty()) parse_error("vector must be a non-empty array");
    ComplexVec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = complex_from_json(j[i]);
    return v;
}

ComplexMatrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) parse_error("matrix must be a non-empty array of rows");
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    if (cols == 0) parse_error("matrix rows must be non-empty arrays");
    ComplexMatrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (!j[r].is_array() || j[r].size() != cols) parse_error("matrix rows differ in length");
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_from_json(j[r][c]);
        }
    }
    return m;
}

// Circuits ----------------------------------------------------------------------

json to_json(const Gate& g) {
    json j{{"gate", kind_name(g.kind)}, {"targets", g.targets}};
    if (g.kind == GateKind::HTheta) j["theta"] = g.angle;
    if (g.kind == GateKind::Phase) j["phi"] = g.angle;
    if (g.kind == GateKind::Unitary) j["matrix"] = to_json(g.unitary);
    if (!g.controls.empty()) j["controls"] = g.controls;
    if (!g.control_values.empty()) j["control_values"] = g.control_values;
    return j;
}

Gate gate_from_json(const json& j) {
    const json& name = field(j, "gate");
    if (!name.is_string()) parse_error("gate name must be a string");
    Gate g;
    g.kind = kind_from_name(name.get<std::string>());
    g.targets = int_list(field(j, "targets"), "targets");
    if (g.kind == GateKind::HTheta) g.angle = number(field(j, "theta"), "theta");
    if (g.kind == GateKind::Phase) g.angle = number(field(j, "phi"), "phi");
    if (g.kind == GateKind::Unitary) {
        ComplexMatrix u = matrix_from_json(field(j, "matrix"));
        g = gates::unitary(std::move(u), g.targets);
    }
    if (j.contains("controls")) g.controls = int_list(j.at("controls"), "controls");
    if (j.contains("control_values")) g.control_values = int_list(j.at("control_values"), "control_values");
    return g;
}

json to_json(const Circuit& c) {
    json ops = json::array();
    for (const Operation& op : c.ops()) {
        std::visit(
            [&](const auto& o) {
                using T = std::decay_t<decltype(o)>;
                if constexpr (std::is_same_v<T, Gate>) {
                    ops.push_back(to_json(o));
                } else if constexpr (std::is_same_v<T, Measure>) {
                    ops.push_back({{"op", "measure"}, {"qubit", o.qubit}, {"slot", o.slot}});
                } else if constexpr (std::is_same_v<T, ConditionalGate>) {
                    json g = to_json(o.gate);
                    g["op"] = "conditional";
                    g["slot"] = o.slot;
                    g["outcome"] = o.outcome;
                    ops.push_back(std::move(g));
                } else {
                    ops.push_back({{"op", "post_select"}, {"qubit", o.qubit}, {"outcome", o.outcome}});
                }
            },
            op);
    }
    return {{"qubits", c.qubits()}, {"ops", std::move(ops)}};
}

Circuit circuit_from_json(const json& j) {
    const json& q = field(j, "qubits");
    if (!q.is_number_integer()) parse_error("qubits must be an integer");
    Circuit c(q.get<int>());
    const json& ops = field(j, "ops");
    if (!ops.is_array()) parse_error("ops must be an array");
    for (const json& op : ops) {
        const std::string kind = op.value("op", std::string("gate"));
        auto integer = [&](const char* key) {
            const json& v = field(op, key);
            if (!v.is_number_integer()) parse_error(std::string(key) + " must be an integer");
            return v.get<int>();
        };
        if (kind == "gate") c.add(gate_from_json(op));
        else if (kind == "measure") c.measure(integer("qubit"), integer("slot"));
        else if (kind == "conditional") c.conditional(gate_from_json(op), integer("slot"), op.value("outcome", 1));
        else if (kind == "post_select") c.post_select(integer("qubit"), integer("outcome"));
        else parse_error("unknown op '" + kind + "'");
    }
    return c;
}

// Problems and results ----------------------------------------------------------

json to_json(const HhlProblem& p) {
    json j{{"matrix", to_json(p.a)}, {"vector", to_json(p.b)}, {"register_bits", p.register_bits}, {"t0", p.t0}};
    if (p.c_const) j["c_const"] = *p.c_const;
    return j;
}

HhlProblem problem_from_json(const json& j) {
    HhlProblem p;
    p.a = matrix_from_json(field(j, "matrix"));
    p.b = vector_from_json(field(j, "vector"));
    if (j.contains("register_bits")) {
        if (!j.at("register_bits").is_number_integer()) parse_error("register_bits must be an integer");
        p.register_bits = j.at("register_bits").get<int>();
    }
    if (j.contains("t0")) p.t0 = number(j.at("t0"), "t0");
    if (j.contains("c_const") && !j.at("c_const").is_null()) p.c_const = number(j.at("c_const"), "c_const");
    return p;
}

json to_json(const HhlResult& r) {
    return {{"x", to_json(r.x_state)},
            {"success_probability", round12(r.success_probability)},
            {"fidelity", round12(r.fidelity_vs_classical)},
            {"register_residual", round12(r.register_residual)},
            {"register_reset_ok", r.register_reset_ok},
            {"c_const", round12(r.c_const)},
            {"gate_count", r.gate_count}};
}

json to_json(const PauliExpectations& e) {
    return {{"Z", round12(e.z)}, {"X", round12(e.x)}, {"Y", round12(e.y)}};
}

json to_json(const Fig3Report& r) {
    json inputs = json::array();
    for (const InputReport& row : r.inputs) {
        json j{{"input", row.input},
               {"ideal", to_json(row.ideal)},
               {"simulated", to_json(row.simulated)},
               {"success_probability", round12(row.success_probability)},
               {"fidelity", round12(row.fidelity)}};
        if (row.shots) {
            j["shots"] = {{"accepted", row.shots->accepted},
                          {"mean", to_json(row.shots->mean)},
                          {"stderr", to_json(row.shots->stderr_)}};
        }
        inputs.push_back(std::move(j));
    }
    json noise = nullptr;
    if (r.noise) {
        noise = {{"p_depolarizing", r.noise->p_depolarizing},
                 {"applies_to", r.noise->applies_to == NoiseTarget::All ? "all" : "entangling"}};
    }
    return {{"mode", r.mode == PipelineMode::Compiled ? "compiled" : "generic"},
            {"feedforward", r.feedforward == Feedforward::Unitary ? "unitary" : "semiclassical"},
            {"noise", std::move(noise)},
            {"inputs", std::move(inputs)}};
}

std::string to_csv(const Fig3Report& r) {
    std::ostringstream os;
    os.precision(12);
    os << "input,observable,ideal,simulated,stderr\n";
    for (const InputReport& row : r.inputs) {
        for (Pauli p : {Pauli::Z, Pauli::X, Pauli::Y}) {
            os << row.input << ',' << pauli_name(p) << ',' << round12(row.ideal[p]) << ','
               << round12(row.shots ? row.shots->mean[p] : row.simulated[p]) << ','
               << round12(row.shots ? row.shots->stderr_[p] : 0.0) << '\n';
        }
    }
    return os.str();
}

}  // namespace hhlsim
