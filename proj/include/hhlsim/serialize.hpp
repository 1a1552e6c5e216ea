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

#pragma once

#include <json.hpp>

#include "hhlsim/analysis.hpp"
#include "hhlsim/circuit.hpp"
#include "hhlsim/hhl.hpp"
#include "hhlsim/qstate.hpp"

namespace hhlsim {

// Complex numbers are [re, im] pairs; vectors are flat arrays of them and
// matrices are row-major nested arrays. Plain numbers are accepted on input as
// purely real entries. Parse failures throw Error(ErrorKind::Parse).

/// Rounds to 12 significant digits so written files show 1e-9 differences
/// without platform noise in the last bits.
double round12(double v);

nlohmann::json to_json(Complex z);
nlohmann::json to_json(const ComplexVec& v);
nlohmann::json to_json(const ComplexMatrix& m);
Complex complex_from_json(const nlohmann::json& j);
ComplexVec vector_from_json(const nlohmann::json& j);
ComplexMatrix matrix_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Gate& g);
Gate gate_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Circuit& c);
Circuit circuit_from_json(const nlohmann::json& j);

nlohmann::json to_json(const HhlProblem& p);
HhlProblem problem_from_json(const nlohmann::json& j);
nlohmann::json to_json(const HhlResult& r);

nlohmann::json to_json(const PauliExpectations& e);
nlohmann::json to_json(const Fig3Report& r);
/// Rows: input,observable,ideal,simulated,stderr.
std::string to_csv(const Fig3Report& r);

}  // namespace hhlsim
