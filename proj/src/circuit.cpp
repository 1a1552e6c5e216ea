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

#include "hhlsim/circuit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <thread>

#include "hhlsim/error.hpp"
#include "hhlsim/rng.hpp"

namespace hhlsim {

namespace {

const char* base_name(GateKind k) {
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

int expected_targets(const Gate& g) {
    switch (g.kind) {
        case GateKind::Swap: return 2;
        case GateKind::Unitary: return qubit_count(g.unitary.rows());
        default: return 1;
    }
}

bool controls_satisfied(const Gate& g, std::uint64_t index) {
    for (std::size_t i = 0; i < g.controls.size(); ++i) {
        const int want = g.control_values.empty() ? 1 : g.control_values[i];
        if (static_cast<int>((index >> g.controls[i]) & 1ULL) != want) return false;
    }
    return true;
}

}  // namespace

// Gates -------------------------------------------------------------------------

ComplexMatrix h_theta_matrix(double theta) {
    ComplexMatrix m(2, 2);
    const double c = std::cos(2.0 * theta);
    const double s = std::sin(2.0 * theta);
    m << c, s, s, -c;
    return m;
}

ComplexMatrix Gate::base_matrix() const {
    using namespace std::complex_literals;
    const double r = 1.0 / std::numbers::sqrt2;
    ComplexMatrix m(2, 2);
    switch (kind) {
        case GateKind::X: m << 0, 1, 1, 0; return m;
        case GateKind::Y: m << 0, -1i, 1i, 0; return m;
        case GateKind::Z: m << 1, 0, 0, -1; return m;
        case GateKind::Hadamard: m << r, r, r, -r; return m;
        case GateKind::Phase: m << 1, 0, 0, std::polar(1.0, angle); return m;
        case GateKind::HTheta: return h_theta_matrix(angle);
        case GateKind::Swap: {
            ComplexMatrix s = ComplexMatrix::Zero(4, 4);
            s(0, 0) = s(1, 2) = s(2, 1) = s(3, 3) = 1.0;
            return s;
        }
        case GateKind::Unitary: return unitary;
    }
    return m;
}

std::vector<int> Gate::qubits() const {
    std::vector<int> q = controls;
    q.insert(q.end(), targets.begin(), targets.end());
    return q;
}

Gate Gate::adjoint() const {
    Gate g = *this;
    if (kind == GateKind::Phase) g.angle = -angle;
    if (kind == GateKind::Unitary) g.unitary = unitary.adjoint();
    return g;
}

namespace gates {

namespace {
Gate single(GateKind k, int target, double angle = 0.0) {
    Gate g;
    g.kind = k;
    g.targets = {target};
    g.angle = angle;
    return g;
}
}  // namespace

Gate x(int t) { return single(GateKind::X, t); }
Gate y(int t) { return single(GateKind::Y, t); }
Gate z(int t) { return single(GateKind::Z, t); }
Gate hadamard(int t) { return single(GateKind::Hadamard, t); }
Gate phase(int t, double phi) { return single(GateKind::Phase, t, phi); }
Gate h_theta(int t, double theta) { return single(GateKind::HTheta, t, theta); }

Gate swap(int a, int b) {
    Gate g;
    g.kind = GateKind::Swap;
    g.targets = {a, b};
    return g;
}

Gate unitary(ComplexMatrix u, std::vector<int> targets) {
    const int k = qubit_count(u.rows());
    if (k < 0 || u.rows() != u.cols() || static_cast<std::size_t>(k) != targets.size()) {
        throw Error(ErrorKind::DimensionMismatch, "unitary size does not match its target count");
    }
    if (!is_unitary(u)) {
        throw Error(ErrorKind::NonUnitary, "raw unitary fails U†U = I within 1e-10");
    }
    Gate g;
    g.kind = GateKind::Unitary;
    g.targets = std::move(targets);
    g.unitary = std::move(u);
    return g;
}

Gate cnot(int control, int target) { return controlled(x(target), {control}); }

Gate controlled(Gate inner, std::vector<int> controls, std::vector<int> control_values) {
    if (!control_values.empty() && control_values.size() != controls.size()) {
        throw Error(ErrorKind::DimensionMismatch, "one control value per control qubit");
    }
    if (!control_values.empty() || !inner.control_values.empty()) {
        // Materialize both value lists so they stay aligned after the merge.
        if (inner.control_values.empty()) inner.control_values.assign(inner.controls.size(), 1);
        if (control_values.empty()) control_values.assign(controls.size(), 1);
        inner.control_values.insert(inner.control_values.end(), control_values.begin(), control_values.end());
    }
    inner.controls.insert(inner.controls.end(), controls.begin(), controls.end());
    return inner;
}

}  // namespace gates

// Circuit -----------------------------------------------------------------------

Circuit::Circuit(int qubits) : qubits_(qubits) {
    if (qubits < 0 || qubits > 20) throw Error(ErrorKind::BadIndex, "qubit count out of range");
}

void Circuit::check_gate(const Gate& g) const {
    const std::vector<int> q = g.qubits();
    for (int i : q) {
        if (i < 0 || i >= qubits_) {
            throw Error(ErrorKind::BadIndex, "gate qubit " + std::to_string(i) + " outside a " +
                                                 std::to_string(qubits_) + "-qubit circuit");
        }
    }
    std::vector<int> sorted = q;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw Error(ErrorKind::BadIndex, "gate uses a qubit twice");
    }
    if (static_cast<int>(g.targets.size()) != expected_targets(g)) {
        throw Error(ErrorKind::DimensionMismatch, "wrong number of targets for gate");
    }
    if (!g.control_values.empty() && g.control_values.size() != g.controls.size()) {
        throw Error(ErrorKind::DimensionMismatch, "one control value per control qubit");
    }
    for (int v : g.control_values) {
        if (v != 0 && v != 1) throw Error(ErrorKind::BadIndex, "control values are bits");
    }
    if (g.kind == GateKind::Unitary && !hhlsim::is_unitary(g.unitary)) {
        throw Error(ErrorKind::NonUnitary, "raw unitary fails U†U = I within 1e-10");
    }
}

Circuit& Circuit::add(Gate g) {
    check_gate(g);
    ops_.emplace_back(std::move(g));
    return *this;
}

Circuit& Circuit::measure(int qubit, int slot) {
    if (qubit < 0 || qubit >= qubits_) throw Error(ErrorKind::BadIndex, "measured qubit out of range");
    if (slot < 0) throw Error(ErrorKind::BadIndex, "negative classical slot");
    slots_ = std::max(slots_, slot + 1);
    written_.resize(static_cast<std::size_t>(slots_), false);
    written_[static_cast<std::size_t>(slot)] = true;
    ops_.emplace_back(Measure{qubit, slot});
    return *this;
}

Circuit& Circuit::conditional(Gate g, int slot, int outcome) {
    check_gate(g);
    if (slot < 0 || slot >= slots_ || !written_[static_cast<std::size_t>(slot)]) {
        throw Error(ErrorKind::BadIndex, "classical slot " + std::to_string(slot) + " read before written");
    }
    if (outcome != 0 && outcome != 1) throw Error(ErrorKind::BadIndex, "outcome must be 0 or 1");
    ops_.emplace_back(ConditionalGate{std::move(g), slot, outcome});
    return *this;
}

Circuit& Circuit::post_select(int qubit, int outcome) {
    if (qubit < 0 || qubit >= qubits_) throw Error(ErrorKind::BadIndex, "post-selected qubit out of range");
    if (outcome != 0 && outcome != 1) throw Error(ErrorKind::BadIndex, "outcome must be 0 or 1");
    ops_.emplace_back(PostSelect{qubit, outcome});
    return *this;
}

Circuit& Circuit::add(const Operation& op) {
    std::visit(
        [this](const auto& o) {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, Gate>) add(o);
            else if constexpr (std::is_same_v<T, Measure>) measure(o.qubit, o.slot);
            else if constexpr (std::is_same_v<T, ConditionalGate>) conditional(o.gate, o.slot, o.outcome);
            else post_select(o.qubit, o.outcome);
        },
        op);
    return *this;
}

Circuit& Circuit::append(const Circuit& other, const std::vector<int>& qubit_map) {
    auto remap = [&](int q) {
        if (qubit_map.empty()) return q;
        if (q < 0 || q >= static_cast<int>(qubit_map.size())) throw Error(ErrorKind::BadIndex, "qubit map too short");
        return qubit_map[static_cast<std::size_t>(q)];
    };
    auto remap_gate = [&](Gate g) {
        for (int& t : g.targets) t = remap(t);
        for (int& c : g.controls) c = remap(c);
        return g;
    };
    for (const Operation& op : other.ops()) {
        std::visit(
            [&](const auto& o) {
                using T = std::decay_t<decltype(o)>;
                if constexpr (std::is_same_v<T, Gate>) add(remap_gate(o));
                else if constexpr (std::is_same_v<T, Measure>) measure(remap(o.qubit), o.slot);
                else if constexpr (std::is_same_v<T, ConditionalGate>)
                    conditional(remap_gate(o.gate), o.slot, o.outcome);
                else post_select(remap(o.qubit), o.outcome);
            },
            op);
    }
    return *this;
}

bool Circuit::is_unitary() const {
    return std::all_of(ops_.begin(), ops_.end(), [](const Operation& op) { return std::holds_alternative<Gate>(op); });
}

Circuit Circuit::inverse() const {
    if (!is_unitary()) throw Error(ErrorKind::NonUnitary, "only unitary circuits can be inverted");
    Circuit inv(qubits_);
    for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) inv.add(std::get<Gate>(*it).adjoint());
    return inv;
}

std::map<std::string, int> Circuit::census() const {
    std::map<std::string, int> counts{{"entangling", 0}, {"measure", 0}, {"conditional", 0}, {"post_select", 0}};
    auto count_gate = [&](const Gate& g) {
        ++counts[std::string(g.controls.size(), 'c') + base_name(g.kind)];
    };
    for (const Operation& op : ops_) {
        if (const auto* g = std::get_if<Gate>(&op)) {
            count_gate(*g);
            if (g->entangling()) ++counts["entangling"];
        } else if (std::holds_alternative<Measure>(op)) {
            ++counts["measure"];
        } else if (const auto* cg = std::get_if<ConditionalGate>(&op)) {
            ++counts["conditional"];
            if (cg->gate.entangling()) ++counts["entangling"];
        } else {
            ++counts["post_select"];
        }
    }
    return counts;
}

// Embedding and single steps ----------------------------------------------------

ComplexMatrix embed(const Gate& g, int qubits) {
    Circuit(qubits).add(g);  // index and shape validation
    const Eigen::Index dim = Eigen::Index{1} << qubits;
    const ComplexMatrix m = g.base_matrix();
    const std::size_t k = g.targets.size();
    std::uint64_t target_mask = 0;
    for (int t : g.targets) target_mask |= 1ULL << t;

    ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        const auto c = static_cast<std::uint64_t>(col);
        if (!controls_satisfied(g, c)) {
            out(col, col) = 1.0;
            continue;
        }
        std::uint64_t local_in = 0;
        for (std::size_t i = 0; i < k; ++i) local_in |= ((c >> g.targets[i]) & 1ULL) << i;
        const std::uint64_t rest = c & ~target_mask;
        for (std::uint64_t local_out = 0; local_out < (1ULL << k); ++local_out) {
            std::uint64_t row = rest;
            for (std::size_t i = 0; i < k; ++i) {
                if ((local_out >> i) & 1ULL) row |= 1ULL << g.targets[i];
            }
            out(static_cast<Eigen::Index>(row), col) =
                m(static_cast<Eigen::Index>(local_out), static_cast<Eigen::Index>(local_in));
        }
    }
    return out;
}

ComplexVec apply_gate(const ComplexVec& state, const Gate& g) {
    const int q = qubit_count(state.size());
    if (q < 0) throw Error(ErrorKind::DimensionMismatch, "state dimension must be a power of two");
    return embed(g, q) * state;
}

double probability_one(const ComplexVec& state, int qubit) {
    double p = 0.0;
    for (Eigen::Index i = 0; i < state.size(); ++i) {
        if ((static_cast<std::uint64_t>(i) >> qubit) & 1ULL) p += std::norm(state[i]);
    }
    return p;
}

namespace {

void check_qubit(Eigen::Index dim, int qubit) {
    const int q = qubit_count(dim);
    if (q < 0) throw Error(ErrorKind::DimensionMismatch, "dimension must be a power of two");
    if (qubit < 0 || qubit >= q) throw Error(ErrorKind::BadIndex, "qubit out of range");
}

ComplexVec project(const ComplexVec& state, int qubit, int outcome) {
    ComplexVec out = state;
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        if (static_cast<int>((static_cast<std::uint64_t>(i) >> qubit) & 1ULL) != outcome) out[i] = 0.0;
    }
    return out;
}

ComplexMatrix project(const ComplexMatrix& rho, int qubit, int outcome) {
    ComplexMatrix out = rho;
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        if (static_cast<int>((static_cast<std::uint64_t>(i) >> qubit) & 1ULL) != outcome) {
            out.row(i).setZero();
            out.col(i).setZero();
        }
    }
    return out;
}

}  // namespace

std::pair<ComplexVec, double> post_select(const ComplexVec& state, int qubit, int outcome) {
    check_qubit(state.size(), qubit);
    ComplexVec proj = project(state, qubit, outcome);
    const double norm = proj.norm();
    if (norm < 1e-14) {
        throw Error(ErrorKind::ZeroProbability,
                    "qubit " + std::to_string(qubit) + " never reads " + std::to_string(outcome));
    }
    return {proj / norm, norm * norm};
}

std::pair<DensityMatrix, double> post_select(const DensityMatrix& rho, int qubit, int outcome) {
    check_qubit(rho.dim(), qubit);
    ComplexMatrix proj = project(rho.matrix(), qubit, outcome);
    const double p = proj.trace().real();
    if (p < 1e-28) {
        throw Error(ErrorKind::ZeroProbability,
                    "qubit " + std::to_string(qubit) + " never reads " + std::to_string(outcome));
    }
    return {make_density_unchecked(proj / p), p};
}

DensityMatrix depolarize(const DensityMatrix& rho, std::span<const int> qubits, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::BadFlag, "depolarizing probability outside [0, 1]");
    if (p == 0.0) return rho;
    const int q = rho.qubits();
    std::uint64_t mask = 0;
    for (int i : qubits) {
        if (i < 0 || i >= q) throw Error(ErrorKind::BadIndex, "depolarized qubit out of range");
        mask |= 1ULL << i;
    }
    std::vector<int> rest;
    for (int i = 0; i < q; ++i) {
        if (!((mask >> i) & 1ULL)) rest.push_back(i);
    }
    const ComplexMatrix env = partial_trace(rho, rest).matrix();
    const double d = static_cast<double>(1ULL << std::popcount(mask));
    auto compact = [&](std::uint64_t idx) {
        std::uint64_t out = 0;
        for (std::size_t i = 0; i < rest.size(); ++i) out |= ((idx >> rest[i]) & 1ULL) << i;
        return static_cast<Eigen::Index>(out);
    };
    ComplexMatrix out = (1.0 - p) * rho.matrix();
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
        const auto ur = static_cast<std::uint64_t>(r);
        for (Eigen::Index c = 0; c < out.cols(); ++c) {
            const auto uc = static_cast<std::uint64_t>(c);
            if ((ur & mask) != (uc & mask)) continue;
            out(r, c) += p / d * env(compact(ur), compact(uc));
        }
    }
    return make_density_unchecked(std::move(out));
}

// Execution ---------------------------------------------------------------------

namespace {

/// Circuit with every gate embedded once, reused across shots.
class Executor {
public:
    explicit Executor(const Circuit& c) : c_(c) {
        mats_.reserve(c.ops().size());
        for (const Operation& op : c.ops()) {
            if (const auto* g = std::get_if<Gate>(&op)) mats_.push_back(embed(*g, c.qubits()));
            else if (const auto* cg = std::get_if<ConditionalGate>(&op)) mats_.push_back(embed(cg->gate, c.qubits()));
            else mats_.emplace_back();
        }
    }

    RunOutcome run_pure(ComplexVec psi, ShotRng& rng) const {
        RunOutcome out{ComplexVec{}, std::vector<int>(static_cast<std::size_t>(c_.classical_slots()), -1), 1.0};
        for (std::size_t i = 0; i < c_.ops().size(); ++i) {
            const Operation& op = c_.ops()[i];
            if (std::holds_alternative<Gate>(op)) {
                psi = mats_[i] * psi;
            } else if (const auto* cg = std::get_if<ConditionalGate>(&op)) {
                if (out.classical_bits[static_cast<std::size_t>(cg->slot)] == cg->outcome) psi = mats_[i] * psi;
            } else if (const auto* m = std::get_if<Measure>(&op)) {
                const double p1 = probability_one(psi, m->qubit);
                const int bit = rng.uniform() < p1 ? 1 : 0;
                const double p = bit ? p1 : 1.0 - p1;
                psi = project(psi, m->qubit, bit) / std::sqrt(p);
                out.probability *= p;
                out.classical_bits[static_cast<std::size_t>(m->slot)] = bit;
            } else {
                const auto& ps = std::get<PostSelect>(op);
                auto [state, p] = post_select(psi, ps.qubit, ps.outcome);
                psi = std::move(state);
                out.probability *= p;
            }
        }
        out.state = std::move(psi);
        return out;
    }

    RunOutcome run_mixed(ComplexMatrix rho, const NoiseSpec& noise, ShotRng& rng) const {
        RunOutcome out{ComplexVec{}, std::vector<int>(static_cast<std::size_t>(c_.classical_slots()), -1), 1.0};
        auto apply = [&](std::size_t i, const Gate& g) {
            rho = mats_[i] * rho * mats_[i].adjoint();
            const bool noisy = noise.applies_to == NoiseTarget::All || g.entangling();
            if (noisy && noise.p_depolarizing > 0.0) {
                const std::vector<int> q = g.qubits();
                rho = depolarize(make_density_unchecked(std::move(rho)), q, noise.p_depolarizing).matrix();
            }
        };
        for (std::size_t i = 0; i < c_.ops().size(); ++i) {
            const Operation& op = c_.ops()[i];
            if (const auto* g = std::get_if<Gate>(&op)) {
                apply(i, *g);
            } else if (const auto* cg = std::get_if<ConditionalGate>(&op)) {
                if (out.classical_bits[static_cast<std::size_t>(cg->slot)] == cg->outcome) apply(i, cg->gate);
            } else if (const auto* m = std::get_if<Measure>(&op)) {
                const double p1 = project(rho, m->qubit, 1).trace().real();
                const int bit = rng.uniform() < p1 ? 1 : 0;
                const double p = bit ? p1 : 1.0 - p1;
                rho = project(rho, m->qubit, bit) / p;
                out.probability *= p;
                out.classical_bits[static_cast<std::size_t>(m->slot)] = bit;
            } else {
                const auto& ps = std::get<PostSelect>(op);
                auto [state, p] = post_select(make_density_unchecked(std::move(rho)), ps.qubit, ps.outcome);
                rho = state.matrix();
                out.probability *= p;
            }
        }
        rho = 0.5 * (rho + rho.adjoint());
        out.state = make_density_unchecked(std::move(rho));
        return out;
    }

private:
    const Circuit& c_;
    std::vector<ComplexMatrix> mats_;
};

void check_input(const Circuit& c, Eigen::Index dim) {
    if (dim != (Eigen::Index{1} << c.qubits())) {
        throw Error(ErrorKind::DimensionMismatch, "input dimension is not 2^qubits of the circuit");
    }
}

}  // namespace

RunOutcome run(const Circuit& c, const ComplexVec& input, const std::optional<NoiseSpec>& noise, std::uint64_t seed) {
    check_input(c, input.size());
    if (noise) return run(c, DensityMatrix::from_pure(input), noise, seed);
    ShotRng rng(seed, 0);
    return Executor(c).run_pure(input, rng);
}

RunOutcome run(const Circuit& c, const DensityMatrix& input, const std::optional<NoiseSpec>& noise,
               std::uint64_t seed) {
    check_input(c, input.dim());
    const NoiseSpec spec = noise.value_or(NoiseSpec{});
    if (!(spec.p_depolarizing >= 0.0 && spec.p_depolarizing <= 1.0)) {
        throw Error(ErrorKind::BadFlag, "depolarizing probability outside [0, 1]");
    }
    ShotRng rng(seed, 0);
    return Executor(c).run_mixed(input.matrix(), spec, rng);
}

std::map<std::string, std::uint64_t> sample_shots(const Circuit& c, const ComplexVec& input, std::uint64_t shots,
                                                  std::uint64_t seed) {
    check_input(c, input.size());
    if (shots == 0) throw Error(ErrorKind::BadFlag, "shots must be at least 1");

    // Gates before the first measurement draw no randomness; evolve them once.
    Circuit prefix(c.qubits());
    Circuit suffix(c.qubits());
    bool in_prefix = true;
    for (const Operation& op : c.ops()) {
        in_prefix = in_prefix && std::holds_alternative<Gate>(op);
        (in_prefix ? prefix : suffix).add(op);
    }
    ShotRng unused(seed, 0);
    const ComplexVec start = Executor(prefix).run_pure(input, unused).statevector();
    const Executor exec(suffix);

    const std::uint64_t workers =
        std::clamp<std::uint64_t>(std::thread::hardware_concurrency(), 1, std::min<std::uint64_t>(shots / 256 + 1, 16));
    std::vector<std::map<std::string, std::uint64_t>> partial(workers);
    std::vector<std::thread> pool;
    for (std::uint64_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::uint64_t shot = w; shot < shots; shot += workers) {
                ShotRng rng(seed, shot);
                const RunOutcome o = exec.run_pure(start, rng);
                std::string key;
                key.reserve(o.classical_bits.size());
                for (int b : o.classical_bits) key.push_back(b < 0 ? '-' : static_cast<char>('0' + b));
                ++partial[w][key];
            }
        });
    }
    for (auto& t : pool) t.join();

    std::map<std::string, std::uint64_t> hist;
    for (const auto& m : partial) {
        for (const auto& [k, v] : m) hist[k] += v;
    }
    return hist;
}

// Fourier transform -------------------------------------------------------------

Circuit qft(int n) {
    if (n < 1) throw Error(ErrorKind::BadIndex, "qft needs at least one qubit");
    Circuit c(n);
    for (int j = n - 1; j >= 0; --j) {
        c.add(gates::hadamard(j));
        for (int l = j - 1; l >= 0; --l) {
            const double phi = 2.0 * std::numbers::pi / static_cast<double>(1ULL << (j - l + 1));
            c.add(gates::controlled(gates::phase(j, phi), {l}));
        }
    }
    for (int i = 0; i < n / 2; ++i) c.add(gates::swap(i, n - 1 - i));
    return c;
}

Circuit inverse_qft(int n) { return qft(n).inverse(); }

}  // namespace hhlsim
