// Copyright 2026 The qsr Authors
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

#ifndef QSR_CIRCUIT_HPP
#define QSR_CIRCUIT_HPP

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qsr/gate.hpp"
#include "qsr/gf2poly.hpp"
#include "qsr/matrix.hpp"
#include "qsr/symplectic.hpp"
#include "qsr/text.hpp"

namespace qsr {

/// Local gates that a placement can apply.
enum class PrimKind { CNOT, CZ, H, P };

inline const char *prim_kind_name(PrimKind k) {
    switch (k) {
        case PrimKind::CNOT:
            return "CNOT";
        case PrimKind::CZ:
            return "CPHASE";
        case PrimKind::H:
            return "H";
        case PrimKind::P:
            return "P";
    }
    return "?";
}

/// A qubit position inside the register: wire w at pipeline stage s. Stage 0 holds
/// the frame arriving this clock, stage s the frame that arrived s clocks ago.
struct Slot {
    int wire = 0;
    int stage = 0;
    bool operator==(const Slot &other) const = default;
};

/// One gate instance, applied every clock. For CNOT `a` is the control.
/// `b.wire` is -1 for single-qubit kinds. `block` indexes a feedback node, or is -1.
struct Placement {
    PrimKind kind = PrimKind::H;
    Slot a;
    Slot b{-1, 0};
    int block = -1;

    bool two_qubit() const {
        return kind == PrimKind::CNOT || kind == PrimKind::CZ;
    }
    bool touches(Slot s) const {
        return a == s || (two_qubit() && b == s);
    }
    bool operator==(const Placement &other) const = default;
};

/// An infinite-depth block on one wire, realised by same-wire CNOTs fed from (or into)
/// stage `stage` of the block.
struct FeedbackNode {
    char axis = 'Z';
    int wire = 0;
    LaurentPoly f;
    int stage = 0;
    bool operator==(const FeedbackNode &other) const = default;
};

/// The same-wire CNOTs that realise a feedback node, in schedule order.
inline std::vector<Placement> expand_feedback(const FeedbackNode &node, int block) {
    std::vector<Placement> out;
    int m = node.f.deg();
    for (int s = 1; s <= m; s++) {
        if (!node.f.coeff(m - s)) {
            continue;
        }
        Slot base{node.wire, node.stage};
        Slot tap{node.wire, node.stage + s};
        if (node.axis == 'Z') {
            out.push_back({PrimKind::CNOT, base, tap, block});
        } else {
            out.push_back({PrimKind::CNOT, tap, base, block});
        }
    }
    return out;
}

/// Clocked circuit over n wires. Wire w is a pipeline of depth[w] memory cells; the
/// frame entering at clock t leaves wire w at clock t + depth[w].
struct ShiftRegisterCircuit {
    size_t n = 0;
    std::vector<int> depths;
    std::vector<Placement> placements;
    std::vector<FeedbackNode> feedback;

    ShiftRegisterCircuit() = default;
    explicit ShiftRegisterCircuit(size_t n, int depth = 0) : n(n), depths(n, depth) {
    }

    /// Memory frames M: the deepest wire.
    int frames() const {
        int m = 0;
        for (int d : depths) {
            m = std::max(m, d);
        }
        return m;
    }
    /// Delay common to every wire.
    int latency() const {
        if (depths.empty()) {
            return 0;
        }
        return *std::min_element(depths.begin(), depths.end());
    }
    bool uniform() const {
        return std::all_of(depths.begin(), depths.end(), [&](int d) { return d == depths[0]; });
    }
    /// Largest stage distance spanned by one placement.
    int max_tap() const {
        int t = 0;
        for (const auto &p : placements) {
            if (p.two_qubit()) {
                t = std::max(t, std::abs(p.a.stage - p.b.stage));
            }
        }
        return t;
    }
    size_t memory_qubits() const {
        size_t total = 0;
        for (int d : depths) {
            total += d;
        }
        return total;
    }

    void validate() const {
        if (depths.size() != n) {
            throw std::invalid_argument("depth list must have one entry per wire");
        }
        for (int d : depths) {
            if (d < 0) {
                throw std::invalid_argument("negative wire depth");
            }
        }
        auto check_slot = [&](Slot s) {
            if (s.wire < 0 || (size_t)s.wire >= n) {
                throw std::invalid_argument("placement wire " + std::to_string(s.wire + 1) + " out of range");
            }
            if (s.stage < 0 || s.stage > depths[s.wire]) {
                throw std::invalid_argument(
                    "placement stage " + std::to_string(s.stage) + " outside wire " + std::to_string(s.wire + 1) +
                    " (depth " + std::to_string(depths[s.wire]) + ")");
            }
        };
        for (const auto &p : placements) {
            check_slot(p.a);
            if (p.two_qubit()) {
                check_slot(p.b);
                if (p.a == p.b) {
                    throw std::invalid_argument("two-qubit placement on a single slot");
                }
            } else if (p.b.wire != -1) {
                throw std::invalid_argument("single-qubit placement with a second endpoint");
            }
            if (p.block < -1 || p.block >= (int)feedback.size()) {
                throw std::invalid_argument("placement refers to a missing feedback node");
            }
        }
        for (size_t k = 0; k < feedback.size(); k++) {
            const auto &node = feedback[k];
            if (node.f.is_zero() || node.f.del() < 0 || node.f.deg() < 1) {
                throw std::invalid_argument("feedback polynomial must be a polynomial in D of degree >= 1");
            }
            auto expected = expand_feedback(node, (int)k);
            auto first = std::find_if(placements.begin(), placements.end(), [&](const Placement &p) {
                return p.block == (int)k;
            });
            size_t start = first - placements.begin();
            if (start + expected.size() > placements.size() ||
                !std::equal(expected.begin(), expected.end(), placements.begin() + start)) {
                throw std::invalid_argument("feedback node placements are not a contiguous block");
            }
            size_t count = std::count_if(placements.begin(), placements.end(), [&](const Placement &p) {
                return p.block == (int)k;
            });
            if (count != expected.size()) {
                throw std::invalid_argument("feedback node placements are not a contiguous block");
            }
        }
    }

    bool operator==(const ShiftRegisterCircuit &other) const = default;
};

namespace detail {
inline void check_pair(int i, int j, size_t n, const char *what) {
    if (i < 0 || j < 0 || (size_t)i >= n || (size_t)j >= n) {
        throw std::invalid_argument(std::string(what) + ": wire out of range");
    }
    if (i == j) {
        throw std::invalid_argument(std::string(what) + ": wires must differ");
    }
}
inline void check_one(int i, size_t n, const char *what) {
    if (i < 0 || (size_t)i >= n) {
        throw std::invalid_argument(std::string(what) + ": wire out of range");
    }
}
}  // namespace detail

/// CNOT(i,j)(f). Each term D^e is one CNOT whose control trails its target by e stages,
/// so advances (e < 0) need no extra delay. Uses abs_deg_poly(f) frames on every wire.
inline ShiftRegisterCircuit build_cnot_circuit(int i, int j, const LaurentPoly &f, size_t n) {
    detail::check_pair(i, j, n, "CNOT");
    ShiftRegisterCircuit c(n, abs_deg_poly(f));
    for (int e : f.support()) {
        c.placements.push_back({PrimKind::CNOT, {i, std::max(e, 0)}, {j, std::max(-e, 0)}});
    }
    return c;
}

/// The conjugate CNOT: f(D) lands in the Z block. Same as CNOT(j,i)(f(D^-1)).
inline ShiftRegisterCircuit build_cnot_conj_circuit(int i, int j, const LaurentPoly &f, size_t n) {
    detail::check_pair(i, j, n, "CNOT");
    return build_cnot_circuit(j, i, f.reciprocal(), n);
}

inline ShiftRegisterCircuit build_cphase2_circuit(int i, int j, const LaurentPoly &f, size_t n) {
    detail::check_pair(i, j, n, "CPHASE");
    ShiftRegisterCircuit c(n, abs_deg_poly(f));
    for (int e : f.support()) {
        c.placements.push_back({PrimKind::CZ, {i, std::max(e, 0)}, {j, std::max(-e, 0)}});
    }
    return c;
}

/// Controlled-phase between a qubit and its own past frames; f must have del(f) >= 1.
inline ShiftRegisterCircuit build_cphase1_circuit(int i, const LaurentPoly &f, size_t n) {
    detail::check_one(i, n, "CPHASE1");
    if (!f.is_zero() && f.del() < 1) {
        throw std::invalid_argument("CPHASE1: f has a term at lag <= 0 (a lag-0 self-phase is a P gate)");
    }
    ShiftRegisterCircuit c(n, f.is_zero() ? 0 : f.deg());
    for (int e : f.support()) {
        c.placements.push_back({PrimKind::CZ, {i, e}, {i, 0}});
    }
    return c;
}

inline ShiftRegisterCircuit build_single(GateKind kind, int i, size_t n) {
    detail::check_one(i, n, "single-qubit gate");
    ShiftRegisterCircuit c(n, 0);
    if (kind == GateKind::H) {
        c.placements.push_back({PrimKind::H, {i, 0}});
    } else if (kind == GateKind::P) {
        c.placements.push_back({PrimKind::P, {i, 0}});
    } else {
        throw std::invalid_argument("build_single takes H or P");
    }
    return c;
}

inline ShiftRegisterCircuit build_delay_circuit(int i, int l, size_t n) {
    detail::check_one(i, n, "DELAY");
    if (l < 0) {
        throw std::invalid_argument("DELAY: negative delay");
    }
    ShiftRegisterCircuit c(n, 0);
    c.depths[i] = l;
    return c;
}

namespace detail {
inline ShiftRegisterCircuit build_inf(char axis, int i, const LaurentPoly &f, size_t n) {
    check_one(i, n, axis == 'Z' ? "INFZ" : "INFX");
    if (f.is_zero() || f.del() < 0) {
        throw std::invalid_argument("infinite-depth gate: f must be a nonzero polynomial in D");
    }
    if (f.deg() < 1) {
        throw std::invalid_argument("infinite-depth gate: f must have degree >= 1");
    }
    ShiftRegisterCircuit c(n, 0);
    c.depths[i] = f.deg();
    c.feedback.push_back({axis, i, f, 0});
    c.placements = expand_feedback(c.feedback[0], 0);
    return c;
}
}  // namespace detail

/// z_i -> z_i / f(D^-1), x_i -> f(D) x_i. Uses deg(f) memory qubits on wire i.
inline ShiftRegisterCircuit build_inf_z_circuit(int i, const LaurentPoly &f, size_t n) {
    return detail::build_inf('Z', i, f, n);
}

/// z_i -> f(D) z_i, x_i -> x_i / f(D^-1). Uses deg(f) memory qubits on wire i.
inline ShiftRegisterCircuit build_inf_x_circuit(int i, const LaurentPoly &f, size_t n) {
    return detail::build_inf('X', i, f, n);
}

/// Primitive circuit for any gate.
inline ShiftRegisterCircuit build_gate_circuit(const Gate &g, size_t n) {
    g.validate(n);
    switch (g.kind) {
        case GateKind::CNOT:
            return build_cnot_circuit(g.a, g.b, g.f, n);
        case GateKind::CPHASE:
            return build_cphase2_circuit(g.a, g.b, g.f, n);
        case GateKind::CPHASE1:
            return build_cphase1_circuit(g.a, g.f, n);
        case GateKind::H:
        case GateKind::P:
            return build_single(g.kind, g.a, n);
        case GateKind::DELAY:
            return build_delay_circuit(g.a, g.shift, n);
        case GateKind::INF_Z:
            return build_inf_z_circuit(g.a, g.f, n);
        case GateKind::INF_X:
            return build_inf_x_circuit(g.a, g.f, n);
    }
    throw std::invalid_argument("unknown gate kind");
}

/// c1's outputs feed c2's inputs. c2's stages on wire w move down by c1's depth on w.
inline ShiftRegisterCircuit cascade(const ShiftRegisterCircuit &c1, const ShiftRegisterCircuit &c2) {
    if (c1.n != c2.n) {
        throw std::invalid_argument(
            "cascade: wire count mismatch (" + std::to_string(c1.n) + " vs " + std::to_string(c2.n) + ")");
    }
    ShiftRegisterCircuit out = c1;
    for (size_t w = 0; w < c1.n; w++) {
        out.depths[w] = c1.depths[w] + c2.depths[w];
    }
    int block_offset = (int)c1.feedback.size();
    for (const auto &node : c2.feedback) {
        FeedbackNode moved = node;
        moved.stage += c1.depths[node.wire];
        out.feedback.push_back(moved);
    }
    for (Placement p : c2.placements) {
        p.a.stage += c1.depths[p.a.wire];
        if (p.two_qubit()) {
            p.b.stage += c1.depths[p.b.wire];
        }
        if (p.block >= 0) {
            p.block += block_offset;
        }
        out.placements.push_back(p);
    }
    return out;
}

/// Square GF(2) matrix with packed rows.
class BitMatrix {
  public:
    BitMatrix() = default;
    BitMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), words_((cols + 63) / 64), data_(rows * words_) {
    }
    static BitMatrix identity(size_t n) {
        BitMatrix m(n, n);
        for (size_t k = 0; k < n; k++) {
            m.set(k, k, true);
        }
        return m;
    }
    size_t rows() const {
        return rows_;
    }
    size_t cols() const {
        return cols_;
    }
    bool get(size_t r, size_t c) const {
        return (data_[r * words_ + c / 64] >> (c % 64)) & 1;
    }
    void set(size_t r, size_t c, bool v) {
        uint64_t &w = data_[r * words_ + c / 64];
        uint64_t bit = uint64_t{1} << (c % 64);
        w = v ? (w | bit) : (w & ~bit);
    }
    /// col[target] ^= col[source]
    void add_col(size_t target, size_t source) {
        for (size_t r = 0; r < rows_; r++) {
            if (get(r, source)) {
                set(r, target, !get(r, target));
            }
        }
    }
    void swap_cols(size_t a, size_t b) {
        for (size_t r = 0; r < rows_; r++) {
            bool t = get(r, a);
            set(r, a, get(r, b));
            set(r, b, t);
        }
    }
    bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(), [](uint64_t w) { return w == 0; });
    }
    BitMatrix operator*(const BitMatrix &b) const {
        BitMatrix out(rows_, b.cols_);
        for (size_t r = 0; r < rows_; r++) {
            for (size_t k = 0; k < cols_; k++) {
                if (get(r, k)) {
                    for (size_t w = 0; w < b.words_; w++) {
                        out.data_[r * out.words_ + w] ^= b.data_[k * b.words_ + w];
                    }
                }
            }
        }
        return out;
    }

  private:
    size_t rows_ = 0;
    size_t cols_ = 0;
    size_t words_ = 0;
    std::vector<uint64_t> data_;
};

/// Transfer of a circuit: the raw clock-domain matrix equals D^latency * matrix.
template <typename T>
struct TransferT {
    SympMatrixT<T> matrix;
    int latency = 0;

    SympMatrixT<T> raw() const {
        return SympMatrixT<T>(matrix.shifted(latency));
    }
};

using Transfer = TransferT<LaurentPoly>;
using RationalTransferMatrix = TransferT<RationalTransfer>;

namespace detail {

/// One clock of the circuit as a linear map on its register, split into
/// input/state/output blocks (row-vector convention).
struct StateSpace {
    size_t n = 0;
    size_t states = 0;
    BitMatrix a, b, c, d;  // state->state, input->state, state->output, input->output
};

inline StateSpace state_space(const ShiftRegisterCircuit &circ) {
    circ.validate();
    size_t n = circ.n;
    std::vector<size_t> offset(n + 1, 0);
    for (size_t w = 0; w < n; w++) {
        offset[w + 1] = offset[w] + circ.depths[w] + 1;
    }
    size_t slots = offset[n];
    auto slot = [&](Slot s) { return offset[s.wire] + s.stage; };

    // Register map U, built by column operations: register_after = register_before * U.
    BitMatrix u = BitMatrix::identity(2 * slots);
    auto zc = [&](Slot s) { return slot(s); };
    auto xc = [&](Slot s) { return slots + slot(s); };
    for (const auto &p : circ.placements) {
        switch (p.kind) {
            case PrimKind::CNOT:
                u.add_col(xc(p.b), xc(p.a));
                u.add_col(zc(p.a), zc(p.b));
                break;
            case PrimKind::CZ:
                u.add_col(zc(p.a), xc(p.b));
                u.add_col(zc(p.b), xc(p.a));
                break;
            case PrimKind::H:
                u.swap_cols(zc(p.a), xc(p.a));
                break;
            case PrimKind::P:
                u.add_col(zc(p.a), xc(p.a));
                break;
        }
    }

    // Coordinates: inputs are stage-0 slots, state is stages 1..depth, outputs are
    // stage-depth slots; after the clock, stage s moves to stage s+1.
    std::vector<size_t> in_z, out_z, state_z, next_z;
    for (size_t w = 0; w < n; w++) {
        in_z.push_back(slot({(int)w, 0}));
        out_z.push_back(slot({(int)w, circ.depths[w]}));
    }
    for (size_t w = 0; w < n; w++) {
        for (int s = 1; s <= circ.depths[w]; s++) {
            state_z.push_back(slot({(int)w, s}));
            next_z.push_back(slot({(int)w, s - 1}));
        }
    }
    size_t st = state_z.size();
    StateSpace ss;
    ss.n = n;
    ss.states = 2 * st;
    ss.a = BitMatrix(2 * st, 2 * st);
    ss.b = BitMatrix(2 * n, 2 * st);
    ss.c = BitMatrix(2 * st, 2 * n);
    ss.d = BitMatrix(2 * n, 2 * n);
    auto coords = [&](const std::vector<size_t> &zs) {
        std::vector<size_t> out = zs;
        for (size_t z : zs) {
            out.push_back(slots + z);
        }
        return out;
    };
    auto in = coords(in_z), out = coords(out_z), state = coords(state_z), next = coords(next_z);
    auto fill = [&](BitMatrix &m, const std::vector<size_t> &rows, const std::vector<size_t> &cols) {
        for (size_t r = 0; r < rows.size(); r++) {
            for (size_t c = 0; c < cols.size(); c++) {
                m.set(r, c, u.get(rows[r], cols[c]));
            }
        }
    };
    fill(ss.a, state, next);
    fill(ss.b, in, next);
    fill(ss.c, state, out);
    fill(ss.d, in, out);
    return ss;
}

inline RationalMatrix to_rational(const BitMatrix &m) {
    RationalMatrix out(m.rows(), m.cols());
    for (size_t r = 0; r < m.rows(); r++) {
        for (size_t c = 0; c < m.cols(); c++) {
            if (m.get(r, c)) {
                out(r, c) = RationalTransfer::one();
            }
        }
    }
    return out;
}

/// Solves (I + D a) x = rhs over GF(2)(D) by Gauss-Jordan elimination.
inline RationalMatrix solve_feedback(const BitMatrix &a, RationalMatrix rhs) {
    size_t s = a.rows();
    RationalMatrix lhs(s, s);
    RationalTransfer d(LaurentPoly::monomial(1));
    for (size_t r = 0; r < s; r++) {
        for (size_t c = 0; c < s; c++) {
            if (a.get(r, c)) {
                lhs(r, c) = d;
            }
        }
        lhs(r, r) += RationalTransfer::one();
    }
    for (size_t col = 0; col < s; col++) {
        size_t pivot = col;
        while (pivot < s && lhs(pivot, col).is_zero()) {
            pivot++;
        }
        if (pivot == s) {
            throw std::logic_error("singular feedback system");
        }
        lhs.swap_rows(col, pivot);
        rhs.swap_rows(col, pivot);
        RationalTransfer inv = lhs(col, col).inverse();
        for (size_t c = 0; c < s; c++) {
            lhs(col, c) *= inv;
        }
        for (size_t c = 0; c < rhs.cols(); c++) {
            rhs(col, c) *= inv;
        }
        for (size_t r = 0; r < s; r++) {
            if (r == col || lhs(r, col).is_zero()) {
                continue;
            }
            RationalTransfer f = lhs(r, col);
            lhs.add_row_multiple(r, col, f);
            rhs.add_row_multiple(r, col, f);
        }
    }
    return rhs;
}

}  // namespace detail

/// True when some finite input produces an unending response.
inline bool has_infinite_depth(const ShiftRegisterCircuit &c) {
    auto ss = detail::state_space(c);
    BitMatrix p = ss.a;
    for (size_t k = 0; k <= ss.states; k++) {
        if (p.is_zero()) {
            return false;
        }
        p = p * ss.a;
    }
    return true;
}

/// Exact transfer, T(D) = d + D b (I + D a)^-1 c, with rational entries where needed.
inline RationalTransferMatrix circuit_transfer_rational(const ShiftRegisterCircuit &circ) {
    auto ss = detail::state_space(circ);
    RationalMatrix t = detail::to_rational(ss.d);
    if (ss.states) {
        RationalMatrix x = detail::solve_feedback(ss.a, detail::to_rational(ss.c));
        t = t + (detail::to_rational(ss.b) * x).shifted(1);
    }
    RationalTransferMatrix out;
    out.latency = circ.latency();
    out.matrix = RationalSympMatrix(t.shifted(-out.latency));
    return out;
}

/// Exact polynomial transfer of a finite-depth circuit. Throws std::domain_error when
/// the circuit has an infinite response.
inline Transfer circuit_transfer(const ShiftRegisterCircuit &circ) {
    auto ss = detail::state_space(circ);
    size_t n = circ.n;
    PolyMatrix t(2 * n, 2 * n);
    auto accumulate = [&](const BitMatrix &m, int e) {
        for (size_t r = 0; r < 2 * n; r++) {
            for (size_t c = 0; c < 2 * n; c++) {
                if (m.get(r, c)) {
                    t(r, c) += LaurentPoly::monomial(e);
                }
            }
        }
    };
    accumulate(ss.d, 0);
    if (ss.states) {
        // b a^k c contributes at lag k + 1; a is nilpotent for finite-depth circuits.
        BitMatrix bak = ss.b;
        for (size_t k = 0;; k++) {
            if (bak.is_zero()) {
                break;
            }
            if (k > ss.states) {
                throw std::domain_error("circuit has an infinite-depth response; use circuit_transfer_rational");
            }
            accumulate(bak * ss.c, (int)k + 1);
            bak = bak * ss.a;
        }
    }
    Transfer out;
    out.latency = circ.latency();
    out.matrix = SympMatrix(t.shifted(-out.latency));
    return out;
}

namespace detail {
inline std::string slot_text(Slot s, int stage) {
    std::string out = std::to_string(s.wire + 1);
    if (s.stage != stage) {
        out += "@" + std::to_string(s.stage);
    }
    return out;
}
}  // namespace detail

/// Canonical text form. Feedback blocks print as one "ffb" line in place of their CNOTs.
inline std::string format_circuit(const ShiftRegisterCircuit &c) {
    std::string out;
    out += "n " + std::to_string(c.n) + "\n";
    out += "frames " + std::to_string(c.frames()) + "\n";
    out += "latency " + std::to_string(c.latency()) + "\n";
    if (!c.uniform()) {
        out += "depths";
        for (int d : c.depths) {
            out += " " + std::to_string(d);
        }
        out += "\n";
    }
    int last_block = -1;
    for (const auto &p : c.placements) {
        if (p.block >= 0) {
            if (p.block != last_block) {
                const auto &node = c.feedback[p.block];
                out += std::string("ffb ") + node.axis + " wire=" + std::to_string(node.wire + 1) +
                       " s=" + std::to_string(node.stage) + " f=" + node.f.str() + "\n";
                last_block = p.block;
            }
            continue;
        }
        last_block = -1;
        int s = p.a.stage;
        out += std::string("gate ") + prim_kind_name(p.kind) + " s=" + std::to_string(s) +
               " a=" + detail::slot_text(p.a, s);
        if (p.two_qubit()) {
            out += " b=" + detail::slot_text(p.b, s);
            out += " f=" + LaurentPoly::monomial(p.a.stage - p.b.stage).str();
        }
        out += "\n";
    }
    return out;
}

inline ShiftRegisterCircuit parse_circuit(std::string_view content) {
    ShiftRegisterCircuit c;
    bool have_n = false;
    int frames = -1, latency = -1;
    bool have_depths = false;
    int line_no = 0;
    int last_line = 0;
    auto field = [](const text::Token &t, std::string_view key) -> std::string_view {
        if (t.value.size() <= key.size() || t.value.substr(0, key.size()) != key || t.value[key.size()] != '=') {
            throw ParseError("expected '" + std::string(key) + "=...'", 0, t.column);
        }
        return t.value.substr(key.size() + 1);
    };
    auto int_field = [&](const text::Token &t, std::string_view key) {
        auto v = field(t, key);
        return (int)text::parse_int(v, t.column + (int)key.size() + 1);
    };
    auto header_int = [&](const std::vector<text::Token> &toks) {
        if (toks.size() != 2) {
            throw ParseError("expected '" + std::string(toks[0].value) + " <integer>'", 0, toks[0].column);
        }
        int64_t v = text::parse_int(toks[1].value, toks[1].column);
        if (v < 0 || v > 100000) {
            throw ParseError("value out of range", 0, toks[1].column);
        }
        return (int)v;
    };
    for (std::string_view raw : text::lines_of(content)) {
        line_no++;
        std::string_view line = text::strip_line(raw);
        auto toks = text::split_tokens(line);
        if (toks.empty()) {
            continue;
        }
        last_line = line_no;
        try {
            std::string_view head = toks[0].value;
            if (head == "n") {
                if (have_n) {
                    throw ParseError("duplicate 'n'", 0, toks[0].column);
                }
                int v = header_int(toks);
                if (v < 1 || v > 4096) {
                    throw ParseError("n out of range", 0, toks[1].column);
                }
                c.n = v;
                have_n = true;
                continue;
            }
            if (!have_n) {
                throw ParseError("missing 'n <wires>' header", 0, toks[0].column);
            }
            if (head == "frames") {
                if (frames >= 0 || !c.placements.empty()) {
                    throw ParseError("'frames' must appear once, before placements", 0, toks[0].column);
                }
                frames = header_int(toks);
                c.depths.assign(c.n, frames);
            } else if (head == "latency") {
                if (latency >= 0 || !c.placements.empty()) {
                    throw ParseError("'latency' must appear once, before placements", 0, toks[0].column);
                }
                latency = header_int(toks);
            } else if (head == "depths") {
                if (have_depths || frames < 0 || !c.placements.empty()) {
                    throw ParseError("'depths' must follow 'frames' and precede placements", 0, toks[0].column);
                }
                if (toks.size() != c.n + 1) {
                    throw ParseError("expected one depth per wire", 0, toks[0].column);
                }
                for (size_t w = 0; w < c.n; w++) {
                    int64_t v = text::parse_int(toks[w + 1].value, toks[w + 1].column);
                    if (v < 0 || v > frames) {
                        throw ParseError("depth out of range", 0, toks[w + 1].column);
                    }
                    c.depths[w] = (int)v;
                }
                have_depths = true;
            } else if (head == "gate") {
                if (frames < 0 || latency < 0) {
                    throw ParseError("'frames' and 'latency' must precede placements", 0, toks[0].column);
                }
                if (toks.size() < 4) {
                    throw ParseError("expected 'gate <KIND> s=<stage> a=<wire[@stage]> ...'", 0, toks[0].column);
                }
                Placement p;
                std::string_view kind = toks[1].value;
                if (kind == "CNOT") {
                    p.kind = PrimKind::CNOT;
                } else if (kind == "CPHASE") {
                    p.kind = PrimKind::CZ;
                } else if (kind == "H") {
                    p.kind = PrimKind::H;
                } else if (kind == "P") {
                    p.kind = PrimKind::P;
                } else {
                    throw ParseError("unknown placement kind '" + std::string(kind) + "'", 0, toks[1].column);
                }
                int s = int_field(toks[2], "s");
                auto parse_slot = [&](const text::Token &t, std::string_view key) {
                    auto v = field(t, key);
                    int col = t.column + (int)key.size() + 1;
                    Slot out;
                    size_t at = v.find('@');
                    int64_t w = text::parse_int(v.substr(0, at), col);
                    out.wire = (int)w - 1;
                    out.stage = s;
                    if (at != std::string_view::npos) {
                        out.stage = (int)text::parse_int(v.substr(at + 1), col + (int)at + 1);
                    }
                    if (out.wire < 0 || (size_t)out.wire >= c.n) {
                        throw ParseError("wire out of range", 0, col);
                    }
                    if (out.stage < 0 || out.stage > c.depths[out.wire]) {
                        throw ParseError("stage out of range for wire", 0, col);
                    }
                    return out;
                };
                p.a = parse_slot(toks[3], "a");
                if (p.a.stage != s) {
                    throw ParseError("endpoint a must sit at stage s", 0, toks[3].column);
                }
                if (p.two_qubit()) {
                    if (toks.size() != 6) {
                        throw ParseError("two-qubit placement needs a=, b= and f=", 0, toks[0].column);
                    }
                    p.b = parse_slot(toks[4], "b");
                    if (p.a == p.b) {
                        throw ParseError("endpoints coincide", 0, toks[4].column);
                    }
                    auto fv = field(toks[5], "f");
                    LaurentPoly f;
                    try {
                        f = LaurentPoly::parse(fv);
                    } catch (const ParseError &e) {
                        throw e.at(0, toks[5].column + 1);
                    }
                    if (f != LaurentPoly::monomial(p.a.stage - p.b.stage)) {
                        throw ParseError(
                            "f must equal D^(stage(a)-stage(b)) = " +
                                LaurentPoly::monomial(p.a.stage - p.b.stage).str(),
                            0, toks[5].column);
                    }
                } else if (toks.size() != 4) {
                    throw ParseError("single-qubit placement takes only s= and a=", 0, toks[4].column);
                }
                c.placements.push_back(p);
            } else if (head == "ffb") {
                if (frames < 0 || latency < 0) {
                    throw ParseError("'frames' and 'latency' must precede placements", 0, toks[0].column);
                }
                if (toks.size() != 5) {
                    throw ParseError("expected 'ffb <Z|X> wire=<i> s=<stage> f=<poly>'", 0, toks[0].column);
                }
                FeedbackNode node;
                if (toks[1].value == "Z" || toks[1].value == "X") {
                    node.axis = toks[1].value[0];
                } else {
                    throw ParseError("feedback axis must be Z or X", 0, toks[1].column);
                }
                node.wire = int_field(toks[2], "wire") - 1;
                node.stage = int_field(toks[3], "s");
                try {
                    node.f = LaurentPoly::parse(field(toks[4], "f"));
                } catch (const ParseError &e) {
                    throw e.at(0, toks[4].column + 1);
                }
                if (node.wire < 0 || (size_t)node.wire >= c.n) {
                    throw ParseError("wire out of range", 0, toks[2].column);
                }
                if (node.f.is_zero() || node.f.del() < 0 || node.f.deg() < 1) {
                    throw ParseError("feedback polynomial must be a polynomial in D of degree >= 1", 0, toks[4].column);
                }
                if (node.stage < 0 || node.stage + node.f.deg() > c.depths[node.wire]) {
                    throw ParseError("feedback block does not fit on its wire", 0, toks[3].column);
                }
                int id = (int)c.feedback.size();
                c.feedback.push_back(node);
                for (const auto &p : expand_feedback(node, id)) {
                    c.placements.push_back(p);
                }
            } else {
                throw ParseError("unknown directive '" + std::string(head) + "'", 0, toks[0].column);
            }
        } catch (const ParseError &e) {
            throw e.at(line_no, 0);
        }
    }
    if (!have_n || frames < 0 || latency < 0) {
        throw ParseError("circuit needs 'n', 'frames' and 'latency' headers", last_line ? last_line : 1, 1);
    }
    if (c.frames() != frames) {
        throw ParseError("'frames' disagrees with the deepest wire", last_line, 1);
    }
    if (c.latency() != latency) {
        throw ParseError(
            "'latency' must equal the shallowest wire depth (" + std::to_string(c.latency()) + ")", last_line, 1);
    }
    try {
        c.validate();
    } catch (const std::invalid_argument &e) {
        throw ParseError(e.what(), last_line, 1);
    }
    return c;
}

}  // namespace qsr

#endif
