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

#ifndef QSR_SYNTHESIS_HPP
#define QSR_SYNTHESIS_HPP

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qsr/circuit.hpp"
#include "qsr/gate.hpp"
#include "qsr/gf2poly.hpp"
#include "qsr/matrix.hpp"
#include "qsr/symplectic.hpp"

namespace qsr {

// ---------------------------------------------------------------------------
// Smith normal form.

/// Row op: row[target] += factor * row[source]. Column op: col[target] += factor * col[source].
/// Swap exchanges target and source.
struct ElementaryOp {
    enum class Type { AddMul, Swap };
    Type type = Type::AddMul;
    bool row = true;
    int target = 0;
    int source = 0;
    LaurentPoly factor;
    bool operator==(const ElementaryOp &other) const = default;
};

/// m = a * s * b, with s diagonal and a, b products of the recorded operations.
struct SmithDecomposition {
    PolyMatrix a;
    PolyMatrix s;
    PolyMatrix b;
    std::vector<ElementaryOp> row_ops;
    std::vector<ElementaryOp> col_ops;

    /// Diagonal entries up to the first zero.
    std::vector<LaurentPoly> invariant_factors() const {
        std::vector<LaurentPoly> out;
        for (size_t k = 0; k < std::min(s.rows(), s.cols()) && !s(k, k).is_zero(); k++) {
            out.push_back(s(k, k));
        }
        return out;
    }
};

/// GF(2)[D]: Euclidean norm is the degree.
struct PolynomialRing {
    static int norm(const LaurentPoly &p) {
        return p.deg();
    }
    static std::pair<LaurentPoly, LaurentPoly> divmod(const LaurentPoly &a, const LaurentPoly &b) {
        return poly_divmod(a, b);
    }
};

/// GF(2)[D, D^-1]: units are monomials and the norm is the span.
struct LaurentRing {
    static int norm(const LaurentPoly &p) {
        return p.span();
    }
    static std::pair<LaurentPoly, LaurentPoly> divmod(const LaurentPoly &a, const LaurentPoly &b) {
        if (b.is_zero()) {
            throw std::domain_error("division by zero");
        }
        if (a.is_zero()) {
            return {};
        }
        int sa = a.del(), sb = b.del();
        auto [q, r] = poly_divmod(a.shifted(-sa), b.shifted(-sb));
        return {q.shifted(sa - sb), r.shifted(sa)};
    }
};

template <typename Ring>
SmithDecomposition smith_decompose(const PolyMatrix &m) {
    size_t rows = m.rows(), cols = m.cols();
    SmithDecomposition d;
    d.s = m;
    d.a = PolyMatrix::identity(rows);
    d.b = PolyMatrix::identity(cols);
    PolyMatrix &s = d.s;

    auto row_add = [&](size_t t, size_t src, const LaurentPoly &f) {
        s.add_row_multiple(t, src, f);
        d.a.add_col_multiple(src, t, f);
        d.row_ops.push_back({ElementaryOp::Type::AddMul, true, (int)t, (int)src, f});
    };
    auto row_swap = [&](size_t t, size_t src) {
        if (t == src) return;
        s.swap_rows(t, src);
        d.a.swap_cols(t, src);
        d.row_ops.push_back({ElementaryOp::Type::Swap, true, (int)t, (int)src, {}});
    };
    auto col_add = [&](size_t t, size_t src, const LaurentPoly &f) {
        s.add_col_multiple(t, src, f);
        d.b.add_row_multiple(src, t, f);
        d.col_ops.push_back({ElementaryOp::Type::AddMul, false, (int)t, (int)src, f});
    };
    auto col_swap = [&](size_t t, size_t src) {
        if (t == src) return;
        s.swap_cols(t, src);
        d.b.swap_rows(t, src);
        d.col_ops.push_back({ElementaryOp::Type::Swap, false, (int)t, (int)src, {}});
    };

    for (size_t k = 0; k < std::min(rows, cols); k++) {
        // Pivot: minimal norm, ties broken by lowest (row, col).
        size_t pr = rows, pc = cols;
        for (size_t r = k; r < rows; r++) {
            for (size_t c = k; c < cols; c++) {
                if (!s(r, c).is_zero() && (pr == rows || Ring::norm(s(r, c)) < Ring::norm(s(pr, pc)))) {
                    pr = r;
                    pc = c;
                }
            }
        }
        if (pr == rows) {
            break;
        }
        row_swap(k, pr);
        col_swap(k, pc);
        while (true) {
            bool again = false;
            for (size_t r = k + 1; r < rows && !again; r++) {
                if (s(r, k).is_zero()) continue;
                auto [q, rem] = Ring::divmod(s(r, k), s(k, k));
                if (!q.is_zero()) row_add(r, k, q);
                if (!rem.is_zero()) {
                    row_swap(k, r);
                    again = true;
                }
            }
            for (size_t c = k + 1; c < cols && !again; c++) {
                if (s(k, c).is_zero()) continue;
                auto [q, rem] = Ring::divmod(s(k, c), s(k, k));
                if (!q.is_zero()) col_add(c, k, q);
                if (!rem.is_zero()) {
                    col_swap(k, c);
                    again = true;
                }
            }
            if (again) continue;
            // Divisibility of the remaining block by the pivot.
            for (size_t r = k + 1; r < rows && !again; r++) {
                for (size_t c = k + 1; c < cols && !again; c++) {
                    if (!s(r, c).is_zero() && !Ring::divmod(s(r, c), s(k, k)).second.is_zero()) {
                        row_add(k, r, LaurentPoly::one());
                        again = true;
                    }
                }
            }
            if (!again) break;
        }
    }
    return d;
}

/// Smith form over GF(2)[D]. Entries must not contain negative powers of D.
inline SmithDecomposition smith_normal_form(const PolyMatrix &m) {
    for (size_t r = 0; r < m.rows(); r++) {
        for (size_t c = 0; c < m.cols(); c++) {
            if (!m(r, c).is_zero() && m(r, c).del() < 0) {
                throw std::domain_error("smith_normal_form: entries must be polynomials in D");
            }
        }
    }
    return smith_decompose<PolynomialRing>(m);
}

/// Smith form over GF(2)[D, D^-1], where monomials are units.
inline SmithDecomposition smith_normal_form_laurent(const PolyMatrix &m) {
    return smith_decompose<LaurentRing>(m);
}

// ---------------------------------------------------------------------------
// CSS encoder.

class NotDualContaining : public std::invalid_argument {
  public:
    NotDualContaining() : std::invalid_argument("code is not dual-containing: H1 H2^T(D^-1) != 0") {
    }
};

class CatastrophicCheckMatrix : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

struct EncoderPlan {
    size_t n = 0;
    size_t s_x = 0;
    size_t s_z = 0;
    ElementaryOpSequence ops;
    SympMatrix b_overall;
    int memory_bound = 0;
};

/// s_x X-type rows on qubits 1..s_x, then s_z Z-type rows on the next s_z qubits.
inline StabilizerMatrix unencoded_stabilizer(size_t n, size_t s_x, size_t s_z) {
    if (s_x + s_z > n) {
        throw std::invalid_argument("unencoded_stabilizer: s_x + s_z exceeds n");
    }
    PolyMatrix h1(s_x, n), h2(s_z, n);
    for (size_t k = 0; k < s_x; k++) {
        h1(k, k) = LaurentPoly::one();
    }
    for (size_t k = 0; k < s_z; k++) {
        h2(k, s_x + k) = LaurentPoly::one();
    }
    auto s = StabilizerMatrix::from_css(h1, h2);
    s.n = n;
    return s;
}

namespace detail {
inline void push_column_swap(ElementaryOpSequence &ops, int i, int j) {
    ops.push_back(Gate::cnot(i, j, LaurentPoly::one()));
    ops.push_back(Gate::cnot(j, i, LaurentPoly::one()));
    ops.push_back(Gate::cnot(i, j, LaurentPoly::one()));
}

inline void require_unit_diagonal(const SmithDecomposition &d, size_t rank, const char *which) {
    auto factors = d.invariant_factors();
    if (factors.size() < rank) {
        throw CatastrophicCheckMatrix(std::string("catastrophic check matrix: ") + which + " does not have full row rank");
    }
    for (const auto &f : factors) {
        if (!f.is_monomial()) {
            throw CatastrophicCheckMatrix(
                std::string("catastrophic check matrix: ") + which + " has invariant factor " + f.str());
        }
    }
}
}  // namespace detail

/// Decoding-direction column eliminations turned around into an encoder. The X-type
/// block is reduced to [I 0] by X-block column operations (CNOTs), then the Z-type
/// block restricted to the remaining qubits by Z-block column operations.
inline EncoderPlan css_encoder(const PolyMatrix &h1, const PolyMatrix &h2) {
    size_t n = std::max(h1.cols(), h2.cols());
    if ((h1.rows() && h1.cols() != n) || (h2.rows() && h2.cols() != n)) {
        throw std::invalid_argument("css_encoder: H1 and H2 must have the same number of columns");
    }
    if (!dual_containing_check(h1, h2)) {
        throw NotDualContaining();
    }
    size_t rx = h1.rows(), rz = h2.rows();
    if (rx + rz > n) {
        throw CatastrophicCheckMatrix("more stabilizer generators than qubits per frame");
    }
    ElementaryOpSequence decoder;
    // Column swaps are tracked as a relabeling; logical column c sits on qubit perm[c].
    std::vector<int> perm(n);
    for (size_t c = 0; c < n; c++) {
        perm[c] = (int)c;
    }
    if (rx) {
        auto d = smith_normal_form_laurent(h1);
        detail::require_unit_diagonal(d, rx, "H1");
        for (const auto &op : d.col_ops) {
            if (op.type == ElementaryOp::Type::Swap) {
                std::swap(perm[op.target], perm[op.source]);
            } else {
                decoder.push_back(Gate::cnot(perm[op.source], perm[op.target], op.factor));
            }
        }
    }
    if (rz) {
        auto z_rows = StabilizerMatrix::from_css(PolyMatrix(0, n), h2);
        z_rows.n = n;
        auto reduced = apply_to_stabilizer(z_rows, sequence_matrix(decoder, n));
        PolyMatrix sub(rz, n - rx);
        for (size_t r = 0; r < rz; r++) {
            for (size_t c = 0; c < n; c++) {
                int q = perm[c];
                if (!reduced.rows(r, n + q).is_zero() || (c < rx && !reduced.rows(r, q).is_zero())) {
                    throw std::logic_error("css_encoder: X elimination left Z rows outside the remaining qubits");
                }
                if (c >= rx) {
                    sub(r, c - rx) = reduced.rows(r, q);
                }
            }
        }
        auto d = smith_normal_form_laurent(sub);
        detail::require_unit_diagonal(d, rz, "H2");
        for (const auto &op : d.col_ops) {
            size_t t = op.target + rx, s = op.source + rx;
            if (op.type == ElementaryOp::Type::Swap) {
                std::swap(perm[t], perm[s]);
            } else {
                decoder.push_back(Gate::cnot(perm[t], perm[s], op.factor.reciprocal()));
            }
        }
    }
    for (size_t c = 0; c < n; c++) {
        int q = perm[c];
        if (q == (int)c) continue;
        detail::push_column_swap(decoder, (int)c, q);
        auto j = std::find(perm.begin(), perm.end(), (int)c) - perm.begin();
        perm[j] = q;
        perm[c] = (int)c;
    }
    EncoderPlan plan;
    plan.n = n;
    plan.s_x = rx;
    plan.s_z = rz;
    for (auto it = decoder.rbegin(); it != decoder.rend(); ++it) {
        auto &ops = plan.ops;
        if (!ops.empty() && ops.back().a == it->a && ops.back().b == it->b) {
            ops.back().f = ops.back().f + it->f;
            if (ops.back().f.is_zero()) ops.pop_back();
        } else {
            ops.push_back(*it);
        }
    }
    plan.b_overall = sequence_matrix(plan.ops, n);
    plan.memory_bound = abs_deg_matrix(plan.b_overall);
    return plan;
}

inline EncoderPlan css_encoder(const StabilizerMatrix &code) {
    if (!code.css) {
        throw std::invalid_argument("css_encoder: code is not in CSS form");
    }
    return css_encoder(code.css->h1, code.css->h2);
}

/// The plan's matrix applied to the unencoded stabilizer.
inline StabilizerMatrix encoded_stabilizer(const EncoderPlan &plan) {
    return apply_to_stabilizer(unencoded_stabilizer(plan.n, plan.s_x, plan.s_z), plan.b_overall);
}

inline int memory_bound_css(const EncoderPlan &plan) {
    return abs_deg_matrix(plan.b_overall);
}

// ---------------------------------------------------------------------------
// Memory reduction.

namespace detail {

struct PauliBitsLite {
    unsigned char z = 0;
    unsigned char x = 0;
};

/// A placement instance on concrete qubits (wire, frame), frames relative to a
/// reference clock.
struct Instance {
    PrimKind kind;
    std::array<std::pair<int, int>, 2> q;
    int arity;
};

inline Instance instance_of(const Placement &p, int clock) {
    Instance in{p.kind, {}, p.two_qubit() ? 2 : 1};
    in.q[0] = {p.a.wire, clock - p.a.stage};
    if (p.two_qubit()) {
        in.q[1] = {p.b.wire, clock - p.b.stage};
    }
    return in;
}

inline bool shares_qubit(const Instance &u, const Instance &v) {
    for (int i = 0; i < u.arity; i++) {
        for (int j = 0; j < v.arity; j++) {
            if (u.q[i] == v.q[j]) return true;
        }
    }
    return false;
}

/// Exact check that two local gates commute as symplectic maps on their joint qubits.
inline bool instances_commute(const Instance &u, const Instance &v) {
    if (!shares_qubit(u, v)) {
        return true;
    }
    std::vector<std::pair<int, int>> qubits;
    auto index = [&](std::pair<int, int> q) {
        auto it = std::find(qubits.begin(), qubits.end(), q);
        if (it != qubits.end()) return (int)(it - qubits.begin());
        qubits.push_back(q);
        return (int)qubits.size() - 1;
    };
    std::array<int, 2> iu{}, iv{};
    for (int k = 0; k < u.arity; k++) iu[k] = index(u.q[k]);
    for (int k = 0; k < v.arity; k++) iv[k] = index(v.q[k]);
    size_t m = qubits.size();
    auto apply = [](const Instance &g, const std::array<int, 2> &idx, std::vector<PauliBitsLite> &st) {
        auto &qa = st[idx[0]];
        switch (g.kind) {
            case PrimKind::CNOT: {
                auto &qb = st[idx[1]];
                qb.x ^= qa.x;
                qa.z ^= qb.z;
                break;
            }
            case PrimKind::CZ: {
                auto &qb = st[idx[1]];
                qa.z ^= qb.x;
                qb.z ^= qa.x;
                break;
            }
            case PrimKind::H:
                std::swap(qa.z, qa.x);
                break;
            case PrimKind::P:
                qa.z ^= qa.x;
                break;
        }
    };
    for (size_t basis = 0; basis < 2 * m; basis++) {
        std::vector<PauliBitsLite> s1(m), s2(m);
        (basis < m ? s1[basis].z : s1[basis - m].x) = 1;
        s2 = s1;
        apply(u, iu, s1);
        apply(v, iv, s1);
        apply(v, iv, s2);
        apply(u, iu, s2);
        for (size_t k = 0; k < m; k++) {
            if (s1[k].z != s2[k].z || s1[k].x != s2[k].x) return false;
        }
    }
    return true;
}

inline bool same_gate(const Placement &p, const Placement &q) {
    if (p.kind != q.kind || p.block != q.block) return false;
    if (p.a == q.a && p.b == q.b) return true;
    return p.kind == PrimKind::CZ && p.a == q.b && p.b == q.a;
}

class Reducer {
  public:
    explicit Reducer(ShiftRegisterCircuit c) : c_(std::move(c)) {
    }

    ShiftRegisterCircuit run() {
        bool changed = true;
        while (changed) {
            changed = false;
            changed |= cancel_pairs();
            for (size_t k = 0; k < frozen_from(); k++) {
                while (can_move_down(k)) {
                    move_down(k);
                    changed = true;
                }
            }
            changed |= trim();
        }
        return std::move(c_);
    }

  private:
    size_t frozen_from() const {
        for (size_t k = 0; k < c_.placements.size(); k++) {
            if (c_.placements[k].block >= 0) return k;
        }
        return c_.placements.size();
    }

    bool can_move_down(size_t k) const {
        const Placement &p = c_.placements[k];
        if (p.a.stage < 1 || (p.two_qubit() && p.b.stage < 1)) {
            return false;
        }
        // The instance at clock 0 moves to clock -1. It crosses later placements at
        // clock -1 and earlier placements at clock 0.
        Instance moving = instance_of(p, 0);
        for (size_t j = 0; j < c_.placements.size(); j++) {
            if (j == k) continue;
            Instance other = instance_of(c_.placements[j], j > k ? -1 : 0);
            if (!instances_commute(moving, other)) return false;
        }
        return true;
    }

    void move_down(size_t k) {
        Placement &p = c_.placements[k];
        p.a.stage--;
        if (p.two_qubit()) p.b.stage--;
    }

    bool cancel_pairs() {
        size_t limit = frozen_from();
        for (size_t q = 0; q < limit; q++) {
            for (size_t p = q; p-- > 0;) {
                const Placement &pq = c_.placements[q];
                Instance iq = instance_of(pq, 0);
                if (same_gate(c_.placements[p], pq)) {
                    c_.placements.erase(c_.placements.begin() + q);
                    c_.placements.erase(c_.placements.begin() + p);
                    return true;
                }
                if (!instances_commute(iq, instance_of(c_.placements[p], 0))) break;
            }
        }
        return false;
    }

    bool trim() {
        bool changed = false;
        auto all_positive = [&]() {
            return !c_.depths.empty() && std::all_of(c_.depths.begin(), c_.depths.end(), [](int d) { return d >= 1; });
        };
        while (all_positive()) {
            bool top_used = false, bottom_used = false;
            auto note = [&](Slot s) {
                top_used |= s.stage == c_.depths[s.wire];
                bottom_used |= s.stage == 0;
            };
            for (const auto &p : c_.placements) {
                note(p.a);
                if (p.two_qubit()) note(p.b);
            }
            if (!top_used) {
                for (int &d : c_.depths) d--;
            } else if (!bottom_used) {
                for (int &d : c_.depths) d--;
                for (auto &p : c_.placements) {
                    p.a.stage--;
                    if (p.two_qubit()) p.b.stage--;
                }
                for (auto &node : c_.feedback) node.stage--;
            } else {
                break;
            }
            changed = true;
        }
        return changed;
    }

    ShiftRegisterCircuit c_;
};

}  // namespace detail

/// Commutes gates toward earlier stages, cancels adjacent duplicates, and drops memory
/// frames no gate touches. Gates at or after the first feedback block stay put. The
/// transfer is preserved up to a global power of D; M never grows.
inline ShiftRegisterCircuit reduce_memory(const ShiftRegisterCircuit &c) {
    c.validate();
    return detail::Reducer(c).run();
}

/// Cascade of the primitive circuits, without reduction.
inline ShiftRegisterCircuit cascade_sequence(const ElementaryOpSequence &ops, size_t n) {
    ShiftRegisterCircuit c(n, 0);
    for (const Gate &g : ops) {
        c = cascade(c, build_gate_circuit(g, n));
    }
    return c;
}

inline ShiftRegisterCircuit compile_sequence(const ElementaryOpSequence &ops, size_t n) {
    return reduce_memory(cascade_sequence(ops, n));
}

// ---------------------------------------------------------------------------
// Memory formulas.

struct ConstraintLengths {
    std::vector<int> nu;
    int total = 0;
    int memory = 0;
};

/// nu_i = max degree in row i; nu = sum; m = max.
inline ConstraintLengths constraint_lengths(const StabilizerMatrix &s) {
    ConstraintLengths out;
    for (size_t r = 0; r < s.num_rows(); r++) {
        int nu = 0;
        for (size_t c = 0; c < 2 * s.n; c++) {
            if (!s.rows(r, c).is_zero()) {
                nu = std::max(nu, s.rows(r, c).deg());
            }
        }
        out.nu.push_back(nu);
        out.total += nu;
        out.memory = std::max(out.memory, nu);
    }
    return out;
}

/// max_i |deg|(gamma2_ii) + |deg|(L) + |deg|(B).
inline int typeII_memory_bound(const std::vector<LaurentPoly> &gamma2_diag, const PolyMatrix &l, const PolyMatrix &b) {
    int m1 = 0;
    for (const auto &g : gamma2_diag) {
        m1 = std::max(m1, abs_deg_poly(g));
    }
    return m1 + abs_deg_matrix(l) + abs_deg_matrix(b);
}

}  // namespace qsr

#endif
