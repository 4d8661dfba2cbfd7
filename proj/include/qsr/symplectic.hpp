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

#ifndef QSR_SYMPLECTIC_HPP
#define QSR_SYMPLECTIC_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qsr/gate.hpp"
#include "qsr/gf2poly.hpp"
#include "qsr/matrix.hpp"
#include "qsr/text.hpp"

namespace qsr {

/// 2n x 2n transfer matrix in [Z|X] layout. Row r is the image of input generator r
/// (Z_1..Z_n then X_1..X_n); vectors are row vectors multiplied on the left.
template <typename T>
class SympMatrixT : public Matrix<T> {
  public:
    SympMatrixT() = default;
    explicit SympMatrixT(size_t n) : Matrix<T>(2 * n, 2 * n), n_(n) {
    }
    SympMatrixT(const Matrix<T> &m) : Matrix<T>(m), n_(m.rows() / 2) {
        if (m.rows() != m.cols() || m.rows() % 2) {
            throw std::invalid_argument("symplectic matrix must be 2n x 2n");
        }
    }

    static SympMatrixT identity(size_t n) {
        return SympMatrixT(Matrix<T>::identity(2 * n));
    }

    size_t num_qubits() const {
        return n_;
    }
    size_t z(size_t i) const {
        return i;
    }
    size_t x(size_t i) const {
        return n_ + i;
    }

  private:
    size_t n_ = 0;
};

using SympMatrix = SympMatrixT<LaurentPoly>;
using RationalSympMatrix = SympMatrixT<RationalTransfer>;

namespace detail {

template <typename T>
SympMatrixT<T> finite_gate_matrix(const Gate &g, size_t n) {
    g.validate(n);
    auto m = SympMatrixT<T>::identity(n);
    size_t i = g.a;
    size_t j = g.b < 0 ? 0 : (size_t)g.b;
    switch (g.kind) {
        case GateKind::CNOT:
            m(m.x(i), m.x(j)) = T(g.f);
            m(m.z(j), m.z(i)) = T(g.f.reciprocal());
            break;
        case GateKind::CPHASE:
            m(m.x(i), m.z(j)) = T(g.f);
            m(m.x(j), m.z(i)) = T(g.f.reciprocal());
            break;
        case GateKind::CPHASE1:
            m(m.x(i), m.z(i)) = T(g.f + g.f.reciprocal());
            break;
        case GateKind::H:
            m(m.z(i), m.z(i)) = T();
            m(m.x(i), m.x(i)) = T();
            m(m.z(i), m.x(i)) = T::one();
            m(m.x(i), m.z(i)) = T::one();
            break;
        case GateKind::P:
            m(m.x(i), m.z(i)) = T::one();
            break;
        case GateKind::DELAY:
            m(m.z(i), m.z(i)) = T(LaurentPoly::monomial(g.shift));
            m(m.x(i), m.x(i)) = T(LaurentPoly::monomial(g.shift));
            break;
        default:
            throw std::invalid_argument(std::string(gate_kind_name(g.kind)) + " has a rational transfer matrix");
    }
    return m;
}

}  // namespace detail

/// Closed-form transfer matrix of a finite-depth gate.
inline SympMatrix gate_matrix(const Gate &g, size_t n) {
    return detail::finite_gate_matrix<LaurentPoly>(g, n);
}

/// Closed-form transfer matrix of any gate, including the infinite-depth ones.
inline RationalSympMatrix gate_matrix_rational(const Gate &g, size_t n) {
    if (!g.infinite_depth()) {
        return detail::finite_gate_matrix<RationalTransfer>(g, n);
    }
    g.validate(n);
    auto m = RationalSympMatrix::identity(n);
    size_t i = g.a;
    RationalTransfer direct(g.f);
    RationalTransfer feedback(LaurentPoly::one(), g.f.reciprocal());
    if (g.kind == GateKind::INF_Z) {
        m(m.z(i), m.z(i)) = feedback;
        m(m.x(i), m.x(i)) = direct;
    } else {
        m(m.z(i), m.z(i)) = direct;
        m(m.x(i), m.x(i)) = feedback;
    }
    return m;
}

/// a then b: the ordinary product a*b under the row-vector convention.
template <typename T>
SympMatrixT<T> mat_mul(const SympMatrixT<T> &a, const SympMatrixT<T> &b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw std::invalid_argument("mat_mul: frame width mismatch");
    }
    return SympMatrixT<T>(static_cast<const Matrix<T> &>(a) * static_cast<const Matrix<T> &>(b));
}

/// Ordered product of the gates' matrices (first gate applied first).
inline SympMatrix sequence_matrix(const ElementaryOpSequence &ops, size_t n) {
    auto m = SympMatrix::identity(n);
    for (const Gate &g : ops) {
        m = mat_mul(m, gate_matrix(g, n));
    }
    return m;
}

inline RationalSympMatrix sequence_matrix_rational(const ElementaryOpSequence &ops, size_t n) {
    auto m = RationalSympMatrix::identity(n);
    for (const Gate &g : ops) {
        m = mat_mul(m, gate_matrix_rational(g, n));
    }
    return m;
}

/// Largest abs_deg_poly over the entries, with no prefactor stripped.
inline int abs_deg_matrix(const PolyMatrix &m) {
    int best = 0;
    for (size_t r = 0; r < m.rows(); r++) {
        for (size_t c = 0; c < m.cols(); c++) {
            best = std::max(best, abs_deg_poly(m(r, c)));
        }
    }
    return best;
}

template <typename T>
Matrix<T> symplectic_form(size_t n) {
    Matrix<T> lam(2 * n, 2 * n);
    for (size_t k = 0; k < n; k++) {
        lam(k, n + k) = T::one();
        lam(n + k, k) = T::one();
    }
    return lam;
}

/// m * Lambda * m^T(D^-1) == Lambda.
template <typename T>
bool symplectic_check(const Matrix<T> &m) {
    if (m.rows() != m.cols() || m.rows() % 2) {
        return false;
    }
    auto lam = symplectic_form<T>(m.rows() / 2);
    return m * lam * m.transpose_reciprocal() == lam;
}

/// X <-> Z relabeling of a transfer matrix: conjugation by the all-Hadamard frame.
template <typename T>
SympMatrixT<T> swap_xz(const SympMatrixT<T> &m) {
    auto lam = symplectic_form<T>(m.num_qubits());
    return SympMatrixT<T>(lam * m * lam);
}

/// Check matrix with rows in [Z|X] layout. For CSS codes `css` holds (H1, H2):
/// H1 is the X block of the X-type rows, H2 the Z block of the Z-type rows.
struct StabilizerMatrix {
    struct CssParts {
        PolyMatrix h1;
        PolyMatrix h2;
    };

    size_t n = 0;
    PolyMatrix rows;
    std::optional<CssParts> css;

    StabilizerMatrix() = default;
    StabilizerMatrix(size_t n, PolyMatrix rows) : n(n), rows(std::move(rows)) {
        if (this->rows.cols() != 2 * n) {
            throw std::invalid_argument("stabilizer rows must have 2n entries");
        }
    }

    /// X-type rows [0 | H1] first, then Z-type rows [H2 | 0].
    static StabilizerMatrix from_css(const PolyMatrix &h1, const PolyMatrix &h2) {
        size_t n = h1.rows() ? h1.cols() : h2.cols();
        if ((h1.rows() && h1.cols() != n) || (h2.rows() && h2.cols() != n)) {
            throw std::invalid_argument("H1 and H2 must have the same number of columns");
        }
        PolyMatrix rows(h1.rows() + h2.rows(), 2 * n);
        for (size_t r = 0; r < h1.rows(); r++) {
            for (size_t c = 0; c < n; c++) {
                rows(r, n + c) = h1(r, c);
            }
        }
        for (size_t r = 0; r < h2.rows(); r++) {
            for (size_t c = 0; c < n; c++) {
                rows(h1.rows() + r, c) = h2(r, c);
            }
        }
        StabilizerMatrix s(n, rows);
        s.css = CssParts{h1, h2};
        return s;
    }

    size_t num_rows() const {
        return rows.rows();
    }
};

/// Symplectic product matrix: entry (a, b) is row_a's Z times row_b's X^T(D^-1) plus X times Z^T(D^-1).
inline PolyMatrix commutation_matrix(const StabilizerMatrix &s) {
    auto lam = symplectic_form<LaurentPoly>(s.n);
    return s.rows * lam * s.rows.transpose_reciprocal();
}

inline bool commutation_check(const StabilizerMatrix &s) {
    return commutation_matrix(s).is_zero();
}

inline StabilizerMatrix apply_to_stabilizer(const StabilizerMatrix &s, const SympMatrix &m) {
    if (s.n != m.num_qubits()) {
        throw std::invalid_argument("apply_to_stabilizer: frame width mismatch");
    }
    return StabilizerMatrix(s.n, s.rows * m);
}

/// Equal row spans over GF(2)(D).
inline bool row_space_equiv(const StabilizerMatrix &a, const StabilizerMatrix &b) {
    if (a.n != b.n) {
        return false;
    }
    size_t ra = rank(a.rows);
    size_t rb = rank(b.rows);
    if (ra != rb) {
        return false;
    }
    PolyMatrix stacked(a.num_rows() + b.num_rows(), 2 * a.n);
    for (size_t r = 0; r < a.num_rows(); r++) {
        for (size_t c = 0; c < 2 * a.n; c++) {
            stacked(r, c) = a.rows(r, c);
        }
    }
    for (size_t r = 0; r < b.num_rows(); r++) {
        for (size_t c = 0; c < 2 * a.n; c++) {
            stacked(a.num_rows() + r, c) = b.rows(r, c);
        }
    }
    return rank(stacked) == ra;
}

/// H1 * H2^T(D^-1) == 0.
inline bool dual_containing_check(const PolyMatrix &h1, const PolyMatrix &h2) {
    if (h1.rows() == 0 || h2.rows() == 0) {
        return true;
    }
    return (h1 * h2.transpose_reciprocal()).is_zero();
}

/// Stabilizer text format:
///   n 3
///   css            (optional; rows are then pure X or pure Z)
///   X: 1 D 1+D     (X-type row, n entries)
///   Z: D 1 1+D     (Z-type row, n entries)
///   row: <n Z entries> | <n X entries>   (general row)
inline StabilizerMatrix parse_stabilizer(std::string_view content) {
    size_t n = 0;
    bool have_n = false;
    bool css = false;
    std::vector<std::vector<LaurentPoly>> xrows, zrows, general;
    std::vector<int> order;  // 0 = X row, 1 = Z row, 2 = general
    int line_no = 0;
    for (std::string_view raw : text::lines_of(content)) {
        line_no++;
        std::string_view line = text::strip_line(raw);
        auto toks = text::split_tokens(line);
        if (toks.empty()) {
            continue;
        }
        try {
            std::string_view head = toks[0].value;
            if (head == "n") {
                if (have_n || toks.size() != 2) {
                    throw ParseError("expected a single 'n <qubits>' header", 0, toks[0].column);
                }
                int64_t v = text::parse_int(toks[1].value, toks[1].column);
                if (v < 1 || v > 4096) {
                    throw ParseError("n out of range", 0, toks[1].column);
                }
                n = (size_t)v;
                have_n = true;
                continue;
            }
            if (!have_n) {
                throw ParseError("missing 'n <qubits>' header", 0, toks[0].column);
            }
            if (head == "css") {
                if (toks.size() != 1) {
                    throw ParseError("trailing tokens after 'css'", 0, toks[1].column);
                }
                css = true;
                continue;
            }
            auto parse_entries = [&](size_t first, size_t count) {
                if (toks.size() - first != count) {
                    throw ParseError(
                        "expected " + std::to_string(count) + " entries, got " + std::to_string(toks.size() - first), 0,
                        toks[0].column);
                }
                std::vector<LaurentPoly> out;
                for (size_t k = first; k < toks.size(); k++) {
                    try {
                        out.push_back(LaurentPoly::parse(toks[k].value));
                    } catch (const ParseError &e) {
                        throw e.at(0, toks[k].column - 1);
                    }
                }
                return out;
            };
            if (head == "X:" || head == "Z:") {
                auto row = parse_entries(1, n);
                (head == "X:" ? xrows : zrows).push_back(std::move(row));
                order.push_back(head == "X:" ? 0 : 1);
            } else if (head == "row:") {
                size_t bar = 0;
                for (size_t k = 1; k < toks.size(); k++) {
                    if (toks[k].value == "|") {
                        bar = k;
                    }
                }
                if (bar != 1 + n || toks.size() != 2 + 2 * n) {
                    throw ParseError("general row must be '<n entries> | <n entries>'", 0, toks[0].column);
                }
                std::vector<LaurentPoly> row;
                for (size_t k = 1; k < toks.size(); k++) {
                    if (k == bar) {
                        continue;
                    }
                    try {
                        row.push_back(LaurentPoly::parse(toks[k].value));
                    } catch (const ParseError &e) {
                        throw e.at(0, toks[k].column - 1);
                    }
                }
                general.push_back(std::move(row));
                order.push_back(2);
            } else {
                throw ParseError("unknown directive '" + std::string(head) + "'", 0, toks[0].column);
            }
        } catch (const ParseError &e) {
            throw e.at(line_no, 0);
        }
    }
    if (!have_n) {
        throw ParseError("missing 'n <qubits>' header", 1, 1);
    }
    if (css && !general.empty()) {
        throw ParseError("css code files take only X: and Z: rows");
    }
    if (css) {
        PolyMatrix h1(xrows.size(), n), h2(zrows.size(), n);
        for (size_t r = 0; r < xrows.size(); r++) {
            for (size_t c = 0; c < n; c++) {
                h1(r, c) = xrows[r][c];
            }
        }
        for (size_t r = 0; r < zrows.size(); r++) {
            for (size_t c = 0; c < n; c++) {
                h2(r, c) = zrows[r][c];
            }
        }
        return StabilizerMatrix::from_css(h1, h2);
    }
    PolyMatrix rows(order.size(), 2 * n);
    size_t xi = 0, zi = 0, gi = 0;
    for (size_t r = 0; r < order.size(); r++) {
        for (size_t c = 0; c < n; c++) {
            if (order[r] == 0) {
                rows(r, n + c) = xrows[xi][c];
            } else if (order[r] == 1) {
                rows(r, c) = zrows[zi][c];
            } else {
                rows(r, c) = general[gi][c];
                rows(r, n + c) = general[gi][n + c];
            }
        }
        xi += order[r] == 0;
        zi += order[r] == 1;
        gi += order[r] == 2;
    }
    return StabilizerMatrix(n, rows);
}

inline std::string format_stabilizer(const StabilizerMatrix &s) {
    std::string out = "n " + std::to_string(s.n) + "\n";
    if (s.css) {
        out += "css\n";
        for (size_t r = 0; r < s.css->h1.rows(); r++) {
            out += "X:";
            for (size_t c = 0; c < s.n; c++) {
                out += " " + s.css->h1(r, c).str();
            }
            out += "\n";
        }
        for (size_t r = 0; r < s.css->h2.rows(); r++) {
            out += "Z:";
            for (size_t c = 0; c < s.n; c++) {
                out += " " + s.css->h2(r, c).str();
            }
            out += "\n";
        }
        return out;
    }
    for (size_t r = 0; r < s.num_rows(); r++) {
        out += "row:";
        for (size_t c = 0; c < 2 * s.n; c++) {
            out += (c == s.n ? " | " : " ") + s.rows(r, c).str();
        }
        out += "\n";
    }
    return out;
}

/// Expected-matrix text format:
///   matrix 2
///   latency 1      (optional, used only for strict delay comparison)
///   then 2n rows of "<n Z entries> | <n X entries>", entries "p" or "p/(q)".
struct MatrixFile {
    RationalSympMatrix matrix;
    std::optional<int> latency;
};

inline MatrixFile parse_matrix_file(std::string_view content) {
    MatrixFile out;
    size_t n = 0;
    bool have_n = false;
    size_t row = 0;
    int line_no = 0;
    for (std::string_view raw : text::lines_of(content)) {
        line_no++;
        std::string_view line = text::strip_line(raw);
        auto toks = text::split_tokens(line);
        if (toks.empty()) {
            continue;
        }
        try {
            if (toks[0].value == "matrix") {
                if (have_n || toks.size() != 2) {
                    throw ParseError("expected a single 'matrix <n>' header", 0, toks[0].column);
                }
                int64_t v = text::parse_int(toks[1].value, toks[1].column);
                if (v < 1 || v > 4096) {
                    throw ParseError("n out of range", 0, toks[1].column);
                }
                n = (size_t)v;
                have_n = true;
                out.matrix = RationalSympMatrix(n);
                continue;
            }
            if (!have_n) {
                throw ParseError("missing 'matrix <n>' header", 0, toks[0].column);
            }
            if (toks[0].value == "latency") {
                if (toks.size() != 2 || out.latency || row) {
                    throw ParseError("'latency <L>' must appear once, before the rows", 0, toks[0].column);
                }
                out.latency = (int)text::parse_int(toks[1].value, toks[1].column);
                continue;
            }
            if (row >= 2 * n) {
                throw ParseError("too many rows", 0, toks[0].column);
            }
            if (toks.size() != 2 * n + 1 || toks[n].value != "|") {
                throw ParseError("row must be '<n entries> | <n entries>'", 0, toks[0].column);
            }
            size_t col = 0;
            for (size_t k = 0; k < toks.size(); k++) {
                if (k == n) {
                    continue;
                }
                try {
                    out.matrix(row, col++) = RationalTransfer::parse(toks[k].value);
                } catch (const ParseError &e) {
                    throw e.at(0, toks[k].column - 1);
                }
            }
            row++;
        } catch (const ParseError &e) {
            throw e.at(line_no, 0);
        }
    }
    if (!have_n) {
        throw ParseError("missing 'matrix <n>' header", 1, 1);
    }
    if (row != 2 * n) {
        throw ParseError("expected " + std::to_string(2 * n) + " rows, got " + std::to_string(row), line_no, 1);
    }
    return out;
}

template <typename T>
std::string format_matrix_file(const SympMatrixT<T> &m, std::optional<int> latency = std::nullopt) {
    size_t n = m.num_qubits();
    std::string out = "matrix " + std::to_string(n) + "\n";
    if (latency) {
        out += "latency " + std::to_string(*latency) + "\n";
    }
    for (size_t r = 0; r < 2 * n; r++) {
        for (size_t c = 0; c < 2 * n; c++) {
            if (c == n) {
                out += " |";
            }
            out += (c ? " " : "") + m(r, c).str();
        }
        out += "\n";
    }
    return out;
}

/// Label of generator/column k in a 2n layout, 1-based: "Z2", "X1".
inline std::string generator_label(size_t k, size_t n) {
    return (k < n ? "Z" : "X") + std::to_string((k % n) + 1);
}

}  // namespace qsr

#endif
