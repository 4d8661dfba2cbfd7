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

#ifndef QSR_MATRIX_HPP
#define QSR_MATRIX_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsr/gf2poly.hpp"

namespace qsr {

/// Dense matrix over a GF(2)-algebra (LaurentPoly or RationalTransfer).
template <typename T>
class Matrix {
  public:
    Matrix() = default;
    Matrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {
    }

    static Matrix identity(size_t n) {
        Matrix m(n, n);
        for (size_t k = 0; k < n; k++) {
            m(k, k) = T::one();
        }
        return m;
    }

    size_t rows() const {
        return rows_;
    }
    size_t cols() const {
        return cols_;
    }

    T &operator()(size_t r, size_t c) {
        return data_[r * cols_ + c];
    }
    const T &operator()(size_t r, size_t c) const {
        return data_[r * cols_ + c];
    }

    bool is_zero() const {
        for (const T &e : data_) {
            if (!e.is_zero()) {
                return false;
            }
        }
        return true;
    }

    Matrix operator*(const Matrix &b) const {
        if (cols_ != b.rows_) {
            throw std::invalid_argument(
                "dimension mismatch: " + std::to_string(rows_) + "x" + std::to_string(cols_) + " times " +
                std::to_string(b.rows_) + "x" + std::to_string(b.cols_));
        }
        Matrix out(rows_, b.cols_);
        for (size_t r = 0; r < rows_; r++) {
            for (size_t k = 0; k < cols_; k++) {
                const T &a = (*this)(r, k);
                if (a.is_zero()) {
                    continue;
                }
                for (size_t c = 0; c < b.cols_; c++) {
                    const T &e = b(k, c);
                    if (!e.is_zero()) {
                        out(r, c) += a * e;
                    }
                }
            }
        }
        return out;
    }

    Matrix operator+(const Matrix &b) const {
        if (rows_ != b.rows_ || cols_ != b.cols_) {
            throw std::invalid_argument("dimension mismatch in matrix sum");
        }
        Matrix out = *this;
        for (size_t k = 0; k < data_.size(); k++) {
            out.data_[k] += b.data_[k];
        }
        return out;
    }

    /// m^T(D^-1): transpose with D -> D^-1 applied entrywise.
    Matrix transpose_reciprocal() const {
        Matrix out(cols_, rows_);
        for (size_t r = 0; r < rows_; r++) {
            for (size_t c = 0; c < cols_; c++) {
                out(c, r) = (*this)(r, c).reciprocal();
            }
        }
        return out;
    }

    Matrix transpose() const {
        Matrix out(cols_, rows_);
        for (size_t r = 0; r < rows_; r++) {
            for (size_t c = 0; c < cols_; c++) {
                out(c, r) = (*this)(r, c);
            }
        }
        return out;
    }

    Matrix shifted(int c) const {
        Matrix out = *this;
        for (T &e : out.data_) {
            e = e.shifted(c);
        }
        return out;
    }

    Matrix submatrix(size_t r0, size_t c0, size_t nr, size_t nc) const {
        Matrix out(nr, nc);
        for (size_t r = 0; r < nr; r++) {
            for (size_t c = 0; c < nc; c++) {
                out(r, c) = (*this)(r0 + r, c0 + c);
            }
        }
        return out;
    }

    void swap_rows(size_t a, size_t b) {
        for (size_t c = 0; c < cols_; c++) {
            std::swap((*this)(a, c), (*this)(b, c));
        }
    }
    void swap_cols(size_t a, size_t b) {
        for (size_t r = 0; r < rows_; r++) {
            std::swap((*this)(r, a), (*this)(r, b));
        }
    }
    /// row[target] += f * row[source]
    void add_row_multiple(size_t target, size_t source, const T &f) {
        for (size_t c = 0; c < cols_; c++) {
            const T &e = (*this)(source, c);
            if (!e.is_zero()) {
                (*this)(target, c) += f * e;
            }
        }
    }
    /// col[target] += f * col[source]
    void add_col_multiple(size_t target, size_t source, const T &f) {
        for (size_t r = 0; r < rows_; r++) {
            const T &e = (*this)(r, source);
            if (!e.is_zero()) {
                (*this)(r, target) += e * f;
            }
        }
    }

    bool operator==(const Matrix &other) const = default;

    /// Rows of space separated entries.
    std::string str() const {
        std::string out;
        for (size_t r = 0; r < rows_; r++) {
            for (size_t c = 0; c < cols_; c++) {
                if (c) {
                    out += ' ';
                }
                out += (*this)(r, c).str();
            }
            out += '\n';
        }
        return out;
    }

  private:
    size_t rows_ = 0;
    size_t cols_ = 0;
    std::vector<T> data_;
};

using PolyMatrix = Matrix<LaurentPoly>;
using RationalMatrix = Matrix<RationalTransfer>;

inline RationalMatrix to_rational(const PolyMatrix &m) {
    RationalMatrix out(m.rows(), m.cols());
    for (size_t r = 0; r < m.rows(); r++) {
        for (size_t c = 0; c < m.cols(); c++) {
            out(r, c) = RationalTransfer(m(r, c));
        }
    }
    return out;
}

/// Converts back when every denominator is 1; throws otherwise.
inline PolyMatrix to_polynomial(const RationalMatrix &m) {
    PolyMatrix out(m.rows(), m.cols());
    for (size_t r = 0; r < m.rows(); r++) {
        for (size_t c = 0; c < m.cols(); c++) {
            if (!m(r, c).is_polynomial()) {
                throw std::domain_error("matrix has rational entries");
            }
            out(r, c) = m(r, c).num();
        }
    }
    return out;
}

inline bool is_polynomial(const RationalMatrix &m) {
    for (size_t r = 0; r < m.rows(); r++) {
        for (size_t c = 0; c < m.cols(); c++) {
            if (!m(r, c).is_polynomial()) {
                return false;
            }
        }
    }
    return true;
}

/// Rank over the field GF(2)(D) by fraction-free elimination.
inline size_t rank(PolyMatrix m) {
    size_t rank = 0;
    for (size_t c = 0; c < m.cols() && rank < m.rows(); c++) {
        size_t pivot = m.rows();
        for (size_t r = rank; r < m.rows(); r++) {
            if (!m(r, c).is_zero() && (pivot == m.rows() || m(r, c).weight() < m(pivot, c).weight())) {
                pivot = r;
            }
        }
        if (pivot == m.rows()) {
            continue;
        }
        m.swap_rows(rank, pivot);
        LaurentPoly p = m(rank, c);
        for (size_t r = rank + 1; r < m.rows(); r++) {
            LaurentPoly a = m(r, c);
            if (a.is_zero()) {
                continue;
            }
            for (size_t k = 0; k < m.cols(); k++) {
                m(r, k) = m(r, k) * p + m(rank, k) * a;
            }
        }
        rank++;
    }
    return rank;
}

}  // namespace qsr

#endif
