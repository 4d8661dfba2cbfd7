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


#include "qsr/simulator.hpp"
#include "qsr/synthesis.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "gtest/gtest.h"

using namespace qsr;

namespace {

LaurentPoly P(const char *s) {
    return LaurentPoly::parse(s);
}

LaurentPoly bits(uint64_t b) {
    std::vector<int> e;
    for (int k = 0; k < 64; k++) {
        if (b >> k & 1) e.push_back(k);
    }
    return LaurentPoly(e);
}

PolyMatrix pm(size_t r, size_t c, std::vector<const char *> v) {
    PolyMatrix m(r, c);
    for (size_t k = 0; k < v.size(); k++) m(k / c, k % c) = P(v[k]);
    return m;
}

std::string read_data(const std::string &name) {
    std::ifstream in(std::string(QSR_DATA_DIR) + "/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

LaurentPoly det(const PolyMatrix &m) {
    size_t n = m.rows();
    if (n == 0) return LaurentPoly::one();
    LaurentPoly acc;
    for (size_t c = 0; c < n; c++) {
        if (m(0, c).is_zero()) continue;
        PolyMatrix minor(n - 1, n - 1);
        for (size_t r = 1; r < n; r++) {
            for (size_t k = 0, kk = 0; k < n; k++) {
                if (k != c) minor(r - 1, kk++) = m(r, k);
            }
        }
        acc = acc + m(0, c) * det(minor);
    }
    return acc;
}

void expect_smith(const PolyMatrix &m, const SmithDecomposition &d, bool laurent) {
    ASSERT_EQ(d.a * d.s * d.b, m);
    for (size_t r = 0; r < d.s.rows(); r++) {
        for (size_t c = 0; c < d.s.cols(); c++) {
            if (r != c) {
                ASSERT_TRUE(d.s(r, c).is_zero());
            }
        }
    }
    auto inv = d.invariant_factors();
    for (size_t k = 0; k + 1 < inv.size(); k++) {
        auto q = laurent ? LaurentRing::divmod(inv[k + 1], inv[k]) : poly_divmod(inv[k + 1], inv[k]);
        ASSERT_TRUE(q.second.is_zero());
    }
    auto da = det(d.a), db = det(d.b);
    if (laurent) {
        ASSERT_EQ(da.weight(), 1u);
        ASSERT_EQ(db.weight(), 1u);
    } else {
        ASSERT_EQ(da, LaurentPoly::one());
        ASSERT_EQ(db, LaurentPoly::one());
    }
}

StabilizerMatrix css_example() {
    return StabilizerMatrix::from_css(pm(1, 3, {"1", "D", "1+D"}), pm(1, 3, {"D", "1", "1+D"}));
}

// Codes reached from the unencoded stabilizer by random CNOTs with taps in D^0..D^4.
struct RandomCode {
    size_t n;
    PolyMatrix h1, h2;
};

std::vector<RandomCode> random_codes() {
    std::mt19937 rng(7);
    std::vector<RandomCode> out;
    for (int it = 0; it < 300; it++) {
        size_t n = 2 + rng() % 3;
        size_t sx = rng() % n;
        size_t sz = rng() % (n - sx + 1);
        if (sx + sz == 0) sx = 1;
        int p = 1 + rng() % 6;
        ElementaryOpSequence ops;
        for (int k = 0; k < p; k++) {
            int i = rng() % n, j = rng() % (n - 1);
            if (j >= i) j++;
            ops.push_back(Gate::cnot(i, j, LaurentPoly::monomial((int)(rng() % 5))));
        }
        auto code = apply_to_stabilizer(unencoded_stabilizer(n, sx, sz), sequence_matrix(ops, n));
        RandomCode rc{n, PolyMatrix(sx, n), PolyMatrix(sz, n)};
        for (size_t r = 0; r < sx; r++)
            for (size_t c = 0; c < n; c++) rc.h1(r, c) = code.rows(r, n + c);
        for (size_t r = 0; r < sz; r++)
            for (size_t c = 0; c < n; c++) rc.h2(r, c) = code.rows(sx + r, c);
        out.push_back(rc);
    }
    return out;
}

}  // namespace

TEST(smith, row_vector) {
    auto m = pm(1, 3, {"1", "D", "1+D"});
    auto d = smith_normal_form(m);
    ASSERT_EQ(d.a, pm(1, 1, {"1"}));
    ASSERT_EQ(d.s, pm(1, 3, {"1", "0", "0"}));
    expect_smith(m, d, false);
}

TEST(smith, small_cases) {
    auto id = PolyMatrix::identity(3);
    auto d = smith_normal_form(id);
    ASSERT_EQ(d.s, id);
    ASSERT_TRUE(d.row_ops.empty() && d.col_ops.empty());
    auto one = smith_normal_form(pm(1, 1, {"D"}));
    ASSERT_EQ(one.s, pm(1, 1, {"D"}));
    auto z = smith_normal_form(PolyMatrix(2, 3));
    ASSERT_TRUE(z.invariant_factors().empty());
    ASSERT_THROW(smith_normal_form(pm(1, 1, {"D^-1"})), std::domain_error);
    auto two = smith_normal_form(pm(2, 2, {"1+D", "0", "0", "D"}));
    ASSERT_EQ(two.s, pm(2, 2, {"1", "0", "0", "D+D^2"}));
}

TEST(smith, random_round_trips) {
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 300; trial++) {
        size_t r = 1 + rng() % 4, c = 1 + rng() % 6;
        PolyMatrix m(r, c);
        for (size_t i = 0; i < r; i++) {
            for (size_t j = 0; j < c; j++) {
                if (rng() % 4) m(i, j) = bits(rng() % 16);
            }
        }
        auto d = smith_normal_form(m);
        expect_smith(m, d, false);
        if (HasFailure()) return;
        ASSERT_EQ(d.invariant_factors().size(), rank(m));
    }
}

TEST(smith, laurent_round_trips) {
    std::mt19937_64 rng(52);
    auto d0 = smith_normal_form_laurent(pm(1, 2, {"D^-1", "D+D^2"}));
    ASSERT_EQ(d0.invariant_factors()[0].weight(), 1u);
    for (int trial = 0; trial < 200; trial++) {
        size_t r = 1 + rng() % 3, c = 1 + rng() % 4;
        PolyMatrix m(r, c);
        for (size_t i = 0; i < r; i++) {
            for (size_t j = 0; j < c; j++) {
                if (rng() % 4) m(i, j) = bits(rng() % 16).shifted((int)(rng() % 5) - 2);
            }
        }
        expect_smith(m, smith_normal_form_laurent(m), true);
        if (HasFailure()) return;
    }
}

TEST(unencoded, layout) {
    auto s = unencoded_stabilizer(3, 1, 1);
    ASSERT_EQ(s.rows, pm(2, 6, {"0", "0", "0", "1", "0", "0", "0", "1", "0", "0", "0", "0"}));
    ASSERT_EQ(unencoded_stabilizer(3, 0, 2).num_rows(), 2u);
    ASSERT_THROW(unencoded_stabilizer(2, 2, 1), std::invalid_argument);
}

TEST(css_encoder, worked_example) {
    auto plan = css_encoder(css_example());
    ASSERT_EQ(plan.s_x, 1u);
    ASSERT_EQ(plan.s_z, 1u);
    ASSERT_TRUE(row_space_equiv(encoded_stabilizer(plan), css_example()));
    ASSERT_EQ(plan.b_overall, sequence_matrix(plan.ops, 3));
    ASSERT_EQ(memory_bound_css(plan), 1);
    ASSERT_EQ(compile_sequence(plan.ops, 3).frames(), 1);
}

TEST(css_encoder, trivial_code) {
    auto plan = css_encoder(pm(1, 2, {"1", "0"}), pm(1, 2, {"0", "1"}));
    ASSERT_TRUE(plan.ops.empty());
    ASSERT_EQ(plan.b_overall, SympMatrix::identity(2));
    ASSERT_EQ(memory_bound_css(plan), 0);
}

TEST(css_encoder, rejects_bad_codes) {
    ASSERT_THROW(css_encoder(pm(1, 1, {"1"}), pm(1, 1, {"1"})), NotDualContaining);
    ASSERT_THROW(css_encoder(pm(1, 2, {"1+D", "1+D"}), PolyMatrix(0, 2)), CatastrophicCheckMatrix);
    ASSERT_THROW(css_encoder(pm(2, 2, {"1", "D", "1", "D"}), PolyMatrix(0, 2)), CatastrophicCheckMatrix);
    auto general = parse_stabilizer(read_data("fgg.code"));
    ASSERT_THROW(css_encoder(general), std::invalid_argument);
}

TEST(css_encoder, random_codes_are_reproduced) {
    for (const auto &rc : random_codes()) {
        auto plan = css_encoder(rc.h1, rc.h2);
        auto target = StabilizerMatrix::from_css(rc.h1, rc.h2);
        ASSERT_TRUE(row_space_equiv(encoded_stabilizer(plan), target));
        auto c = compile_sequence(plan.ops, rc.n);
        ASSERT_TRUE(row_space_equiv(
            apply_to_stabilizer(unencoded_stabilizer(rc.n, plan.s_x, plan.s_z),
                                impulse_response(c, default_horizon(c)).matrix),
            target));
    }
}

TEST(css_encoder, random_codes_meet_memory_bound) {
    int over = 0;
    for (const auto &rc : random_codes()) {
        auto plan = css_encoder(rc.h1, rc.h2);
        int m = compile_sequence(plan.ops, rc.n).frames();
        EXPECT_LE(m, memory_bound_css(plan)) << format_gate_sequence(plan.ops, rc.n);
        over += m > memory_bound_css(plan);
    }
    EXPECT_EQ(over, 0);
}

TEST(reduce_memory, chain) {
    auto c = cascade_sequence({Gate::cnot(0, 1, P("1")), Gate::cnot(0, 1, P("D")), Gate::cnot(0, 1, P("D^2"))}, 2);
    ASSERT_EQ(c.frames(), 3);
    auto r = reduce_memory(c);
    ASSERT_EQ(r.frames(), 2);
    ASSERT_EQ(circuit_transfer(r).matrix, circuit_transfer(c).matrix);
    ASSERT_EQ(reduce_memory(r), r);
}

TEST(reduce_memory, fixed_points) {
    ShiftRegisterCircuit empty(2);
    ASSERT_EQ(reduce_memory(empty), empty);
    auto one = build_cnot_circuit(0, 1, P("D"), 2);
    ASSERT_EQ(reduce_memory(one).frames(), 1);
    auto fb = build_inf_z_circuit(0, P("1+D+D^3"), 1);
    ASSERT_EQ(reduce_memory(fb), fb);
}

TEST(reduce_memory, preserves_transfer) {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 150; trial++) {
        size_t n = 2 + rng() % 3;
        ElementaryOpSequence ops;
        for (int k = 0; k < 5; k++) {
            int i = rng() % n, j = rng() % (n - 1);
            if (j >= i) j++;
            auto f = bits(1 + rng() % 15).shifted((int)(rng() % 5) - 2);
            switch (rng() % 4) {
                case 0:
                    ops.push_back(Gate::cphase(i, j, f));
                    break;
                case 1:
                    ops.push_back(Gate::h(i));
                    break;
                default:
                    ops.push_back(Gate::cnot(i, j, f));
            }
        }
        auto c = cascade_sequence(ops, n);
        auto r = reduce_memory(c);
        ASSERT_LE(r.frames(), c.frames());
        ASSERT_EQ(circuit_transfer(r).matrix, sequence_matrix(ops, n));
        ASSERT_EQ(impulse_response(r, default_horizon(r)).matrix, sequence_matrix(ops, n));
    }
}

TEST(compile_sequence, known_memory) {
    auto css = parse_gate_sequence(read_data("css_example.seq"));
    ASSERT_EQ(compile_sequence(css.ops, css.n).frames(), 1);
    auto fgg = parse_gate_sequence(read_data("fgg.seq"));
    ASSERT_EQ(compile_sequence(fgg.ops, fgg.n).frames(), 5);
    for (int l = -4; l <= 4; l++) {
        ASSERT_EQ(compile_sequence({Gate::cnot(0, 1, LaurentPoly::monomial(l))}, 2).frames(), std::abs(l));
    }
}

TEST(constraint_lengths, examples) {
    auto fgg = constraint_lengths(parse_stabilizer(read_data("fgg.code")));
    ASSERT_EQ(fgg.nu, (std::vector<int>{1, 1}));
    ASSERT_EQ(fgg.total, 2);
    ASSERT_EQ(fgg.memory, 1);
    auto css = constraint_lengths(css_example());
    ASSERT_EQ(css.nu, (std::vector<int>{1, 1}));
    auto zero = constraint_lengths(unencoded_stabilizer(3, 1, 1));
    ASSERT_EQ(zero.total, 0);
    ASSERT_EQ(zero.memory, 0);
}

TEST(memory_bound, type_ii) {
    ASSERT_EQ(typeII_memory_bound({P("1"), P("D")}, PolyMatrix::identity(2), PolyMatrix::identity(2)), 1);
    ASSERT_EQ(typeII_memory_bound({P("1+D^2")}, pm(1, 1, {"D^-1"}), pm(1, 1, {"1+D"})), 4);
    ASSERT_EQ(typeII_memory_bound({}, PolyMatrix::identity(1), PolyMatrix::identity(1)), 0);
}
