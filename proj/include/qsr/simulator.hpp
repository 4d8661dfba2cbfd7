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

#ifndef QSR_SIMULATOR_HPP
#define QSR_SIMULATOR_HPP

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qsr/circuit.hpp"
#include "qsr/gf2poly.hpp"
#include "qsr/symplectic.hpp"
#include "qsr/text.hpp"

namespace qsr {

struct PauliBits {
    uint8_t z = 0;
    uint8_t x = 0;
    bool is_identity() const {
        return !z && !x;
    }
    bool operator==(const PauliBits &other) const = default;
};

using Frame = std::vector<PauliBits>;

/// Per-wire Pauli sequences in the D domain: bit z_i[t] is the coefficient of D^t in z[i].
struct PauliStream {
    std::vector<LaurentPoly> z;
    std::vector<LaurentPoly> x;

    PauliStream() = default;
    explicit PauliStream(size_t n) : z(n), x(n) {
    }

    size_t width() const {
        return z.size();
    }
    /// Largest clock carrying a non-identity bit, or -1 when empty.
    int last_clock() const {
        int t = -1;
        for (size_t w = 0; w < z.size(); w++) {
            if (!z[w].is_zero()) t = std::max(t, z[w].deg());
            if (!x[w].is_zero()) t = std::max(t, x[w].deg());
        }
        return t;
    }
    Frame frame(int t) const {
        Frame f(width());
        for (size_t w = 0; w < width(); w++) {
            f[w].z = z[w].coeff(t);
            f[w].x = x[w].coeff(t);
        }
        return f;
    }
    bool operator==(const PauliStream &other) const = default;
};

/// Bits held by every register slot. slots[w][s] is wire w at stage s; stage 0 is
/// overwritten by the incoming frame at the start of each clock.
struct SimState {
    int64_t clock = 0;
    std::vector<std::vector<PauliBits>> slots;

    bool memory_is_zero() const {
        for (const auto &wire : slots) {
            for (size_t s = 1; s < wire.size(); s++) {
                if (!wire[s].is_identity()) {
                    return false;
                }
            }
        }
        return true;
    }
};

inline SimState reset_state(const ShiftRegisterCircuit &c) {
    SimState st;
    for (size_t w = 0; w < c.n; w++) {
        st.slots.emplace_back(c.depths[w] + 1);
    }
    return st;
}

inline void apply_placement(const Placement &p, std::vector<std::vector<PauliBits>> &slots) {
    PauliBits &qa = slots[p.a.wire][p.a.stage];
    switch (p.kind) {
        case PrimKind::CNOT: {
            PauliBits &qb = slots[p.b.wire][p.b.stage];
            qb.x ^= qa.x;
            qa.z ^= qb.z;
            break;
        }
        case PrimKind::CZ: {
            PauliBits &qb = slots[p.b.wire][p.b.stage];
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
}

/// One clock: load the frame, apply placements in order, emit each wire's deepest
/// stage, then advance every wire by one stage.
inline Frame step(const ShiftRegisterCircuit &c, SimState &st, const Frame &frame_in) {
    if (frame_in.size() != c.n) {
        throw std::invalid_argument(
            "frame width " + std::to_string(frame_in.size()) + " does not match n=" + std::to_string(c.n));
    }
    if (st.slots.size() != c.n) {
        throw std::invalid_argument("state does not belong to this circuit");
    }
    for (size_t w = 0; w < c.n; w++) {
        st.slots[w][0] = frame_in[w];
    }
    for (const auto &p : c.placements) {
        apply_placement(p, st.slots);
    }
    Frame out(c.n);
    for (size_t w = 0; w < c.n; w++) {
        auto &wire = st.slots[w];
        out[w] = wire.back();
        for (size_t s = wire.size() - 1; s > 0; s--) {
            wire[s] = wire[s - 1];
        }
        wire[0] = PauliBits{};
    }
    st.clock++;
    return out;
}

/// Outputs for clocks 0..horizon from the reset state.
inline PauliStream run(const ShiftRegisterCircuit &c, const PauliStream &in, int horizon, SimState *final_state = nullptr) {
    if (in.width() != c.n) {
        throw std::invalid_argument("stream width does not match the circuit");
    }
    for (size_t w = 0; w < c.n; w++) {
        if ((!in.z[w].is_zero() && in.z[w].del() < 0) || (!in.x[w].is_zero() && in.x[w].del() < 0)) {
            throw std::invalid_argument("streams start at clock 0");
        }
    }
    SimState st = reset_state(c);
    std::vector<std::vector<int>> oz(c.n), ox(c.n);
    for (int t = 0; t <= horizon; t++) {
        Frame out = step(c, st, in.frame(t));
        for (size_t w = 0; w < c.n; w++) {
            if (out[w].z) oz[w].push_back(t);
            if (out[w].x) ox[w].push_back(t);
        }
    }
    PauliStream result(c.n);
    for (size_t w = 0; w < c.n; w++) {
        result.z[w] = LaurentPoly(std::move(oz[w]));
        result.x[w] = LaurentPoly(std::move(ox[w]));
    }
    if (final_state) {
        *final_state = std::move(st);
    }
    return result;
}

class HorizonInsufficient : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {
inline SympMatrix impulse_raw(const ShiftRegisterCircuit &c, int horizon, bool require_complete) {
    size_t n = c.n;
    SympMatrix raw(n);
    for (size_t k = 0; k < 2 * n; k++) {
        PauliStream in(n);
        (k < n ? in.z[k] : in.x[k - n]) = LaurentPoly::one();
        SimState st;
        PauliStream out = run(c, in, horizon, &st);
        if (require_complete && !st.memory_is_zero()) {
            throw HorizonInsufficient(
                "horizon insufficient: memory still active after clock " + std::to_string(horizon) + " for a " +
                generator_label(k, n) + " impulse");
        }
        for (size_t w = 0; w < n; w++) {
            raw(k, w) = out.z[w];
            raw(k, n + w) = out.x[w];
        }
    }
    return raw;
}
}  // namespace detail

/// Measured transfer of a finite-depth circuit: one Z and one X impulse per wire at
/// clock 0. The raw response is divided by D^latency of the circuit.
inline Transfer impulse_response(const ShiftRegisterCircuit &c, int horizon) {
    c.validate();
    Transfer out;
    out.latency = c.latency();
    out.matrix = SympMatrix(detail::impulse_raw(c, horizon, true).shifted(-out.latency));
    return out;
}

/// Raw impulse responses truncated at `horizon` (clock-domain exponents). No
/// completeness check; suited to infinite-depth circuits.
inline SympMatrix impulse_response_truncated(const ShiftRegisterCircuit &c, int horizon) {
    c.validate();
    return detail::impulse_raw(c, horizon, false);
}

/// Default horizon: 4 (M + max tap) + 8.
inline int default_horizon(const ShiftRegisterCircuit &c) {
    return 4 * (c.frames() + c.max_tap()) + 8;
}

/// Stream text: one line per frame, "n=<t> z=<bits> x=<bits>", bits listed wire 1 first.
inline PauliStream parse_stream(std::string_view content, size_t n) {
    PauliStream s(n);
    std::vector<std::vector<int>> zs(n), xs(n);
    std::vector<int> seen;
    int line_no = 0;
    for (std::string_view raw : text::lines_of(content)) {
        line_no++;
        std::string_view line = text::strip_line(raw);
        auto toks = text::split_tokens(line);
        if (toks.empty()) {
            continue;
        }
        try {
            if (toks.size() != 3) {
                throw ParseError("expected 'n=<t> z=<bits> x=<bits>'", 0, toks[0].column);
            }
            auto expect = [&](const text::Token &t, std::string_view key) {
                if (t.value.substr(0, key.size()) != key) {
                    throw ParseError("expected '" + std::string(key) + "'", 0, t.column);
                }
                return t.value.substr(key.size());
            };
            int64_t t = text::parse_int(expect(toks[0], "n="), toks[0].column + 2);
            if (t < 0 || t > 10000000) {
                throw ParseError("frame index out of range", 0, toks[0].column + 2);
            }
            if (std::find(seen.begin(), seen.end(), (int)t) != seen.end()) {
                throw ParseError("duplicate frame " + std::to_string(t), 0, toks[0].column);
            }
            seen.push_back((int)t);
            for (int part = 0; part < 2; part++) {
                const auto &tok = toks[1 + part];
                auto bits = expect(tok, part ? "x=" : "z=");
                if (bits.size() != n) {
                    throw ParseError(
                        "expected " + std::to_string(n) + " bits, got " + std::to_string(bits.size()), 0,
                        tok.column + 2);
                }
                for (size_t w = 0; w < n; w++) {
                    if (bits[w] != '0' && bits[w] != '1') {
                        throw ParseError("bits must be 0 or 1", 0, tok.column + 2 + (int)w);
                    }
                    if (bits[w] == '1') {
                        (part ? xs : zs)[w].push_back((int)t);
                    }
                }
            }
        } catch (const ParseError &e) {
            throw e.at(line_no, 0);
        }
    }
    for (size_t w = 0; w < n; w++) {
        s.z[w] = LaurentPoly(std::move(zs[w]));
        s.x[w] = LaurentPoly(std::move(xs[w]));
    }
    return s;
}

/// Emits every non-identity frame in clock order.
inline std::string format_stream(const PauliStream &s) {
    std::string out;
    int last = s.last_clock();
    int first = last + 1;
    for (size_t w = 0; w < s.width(); w++) {
        if (!s.z[w].is_zero()) first = std::min(first, s.z[w].del());
        if (!s.x[w].is_zero()) first = std::min(first, s.x[w].del());
    }
    for (int t = first; t <= last; t++) {
        Frame f = s.frame(t);
        bool any = false;
        std::string zb, xb;
        for (const auto &q : f) {
            any |= !q.is_identity();
            zb += q.z ? '1' : '0';
            xb += q.x ? '1' : '0';
        }
        if (any) {
            out += "n=" + std::to_string(t) + " z=" + zb + " x=" + xb + "\n";
        }
    }
    return out;
}

/// Sum over wires and clocks of z_a x_b + x_a z_b, mod 2.
inline bool symplectic_product(const PauliStream &a, const PauliStream &b) {
    bool acc = false;
    for (size_t w = 0; w < a.width(); w++) {
        acc ^= (a.z[w] * b.x[w].reciprocal()).coeff(0);
        acc ^= (a.x[w] * b.z[w].reciprocal()).coeff(0);
    }
    return acc;
}

}  // namespace qsr

#endif
