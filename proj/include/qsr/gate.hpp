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

#ifndef QSR_GATE_HPP
#define QSR_GATE_HPP

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qsr/gf2poly.hpp"
#include "qsr/text.hpp"

namespace qsr {

enum class GateKind { CNOT, CPHASE, CPHASE1, H, P, DELAY, INF_Z, INF_X };

inline const char *gate_kind_name(GateKind k) {
    switch (k) {
        case GateKind::CNOT:
            return "CNOT";
        case GateKind::CPHASE:
            return "CPHASE";
        case GateKind::CPHASE1:
            return "CPHASE1";
        case GateKind::H:
            return "H";
        case GateKind::P:
            return "P";
        case GateKind::DELAY:
            return "DELAY";
        case GateKind::INF_Z:
            return "INFZ";
        case GateKind::INF_X:
            return "INFX";
    }
    return "?";
}

/// One shift-invariant operation. Wires are 0-based; `b` is -1 for one-wire gates.
struct Gate {
    GateKind kind = GateKind::H;
    int a = 0;
    int b = -1;
    LaurentPoly f;
    int shift = 0;

    static Gate cnot(int i, int j, LaurentPoly f) {
        return {GateKind::CNOT, i, j, std::move(f), 0};
    }
    static Gate cphase(int i, int j, LaurentPoly f) {
        return {GateKind::CPHASE, i, j, std::move(f), 0};
    }
    static Gate cphase1(int i, LaurentPoly f) {
        return {GateKind::CPHASE1, i, -1, std::move(f), 0};
    }
    static Gate h(int i) {
        return {GateKind::H, i, -1, {}, 0};
    }
    static Gate p(int i) {
        return {GateKind::P, i, -1, {}, 0};
    }
    static Gate delay(int i, int l) {
        return {GateKind::DELAY, i, -1, {}, l};
    }
    static Gate inf_z(int i, LaurentPoly f) {
        return {GateKind::INF_Z, i, -1, std::move(f), 0};
    }
    static Gate inf_x(int i, LaurentPoly f) {
        return {GateKind::INF_X, i, -1, std::move(f), 0};
    }

    bool two_wire() const {
        return kind == GateKind::CNOT || kind == GateKind::CPHASE;
    }
    bool infinite_depth() const {
        return kind == GateKind::INF_Z || kind == GateKind::INF_X;
    }

    /// Throws std::invalid_argument if the gate is malformed for an n-wire frame.
    void validate(size_t n) const {
        auto check_wire = [&](int w) {
            if (w < 0 || (size_t)w >= n) {
                throw std::invalid_argument(
                    std::string(gate_kind_name(kind)) + ": wire " + std::to_string(w + 1) + " out of range for n=" +
                    std::to_string(n));
            }
        };
        check_wire(a);
        if (two_wire()) {
            check_wire(b);
            if (a == b) {
                throw std::invalid_argument(std::string(gate_kind_name(kind)) + ": wires must differ");
            }
        } else if (b != -1) {
            throw std::invalid_argument(std::string(gate_kind_name(kind)) + " acts on one wire");
        }
        switch (kind) {
            case GateKind::CPHASE1:
                if (!f.is_zero() && f.del() < 1) {
                    throw std::invalid_argument("CPHASE1: f must have no terms at lag <= 0 (a lag-0 self-phase is a P gate)");
                }
                break;
            case GateKind::DELAY:
                if (shift < 0) {
                    throw std::invalid_argument("DELAY: negative delay");
                }
                break;
            case GateKind::INF_Z:
            case GateKind::INF_X:
                if (f.is_zero()) {
                    throw std::invalid_argument(std::string(gate_kind_name(kind)) + ": f must be monic (nonzero)");
                }
                if (f.del() < 0) {
                    throw std::invalid_argument(std::string(gate_kind_name(kind)) + ": f must not contain advances");
                }
                break;
            default:
                break;
        }
    }

    /// Text form with 1-based wires, e.g. "CNOT 3 2 D^-1+1".
    std::string str() const {
        std::string out = gate_kind_name(kind);
        out += ' ' + std::to_string(a + 1);
        if (two_wire()) {
            out += ' ' + std::to_string(b + 1);
        }
        switch (kind) {
            case GateKind::H:
            case GateKind::P:
                break;
            case GateKind::DELAY:
                out += ' ' + std::to_string(shift);
                break;
            default:
                out += ' ' + f.str();
        }
        return out;
    }

    bool operator==(const Gate &other) const = default;
};

using ElementaryOpSequence = std::vector<Gate>;

namespace detail {
inline GateKind parse_gate_kind(std::string_view s, int column) {
    if (s == "CNOT") return GateKind::CNOT;
    if (s == "CPHASE" || s == "C-PHASE") return GateKind::CPHASE;
    if (s == "CPHASE1") return GateKind::CPHASE1;
    if (s == "H") return GateKind::H;
    if (s == "P") return GateKind::P;
    if (s == "DELAY") return GateKind::DELAY;
    if (s == "INFZ") return GateKind::INF_Z;
    if (s == "INFX") return GateKind::INF_X;
    throw ParseError("unknown gate '" + std::string(s) + "'", 0, column);
}
}  // namespace detail

/// Parses one op per line ("CNOT 3 2 1+D^-1", "H 1", "DELAY 2 3", "INFZ 1 1+D").
/// Blank lines and '#' comments are skipped. The frame width is the largest wire used
/// unless a line "n <wires>" appears first.
struct ParsedSequence {
    size_t n = 0;
    ElementaryOpSequence ops;
};

inline ParsedSequence parse_gate_sequence(std::string_view content) {
    ParsedSequence out;
    bool explicit_n = false;
    int line_no = 0;
    for (std::string_view raw : text::lines_of(content)) {
        line_no++;
        std::string_view line = text::strip_line(raw);
        auto toks = text::split_tokens(line);
        if (toks.empty()) {
            continue;
        }
        try {
            if (toks[0].value == "n") {
                if (toks.size() != 2 || !out.ops.empty() || explicit_n) {
                    throw ParseError("'n <wires>' must appear once, before any gate", 0, toks[0].column);
                }
                int64_t v = text::parse_int(toks[1].value, toks[1].column);
                if (v < 1) {
                    throw ParseError("n must be positive", 0, toks[1].column);
                }
                out.n = (size_t)v;
                explicit_n = true;
                continue;
            }
            Gate g;
            g.kind = detail::parse_gate_kind(toks[0].value, toks[0].column);
            size_t wires = g.two_wire() ? 2 : 1;
            bool has_poly = g.kind != GateKind::H && g.kind != GateKind::P;
            size_t want = 1 + wires + (has_poly ? 1 : 0);
            if (toks.size() < want) {
                throw ParseError(
                    std::string("missing operands for ") + gate_kind_name(g.kind), 0, (int)line.size() + 1);
            }
            std::vector<int> ws;
            for (size_t k = 0; k < wires; k++) {
                int64_t w = text::parse_int(toks[1 + k].value, toks[1 + k].column);
                if (w < 1) {
                    throw ParseError("wire indices are 1-based", 0, toks[1 + k].column);
                }
                ws.push_back((int)w - 1);
            }
            g.a = ws[0];
            g.b = wires == 2 ? ws[1] : -1;
            if (g.kind == GateKind::DELAY) {
                if (toks.size() != want) {
                    throw ParseError("trailing tokens", 0, toks[want].column);
                }
                g.shift = (int)text::parse_int(toks[2].value, toks[2].column);
            } else if (has_poly) {
                // The polynomial may contain spaces around '+'; join the remaining tokens.
                size_t start = toks[1 + wires].column - 1;
                std::string_view poly = line.substr(start);
                try {
                    g.f = LaurentPoly::parse(poly);
                } catch (const ParseError &e) {
                    throw e.at(0, (int)start);
                }
            } else if (toks.size() != want) {
                throw ParseError("trailing tokens", 0, toks[want].column);
            }
            if (!explicit_n) {
                out.n = std::max(out.n, (size_t)std::max(g.a, g.b) + 1);
            }
            try {
                g.validate(out.n);
            } catch (const std::invalid_argument &e) {
                throw ParseError(e.what(), 0, toks[0].column);
            }
            out.ops.push_back(std::move(g));
        } catch (const ParseError &e) {
            throw e.at(line_no, 0);
        }
    }
    if (out.n == 0) {
        throw ParseError("sequence needs an 'n <wires>' header or at least one gate", std::max(line_no, 1), 1);
    }
    return out;
}

inline std::string format_gate_sequence(const ElementaryOpSequence &ops, size_t n) {
    std::string out = "n " + std::to_string(n) + "\n";
    for (const Gate &g : ops) {
        out += g.str() + "\n";
    }
    return out;
}

}  // namespace qsr

#endif
