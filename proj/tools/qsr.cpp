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


// qsr: synthesize, simulate, reduce and check quantum shift register circuits.
//
// Exit status: 0 all checks pass, 1 a check failed, 2 bad input.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qsr/simulator.hpp"
#include "qsr/synthesis.hpp"

using namespace qsr;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;

/// Thrown for anything that is the caller's fault: unreadable files, bad syntax,
/// codes the encoder cannot handle.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string format = "text";
    std::string output;
    std::optional<int> horizon;
    bool strict_delay = false;
};

struct Report {
    std::string command;
    std::vector<std::pair<std::string, std::string>> inputs;  // path, digest
    json outputs = json::object();
    std::vector<std::string> text_outputs;
    std::vector<std::pair<std::string, bool>> verdicts;

    void add_verdict(std::string check, bool pass) {
        verdicts.emplace_back(std::move(check), pass);
    }
    bool all_pass() const {
        for (const auto &v : verdicts) {
            if (!v.second) return false;
        }
        return true;
    }
};

std::string hex64(uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)v);
    return buf;
}

std::string read_input(const std::string &path, Report &report) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError(path + ": cannot open file");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    std::string data = ss.str();
    report.inputs.emplace_back(path, hex64(text::fnv1a(data)));
    return data;
}

/// Runs `fn` and prefixes parse errors with the file name.
template <typename F>
auto parse_file(const std::string &path, const std::string &content, F fn) {
    try {
        return fn(content);
    } catch (const ParseError &e) {
        throw InputError(path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " + e.bare_message());
    } catch (const std::invalid_argument &e) {
        throw InputError(path + ": " + e.what());
    }
}

void write_output(const Options &opt, const std::string &data) {
    if (opt.output.empty()) {
        return;
    }
    std::ofstream out(opt.output, std::ios::binary);
    if (!out) {
        throw InputError(opt.output + ": cannot write file");
    }
    out << data;
}

void print_report(const Report &r, const Options &opt) {
    if (opt.format == "json") {
        json j;
        j["command"] = r.command;
        j["inputs"] = json::array();
        for (const auto &[path, digest] : r.inputs) {
            j["inputs"].push_back({{"path", path}, {"fnv1a", digest}});
        }
        j["outputs"] = r.outputs;
        j["verdicts"] = json::array();
        for (const auto &[check, pass] : r.verdicts) {
            j["verdicts"].push_back({{"check", check}, {"pass", pass}});
        }
        j["pass"] = r.all_pass();
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::cout << "command: " << r.command << "\n";
    for (const auto &[path, digest] : r.inputs) {
        std::cout << "input: " << path << " fnv1a=" << digest << "\n";
    }
    for (const auto &[key, value] : r.outputs.items()) {
        if (value.is_string() && value.get<std::string>().find('\n') != std::string::npos) {
            continue;
        }
        std::cout << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
    }
    for (const auto &t : r.text_outputs) {
        std::cout << t;
        if (!t.empty() && t.back() != '\n') std::cout << "\n";
    }
    for (const auto &[check, pass] : r.verdicts) {
        std::cout << (pass ? "PASS " : "FAIL ") << check << "\n";
    }
}

std::string join_ints(const std::vector<int> &v) {
    std::string s;
    for (size_t k = 0; k < v.size(); k++) {
        s += (k ? " " : "") + std::to_string(v[k]);
    }
    return s;
}

bool looks_like_code(std::string_view content) {
    for (std::string_view raw : text::lines_of(content)) {
        auto toks = text::split_tokens(text::strip_line(raw));
        if (toks.empty()) continue;
        auto t = toks[0].value;
        if (t == "css" || t == "X:" || t == "Z:" || t == "row:") return true;
    }
    return false;
}

StabilizerMatrix load_code(const std::string &path, Report &report) {
    auto content = read_input(path, report);
    return parse_file(path, content, [](std::string_view c) { return parse_stabilizer(c); });
}

ShiftRegisterCircuit load_circuit(const std::string &path, Report &report) {
    auto content = read_input(path, report);
    return parse_file(path, content, [](std::string_view c) { return parse_circuit(c); });
}

EncoderPlan plan_for(const std::string &path, const StabilizerMatrix &code) {
    if (!code.css) {
        throw InputError(path + ": code is not marked 'css'; only CSS codes can be synthesized");
    }
    try {
        return css_encoder(code);
    } catch (const NotDualContaining &e) {
        throw InputError(path + ": rejected: " + e.what());
    } catch (const CatastrophicCheckMatrix &e) {
        throw InputError(path + ": rejected: " + e.what());
    }
}

// ---------------------------------------------------------------------------

Report cmd_synth(const std::string &code_path, const Options &opt) {
    Report r;
    r.command = "synth " + code_path;
    auto code = load_code(code_path, r);
    auto plan = plan_for(code_path, code);
    auto circuit = compile_sequence(plan.ops, plan.n);
    auto circuit_text = format_circuit(circuit);
    write_output(opt, circuit_text);

    r.outputs["memory"] = circuit.frames();
    r.outputs["memory_bound"] = plan.memory_bound;
    r.outputs["gates"] = plan.ops.size();
    r.outputs["sequence"] = format_gate_sequence(plan.ops, plan.n);
    r.outputs["circuit"] = circuit_text;
    r.text_outputs.push_back("sequence:\n" + format_gate_sequence(plan.ops, plan.n));
    if (opt.output.empty()) {
        r.text_outputs.push_back("circuit:\n" + circuit_text);
    }
    r.add_verdict("encoded stabilizer row-space equivalent to input code",
                  row_space_equiv(encoded_stabilizer(plan), StabilizerMatrix::from_css(code.css->h1, code.css->h2)));
    auto replay = impulse_response(circuit, default_horizon(circuit));
    r.add_verdict("circuit impulse response equals encoding matrix", replay.matrix == plan.b_overall);
    r.add_verdict("memory M <= absolute degree of encoding matrix", circuit.frames() <= plan.memory_bound);
    return r;
}

/// Smallest exponent over all nonzero entries, or nullopt for a zero matrix.
std::optional<int> min_exponent(const PolyMatrix &m) {
    std::optional<int> lo;
    for (size_t r = 0; r < m.rows(); r++) {
        for (size_t c = 0; c < m.cols(); c++) {
            if (!m(r, c).is_zero()) {
                lo = lo ? std::min(*lo, m(r, c).del()) : m(r, c).del();
            }
        }
    }
    return lo;
}

Report cmd_verify(const std::string &circuit_path, const std::string &matrix_path, const Options &opt) {
    Report r;
    r.command = "verify " + circuit_path + " " + matrix_path;
    auto circuit = load_circuit(circuit_path, r);
    auto content = read_input(matrix_path, r);
    auto expected = parse_file(matrix_path, content, [](std::string_view c) { return parse_matrix_file(c); });
    size_t n = circuit.n;
    if (expected.matrix.num_qubits() != n) {
        throw InputError(matrix_path + ": matrix is for n=" + std::to_string(expected.matrix.num_qubits()) +
                         " but the circuit has n=" + std::to_string(n));
    }
    bool infinite = has_infinite_depth(circuit) || !is_polynomial(expected.matrix);
    int horizon = opt.horizon.value_or(infinite ? 64 : default_horizon(circuit));
    if (horizon < 0) {
        throw InputError("--horizon must be non-negative");
    }
    r.outputs["horizon"] = horizon;
    r.outputs["mode"] = infinite ? "truncated series" : "finite";

    SympMatrix raw;
    if (infinite) {
        raw = impulse_response_truncated(circuit, horizon);
    } else {
        try {
            raw = SympMatrix(impulse_response(circuit, horizon).raw());
        } catch (const HorizonInsufficient &e) {
            throw InputError(std::string(e.what()) + "; increase --horizon");
        }
    }

    // Expected response in the clock domain: D^shift times the file's matrix.
    int slack = 0;
    for (size_t i = 0; i < 2 * n; i++) {
        for (size_t j = 0; j < 2 * n; j++) {
            const auto &e = expected.matrix(i, j);
            if (!e.num().is_zero()) slack = std::max(slack, -e.num().del());
        }
    }
    auto expand = [&](int shift) {
        SympMatrix out(n);
        for (size_t i = 0; i < 2 * n; i++) {
            for (size_t j = 0; j < 2 * n; j++) {
                out(i, j) = truncate(series_expand(expected.matrix(i, j), std::max(horizon - shift, 0)).shifted(shift), horizon);
            }
        }
        return out;
    };
    int shift = 0;
    if (opt.strict_delay) {
        shift = expected.latency.value_or(0);
    } else {
        auto lo_raw = min_exponent(raw);
        auto lo_exp = min_exponent(expand(slack));
        if (lo_raw && lo_exp) {
            shift = *lo_raw - (*lo_exp - slack);
        }
    }
    auto want = expand(shift);
    r.outputs["delay_exponent"] = shift;

    std::string mismatch;
    for (size_t i = 0; i < 2 * n && mismatch.empty(); i++) {
        for (size_t j = 0; j < 2 * n && mismatch.empty(); j++) {
            if (raw(i, j) != want(i, j)) {
                mismatch = "first mismatch at " + generator_label(i, n) + " -> " + generator_label(j, n) +
                           ": expected " + want(i, j).str() + ", got " + raw(i, j).str();
            }
        }
    }
    if (!mismatch.empty()) {
        r.outputs["mismatch"] = mismatch;
    }
    std::string what = opt.strict_delay ? "impulse response equals D^L times expected matrix"
                                        : "impulse response equals expected matrix up to a global power of D";
    if (infinite) {
        what += " (series through clock " + std::to_string(horizon) + ")";
    }
    r.add_verdict(what, mismatch.empty());
    return r;
}

Report cmd_simulate(const std::string &circuit_path, const std::string &stream_path, const Options &opt) {
    Report r;
    r.command = "simulate " + circuit_path + " " + stream_path;
    auto circuit = load_circuit(circuit_path, r);
    auto content = read_input(stream_path, r);
    size_t n = circuit.n;
    auto in = parse_file(stream_path, content, [n](std::string_view c) { return parse_stream(c, n); });
    int horizon = opt.horizon.value_or(std::max(in.last_clock(), 0) + default_horizon(circuit));
    if (horizon < 0) {
        throw InputError("--horizon must be non-negative");
    }
    SimState final_state;
    auto out = run(circuit, in, horizon, &final_state);
    auto stream_text = format_stream(out);
    write_output(opt, stream_text);
    r.outputs["horizon"] = horizon;
    r.outputs["output"] = stream_text;
    if (opt.output.empty()) {
        r.text_outputs.push_back("output:\n" + stream_text);
    }
    if (has_infinite_depth(circuit)) {
        r.outputs["memory_active_at_horizon"] = !final_state.memory_is_zero();
    } else {
        r.add_verdict("register memory empty at horizon", final_state.memory_is_zero());
    }
    return r;
}

Report cmd_reduce(const std::string &circuit_path, const Options &opt) {
    Report r;
    r.command = "reduce " + circuit_path;
    auto circuit = load_circuit(circuit_path, r);
    auto reduced = reduce_memory(circuit);
    auto text = format_circuit(reduced);
    write_output(opt, text);
    r.outputs["memory_before"] = circuit.frames();
    r.outputs["memory_after"] = reduced.frames();
    r.outputs["latency_after"] = reduced.latency();
    r.outputs["circuit"] = text;
    if (opt.output.empty()) {
        r.text_outputs.push_back("circuit:\n" + text);
    }
    bool same;
    if (has_infinite_depth(circuit) || has_infinite_depth(reduced)) {
        same = circuit_transfer_rational(circuit).matrix == circuit_transfer_rational(reduced).matrix;
    } else {
        same = circuit_transfer(circuit).matrix == circuit_transfer(reduced).matrix;
    }
    r.add_verdict("transfer preserved up to a global power of D", same);
    r.add_verdict("memory did not grow", reduced.frames() <= circuit.frames());
    return r;
}

Report cmd_memory(const std::string &path, const Options &opt) {
    Report r;
    r.command = "memory " + path;
    auto content = read_input(path, r);
    if (looks_like_code(content)) {
        auto code = parse_file(path, content, [](std::string_view c) { return parse_stabilizer(c); });
        auto cl = constraint_lengths(code);
        r.outputs["nu_i"] = join_ints(cl.nu);
        r.outputs["nu"] = cl.total;
        r.outputs["m"] = cl.memory;
        if (!code.css) {
            return r;
        }
        auto plan = plan_for(path, code);
        auto circuit = compile_sequence(plan.ops, plan.n);
        write_output(opt, format_circuit(circuit));
        r.outputs["memory_bound"] = plan.memory_bound;
        r.outputs["memory"] = circuit.frames();
        r.add_verdict("memory M <= absolute degree of encoding matrix", circuit.frames() <= plan.memory_bound);
        return r;
    }
    auto seq = parse_file(path, content, [](std::string_view c) { return parse_gate_sequence(c); });
    bool finite = std::none_of(seq.ops.begin(), seq.ops.end(), [](const Gate &g) {
        return g.kind == GateKind::INF_Z || g.kind == GateKind::INF_X;
    });
    auto circuit = compile_sequence(seq.ops, seq.n);
    write_output(opt, format_circuit(circuit));
    r.outputs["memory_before_reduction"] = cascade_sequence(seq.ops, seq.n).frames();
    r.outputs["memory"] = circuit.frames();
    if (finite) {
        int bound = abs_deg_matrix(sequence_matrix(seq.ops, seq.n));
        r.outputs["memory_bound"] = bound;
        bool all_cnot = std::all_of(seq.ops.begin(), seq.ops.end(), [](const Gate &g) {
            return g.kind == GateKind::CNOT;
        });
        if (all_cnot) {
            r.add_verdict("memory M <= absolute degree of encoding matrix", circuit.frames() <= bound);
        }
    }
    return r;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Quantum shift register circuit tools"};
    app.require_subcommand(1);
    Options opt;
    std::string a, b;

    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--format", opt.format, "Report format")->check(CLI::IsMember({"text", "json"}));
        sub->add_option("-o,--output", opt.output, "Write the produced circuit or stream here");
    };
    auto *synth = app.add_subcommand("synth", "Build a reduced encoder circuit for a CSS code");
    synth->add_option("code", a, "Code file")->required();
    add_common(synth);

    auto *verify = app.add_subcommand("verify", "Compare a circuit's impulse response with a matrix");
    verify->add_option("circuit", a, "Circuit file")->required();
    verify->add_option("matrix", b, "Expected matrix file")->required();
    verify->add_option("--horizon", opt.horizon, "Last simulated clock");
    verify->add_flag("--strict-delay", opt.strict_delay, "Require the file's latency exactly");
    add_common(verify);

    auto *simulate = app.add_subcommand("simulate", "Run a Pauli stream through a circuit");
    simulate->add_option("circuit", a, "Circuit file")->required();
    simulate->add_option("stream", b, "Stream file")->required();
    simulate->add_option("--horizon", opt.horizon, "Last simulated clock");
    add_common(simulate);

    auto *reduce = app.add_subcommand("reduce", "Commute gates through memory");
    reduce->add_option("circuit", a, "Circuit file")->required();
    add_common(reduce);

    auto *memory = app.add_subcommand("memory", "Memory report for a code or a gate sequence");
    memory->add_option("file", a, "Code or sequence file")->required();
    add_common(memory);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kExitPass : kExitInput;
    }

    auto start = std::chrono::steady_clock::now();
    int status = kExitPass;
    try {
        Report r;
        if (*synth) r = cmd_synth(a, opt);
        else if (*verify) r = cmd_verify(a, b, opt);
        else if (*simulate) r = cmd_simulate(a, b, opt);
        else if (*reduce) r = cmd_reduce(a, opt);
        else r = cmd_memory(a, opt);
        print_report(r, opt);
        status = r.all_pass() ? kExitPass : kExitFail;
    } catch (const InputError &e) {
        std::cerr << "error: " << e.what() << "\n";
        status = kExitInput;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        status = kExitInput;
    }
    auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::fprintf(stderr, "wall time: %.3f s\n", elapsed);
    return status;
}
