// io.hpp
// JSON state files and reports. Complex numbers are [re, im] pairs; object
// keys come out sorted.
//
// State file:  {"dims": [n1, ...], "matrix": [[[re, im], ...], ...]}

#pragma once

#include "luinv/equivalence.hpp"
#include "luinv/states.hpp"

#include "json.hpp"

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace luinv {

inline constexpr const char* tool_version = "0.1.0";

// Unreadable file, malformed JSON or a document that does not fit the
// schema. Distinct from luinv::error, which reports invalid physics.
class format_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using json = nlohmann::json;

inline json complex_to_json(complex z) { return json::array({z.real(), z.imag()}); }

inline complex complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw format_error("complex entry must be [re, im], got " + j.dump());
    return {j[0].get<double>(), j[1].get<double>()};
}

inline json optional_complex_to_json(const std::optional<complex>& z) { return z ? complex_to_json(*z) : json(nullptr); }

inline std::optional<complex> optional_complex_from_json(const json& j) {
    if (j.is_null()) return std::nullopt;
    return complex_from_json(j);
}

inline json matrix_to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline json state_to_json(const DensityMatrix& rho) {
    return json{{"dims", rho.dims()}, {"matrix", matrix_to_json(rho.matrix())}};
}

struct RawState {
    Dims dims;
    ComplexMatrix matrix;
};

// Schema-level parse only; physical validity is checked by validate_density.
inline RawState raw_state_from_json(const json& j) {
    if (!j.is_object() || !j.contains("dims") || !j.contains("matrix"))
        throw format_error("state file needs \"dims\" and \"matrix\"");
    const json& jd = j.at("dims");
    if (!jd.is_array() || jd.empty()) throw format_error("\"dims\" must be a non-empty array");
    RawState st;
    for (const auto& d : jd) {
        if (!d.is_number_integer() || d.get<std::int64_t>() < 1)
            throw format_error("\"dims\" entries must be positive integers");
        st.dims.push_back(d.get<std::size_t>());
    }
    const std::size_t n = dims_product(st.dims);
    const json& jm = j.at("matrix");
    if (!jm.is_array() || jm.size() != n)
        throw format_error("\"matrix\" must have " + std::to_string(n) + " rows for dims " + dims_string(st.dims));
    st.matrix = ComplexMatrix(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        if (!jm[r].is_array() || jm[r].size() != n)
            throw format_error("\"matrix\" row " + std::to_string(r) + " must have " + std::to_string(n) + " entries");
        for (std::size_t c = 0; c < n; ++c) st.matrix(r, c) = complex_from_json(jm[r][c]);
    }
    return st;
}

inline json parse_json_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw format_error(std::string("malformed JSON: ") + e.what());
    }
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw format_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline DensityMatrix load_state(const std::string& path, double tol = default_structure_tol) {
    RawState st = raw_state_from_json(parse_json_text(read_text_file(path)));
    return validate_density(std::move(st.matrix), std::move(st.dims), tol);
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw format_error("cannot write " + path);
    out << text;
    if (!out) throw format_error("write failed for " + path);
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Fingerprint <-> JSON

inline json lambda_to_json(const LambdaPolynomial& p) {
    json raw = json::array();
    json negligible = json::array();
    for (std::size_t k = 0; k < p.raw.size(); ++k) {
        raw.push_back(complex_to_json(p.raw[k]));
        negligible.push_back(p.negligible(k));
    }
    return json{{"invariant", std::string(lambda_invariant_name(p.inv))}, {"s", p.s}, {"raw", raw}, {"negligible", negligible}};
}

inline LambdaPolynomial lambda_from_json(const json& j) {
    LambdaPolynomial p{};
    const auto name = j.at("invariant").get<std::string>();
    if (name == "N") p.inv = LambdaInvariant::N;
    else if (name == "M") p.inv = LambdaInvariant::M;
    else if (name == "det") p.inv = LambdaInvariant::det;
    else throw format_error("unknown lambda invariant " + name);
    p.s = j.at("s").get<std::size_t>();
    for (const auto& c : j.at("raw")) p.raw.push_back(complex_from_json(c));
    return p;
}

inline json fingerprint_to_json(const Fingerprint& fp) {
    json f = json::array();
    for (const auto& z : fp.F.F) f.push_back(complex_to_json(z));
    json lambda = json::array();
    for (const auto& p : fp.lambda) lambda.push_back(lambda_to_json(p));
    return json{{"dims", fp.dims},       {"rank", fp.rank},   {"F", f},
                {"N", optional_complex_to_json(fp.N)}, {"M", optional_complex_to_json(fp.M)},
                {"kyfan", fp.kyfan},     {"lambda", lambda}};
}

inline Fingerprint fingerprint_from_json(const json& j) {
    try {
        Fingerprint fp;
        fp.dims = j.at("dims").get<Dims>();
        fp.rank = j.at("rank").get<std::size_t>();
        for (const auto& z : j.at("F")) fp.F.F.push_back(complex_from_json(z));
        fp.N = optional_complex_from_json(j.at("N"));
        fp.M = optional_complex_from_json(j.at("M"));
        fp.kyfan = j.at("kyfan").get<double>();
        for (const auto& p : j.at("lambda")) fp.lambda.push_back(lambda_from_json(p));
        return fp;
    } catch (const json::exception& e) {
        throw format_error(std::string("bad fingerprint: ") + e.what());
    }
}

// Report file: the screening result together with both fingerprints and
// the settings that produced it.
struct ReportFile {
    EquivalenceReport report;
    Fingerprint a;
    Fingerprint b;
    ScreenConfig cfg;
    std::string version = tool_version;
};

inline json check_to_json(const Check& c) {
    return json{{"name", c.name}, {"a", complex_to_json(c.a)}, {"b", complex_to_json(c.b)},
                {"diff", c.diff}, {"pass", c.pass},            {"marginal", c.marginal}};
}

inline json report_to_json(const ReportFile& r) {
    json checks = json::array();
    for (const auto& c : r.report.checks) checks.push_back(check_to_json(c));
    json witness = nullptr;
    if (r.report.witness)
        witness = json{{"name", r.report.witness->name},
                       {"a", complex_to_json(r.report.witness->a)},
                       {"b", complex_to_json(r.report.witness->b)},
                       {"diff", r.report.witness->diff}};
    json tolerances{{"atol", r.cfg.atol},
                    {"rtol", r.cfg.rtol},
                    {"rank_tol", r.cfg.rank_tol ? json(*r.cfg.rank_tol) : json(nullptr)},
                    {"cut", r.cfg.cut}};
    return json{{"version", r.version},
                {"seed", r.cfg.seed},
                {"tolerances", tolerances},
                {"verdict", std::string(verdict_name(r.report.verdict))},
                {"witness", witness},
                {"checks", checks},
                {"fingerprint_a", fingerprint_to_json(r.a)},
                {"fingerprint_b", fingerprint_to_json(r.b)}};
}

inline ReportFile report_from_json(const json& j) {
    try {
        ReportFile r;
        r.version = j.at("version").get<std::string>();
        r.cfg.seed = j.at("seed").get<std::uint64_t>();
        const json& t = j.at("tolerances");
        r.cfg.atol = t.at("atol").get<double>();
        r.cfg.rtol = t.at("rtol").get<double>();
        if (!t.at("rank_tol").is_null()) r.cfg.rank_tol = t.at("rank_tol").get<double>();
        r.cfg.cut = t.at("cut").get<std::size_t>();
        const auto verdict = j.at("verdict").get<std::string>();
        if (verdict == "NotEquivalent") r.report.verdict = Verdict::NotEquivalent;
        else if (verdict == "Inconclusive") r.report.verdict = Verdict::Inconclusive;
        else throw format_error("unknown verdict " + verdict);
        if (!j.at("witness").is_null()) {
            const json& w = j.at("witness");
            r.report.witness = Witness{w.at("name").get<std::string>(), complex_from_json(w.at("a")),
                                       complex_from_json(w.at("b")), w.at("diff").get<double>()};
        }
        for (const auto& c : j.at("checks"))
            r.report.checks.push_back(Check{c.at("name").get<std::string>(), complex_from_json(c.at("a")),
                                            complex_from_json(c.at("b")), c.at("diff").get<double>(),
                                            c.at("pass").get<bool>(), c.at("marginal").get<bool>()});
        r.a = fingerprint_from_json(j.at("fingerprint_a"));
        r.b = fingerprint_from_json(j.at("fingerprint_b"));
        return r;
    } catch (const json::exception& e) {
        throw format_error(std::string("bad report: ") + e.what());
    }
}

} // namespace luinv
