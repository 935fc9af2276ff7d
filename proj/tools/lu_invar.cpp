// lu-invar: compute decomposition-independent local-unitary invariants of
// density matrices and screen pairs of states for LU non-equivalence.
//
// Exit codes: 0 success / inconclusive, 1 not equivalent or self-test
// failure, 2 usage, I/O or parse error, 3 invalid state.

#include "luinv/equivalence.hpp"
#include "luinv/io.hpp"
#include "luinv/random.hpp"
#include "luinv/selftest.hpp"

#include "CLI11.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace luinv;

constexpr int exit_ok = 0;
constexpr int exit_not_equivalent = 1;
constexpr int exit_usage = 2;
constexpr int exit_invalid_state = 3;

// ---------------------------------------------------------------- text output

std::string trim_mantissa(std::string s) {
    const auto e = s.find('e');
    std::string mant = s.substr(0, e);
    std::string exp = e == std::string::npos ? "" : s.substr(e + 1);
    if (mant.find('.') != std::string::npos) {
        while (!mant.empty() && mant.back() == '0') mant.pop_back();
        if (!mant.empty() && mant.back() == '.') mant.pop_back();
    }
    if (exp.empty()) return mant;
    const int ev = std::stoi(exp);
    return mant + "e" + std::to_string(ev);
}

// 12 significant digits; plain notation for 1e-2 <= |x| < 1e5, otherwise
// scientific with a bare exponent (3.90625e-3).
std::string format_real(double x) {
    if (x == 0.0) return "0";
    if (!std::isfinite(x)) return std::to_string(x);
    char buf[64];
    const int e10 = static_cast<int>(std::floor(std::log10(std::abs(x))));
    if (e10 >= -2 && e10 < 5) {
        auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, std::max(0, 11 - e10));
        return trim_mantissa(std::string(buf, res.ptr));
    }
    auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific, 11);
    return trim_mantissa(std::string(buf, res.ptr));
}

// Exact forms of the values the bundled fixtures produce.
std::string known_constant(double x) {
    struct Known {
        double value;
        const char* text;
    };
    static const Known table[] = {{1.0 / 256.0, "1/256"}, {1.0 / 6561.0, "1/6561"}, {1.0 / std::sqrt(2.0), "1/√2"}};
    for (const auto& k : table)
        if (std::abs(x - k.value) <= 1e-12) return k.text;
    return {};
}

std::string format_value(complex z) {
    const double scale = std::max(1.0, std::abs(z.real()));
    std::string s;
    if (std::abs(z.imag()) <= 1e-14 * scale) {
        s = format_real(z.real());
        if (auto k = known_constant(z.real()); !k.empty()) s += " (" + k + ")";
    } else {
        s = format_real(z.real()) + (z.imag() < 0 ? " - " : " + ") + format_real(std::abs(z.imag())) + "i";
    }
    return s;
}

std::string format_list(const std::vector<complex>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_value(v[i]);
    return s + "]";
}

void print_fingerprint_text(const Fingerprint& fp, std::ostream& os) {
    os << "dims = " << dims_string(fp.dims) << "\n";
    os << "rank = " << fp.rank << "\n";
    for (std::size_t i = 0; i < fp.F.F.size(); ++i) os << "F_" << i << " = " << format_value(fp.F.F[i]) << "\n";
    os << "N = " << (fp.N ? format_value(*fp.N) : "n/a (rank != 2)") << "\n";
    os << "M = " << (fp.M ? format_value(*fp.M) : "n/a (rank != 2)") << "\n";
    os << "kyfan = " << format_value(fp.kyfan) << "\n";
    for (const auto& p : fp.lambda)
        os << "lambda_" << lambda_invariant_name(p.inv) << " (ascending) = " << format_list(p.cleaned().coeffs()) << "\n";
}

void print_report_text(const EquivalenceReport& r, std::ostream& os) {
    os << "verdict: " << verdict_name(r.verdict) << "\n";
    if (r.witness)
        os << "witness: " << r.witness->name << " (" << format_value(r.witness->a) << " vs " << format_value(r.witness->b)
           << ", |Δ| = " << format_real(r.witness->diff) << ")\n";
    os << "checks:\n";
    for (const auto& c : r.checks) {
        os << "  " << (c.pass ? "PASS" : "FAIL") << (c.marginal ? "*" : " ") << " " << std::left << std::setw(14) << c.name
           << " " << format_value(c.a) << " | " << format_value(c.b) << "\n";
    }
    if (std::any_of(r.checks.begin(), r.checks.end(), [](const Check& c) { return c.marginal; }))
        os << "  (* marginal: difference within a factor 10 of the tolerance)\n";
}

// ------------------------------------------------------------------ plumbing

struct CommonFlags {
    std::optional<double> rank_tol;
    double atol = 1e-8;
    double rtol = 1e-8;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> cut;
    bool json = false;
    bool text = false;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("LU_INVAR_SEED"); env && *env) {
        std::uint64_t v = 0;
        const auto* end = env + std::char_traits<char>::length(env);
        auto res = std::from_chars(env, end, v);
        if (res.ec != std::errc() || res.ptr != end) throw format_error(std::string("LU_INVAR_SEED is not an integer: ") + env);
        return v;
    }
    return 0;
}

ScreenConfig make_config(const CommonFlags& f) {
    ScreenConfig cfg;
    cfg.rank_tol = f.rank_tol;
    cfg.atol = f.atol;
    cfg.rtol = f.rtol;
    cfg.cut = f.cut.value_or(1);
    cfg.seed = resolve_seed(f.seed);
    return cfg;
}

// Runs a command body, translating exceptions into exit codes.
template <class F>
int guarded(F&& body) {
    try {
        return body();
    } catch (const format_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const luinv::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.code()) {
        case errc::bad_cut:
        case errc::bad_length:
        case errc::not_bipartite: return exit_usage;
        default: return exit_invalid_state;
        }
    }
}

void add_tolerance_flags(CLI::App* cmd, CommonFlags& f, bool screening) {
    cmd->add_option("--rank-tol", f.rank_tol, "absolute eigenvalue threshold for the rank (default 1e-10 * largest eigenvalue)");
    if (screening) {
        cmd->add_option("--atol", f.atol, "absolute tolerance for invariant comparison")->capture_default_str();
        cmd->add_option("--rtol", f.rtol, "relative tolerance for invariant comparison")->capture_default_str();
    }
    cmd->add_option("--seed", f.seed, "random seed (falls back to $LU_INVAR_SEED, then 0)");
    cmd->add_option("--cut", f.cut, "bipartition after this many subsystems (multipartite states)")->check(CLI::PositiveNumber);
}

void add_format_flags(CLI::App* cmd, CommonFlags& f) {
    auto* j = cmd->add_flag("--json", f.json, "JSON output");
    auto* t = cmd->add_flag("--text", f.text, "text output (default)");
    j->excludes(t);
}

// ------------------------------------------------------------------ commands

int cmd_compute(const std::string& path, const CommonFlags& flags) {
    const ScreenConfig cfg = make_config(flags);
    const DensityMatrix rho = load_state(path);
    const Fingerprint fp = fingerprint(rho, cfg);
    if (flags.json) {
        json out{{"fingerprint", fingerprint_to_json(fp)},
                 {"rank_tol", cfg.rank_tol ? json(*cfg.rank_tol) : json(nullptr)},
                 {"cut", cfg.cut},
                 {"seed", cfg.seed},
                 {"version", tool_version}};
        std::cout << dump(out);
    } else {
        print_fingerprint_text(fp, std::cout);
    }
    return exit_ok;
}

int cmd_compare(const std::string& path_a, const std::string& path_b, const CommonFlags& flags) {
    const ScreenConfig cfg = make_config(flags);
    const DensityMatrix a = load_state(path_a);
    const DensityMatrix b = load_state(path_b);
    ReportFile rf;
    rf.cfg = cfg;
    rf.a = fingerprint(a, cfg);
    rf.b = fingerprint(b, cfg);
    rf.report = screen_fingerprints(rf.a, rf.b, cfg);
    if (flags.json) {
        std::cout << dump(report_to_json(rf));
    } else {
        print_report_text(rf.report, std::cout);
    }
    return rf.report.verdict == Verdict::NotEquivalent ? exit_not_equivalent : exit_ok;
}

int cmd_mix(const std::string& path, std::size_t count, const CommonFlags& flags) {
    const ScreenConfig cfg = make_config(flags);
    const DensityMatrix rho = load_state(path);
    const PureStateDecomposition base = eigen_decomposition(rho, cfg.rank_tol, cfg.cut);

    struct Row {
        std::string name;
        std::vector<complex> values;
    };
    auto invariants_of = [](const PureStateDecomposition& d) {
        std::vector<Row> rows;
        const auto f = f_invariants(gram_matrix(d));
        for (std::size_t i = 0; i < f.F.size(); ++i) rows.push_back({"F_" + std::to_string(i), {f.F[i]}});
        if (d.size() == 2) {
            const auto h = hypermatrix(d, 2);
            rows.push_back({"N", {invariant_N(h)}});
            rows.push_back({"M", {invariant_M(h)}});
        }
        return rows;
    };

    std::vector<Row> table = invariants_of(base);
    bool consistent = true;
    for (std::size_t c = 0; c < count; ++c) {
        const auto u = haar_unitary(base.size(), derive_seed(cfg.seed, c));
        const auto rows = invariants_of(mix_decomposition(base, u));
        for (std::size_t r = 0; r < table.size(); ++r) {
            const complex v = rows[r].values[0];
            if (!compare_values(table[r].name, table[r].values[0], v, cfg).pass) consistent = false;
            table[r].values.push_back(v);
        }
    }

    if (flags.json) {
        json out = json::object();
        for (const auto& row : table) {
            json vals = json::array();
            for (std::size_t c = 1; c < row.values.size(); ++c) vals.push_back(complex_to_json(row.values[c]));
            out["mixings"][row.name] = vals;
            out["eigen"][row.name] = complex_to_json(row.values[0]);
        }
        out["count"] = count;
        out["consistent"] = consistent;
        out["seed"] = cfg.seed;
        std::cout << dump(out);
    } else {
        std::cout << "rank " << base.size() << ", " << count << " random mixings (seed " << cfg.seed << ")\n";
        std::cout << std::left << std::setw(10) << "invariant";
        for (std::size_t c = 0; c < count; ++c) std::cout << std::setw(24) << ("mix " + std::to_string(c + 1));
        std::cout << "\n";
        if (count > 0)
            for (const auto& row : table) {
                std::cout << std::setw(10) << row.name;
                for (std::size_t c = 1; c < row.values.size(); ++c) std::cout << std::setw(24) << format_real(row.values[c].real());
                std::cout << "\n";
            }
        std::cout << (consistent ? "all columns agree\n" : "DISAGREEMENT between decompositions\n");
    }
    return consistent ? exit_ok : exit_not_equivalent;
}

int cmd_random_lu(const std::string& path, const std::string& out_path, const CommonFlags& flags) {
    const ScreenConfig cfg = make_config(flags);
    const DensityMatrix rho = load_state(path);
    if (!rho.is_bipartite() && !flags.cut) {
        std::cerr << "error: state has " << rho.dims().size()
                  << " subsystems; pass --cut l to choose the bipartition for the local unitaries\n";
        return exit_usage;
    }
    const DensityMatrix bi = as_bipartite(rho, cfg.cut);
    const auto locals = random_local_unitaries(bi.dims(), cfg.seed);
    const DensityMatrix moved = apply_local_unitary_density(bi, locals);
    const DensityMatrix out = validate_density(moved.matrix(), rho.dims(), rho.tol());
    write_text_file(out_path, dump(state_to_json(out)));
    return exit_ok;
}

int cmd_selftest(bool full, const CommonFlags& flags) {
    SelftestOptions opt;
    opt.full = full;
    opt.trials = full ? 100 : 10;
    opt.seed = resolve_seed(flags.seed);
    std::cout << "lu-invar selftest (" << (full ? "full" : "quick") << ", " << opt.trials << " trials per property)\n";
    return report_selftest(run_selftest(opt), std::cout) ? exit_ok : exit_not_equivalent;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"lu-invar: local-unitary invariants of mixed quantum states"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(tool_version));

    CommonFlags flags;
    std::string path_a, path_b, out_path;
    std::size_t count = 5;
    bool quick = false;
    bool full = false;

    auto* compute = app.add_subcommand("compute", "print the invariant fingerprint of a state file");
    compute->add_option("state", path_a, "state file (JSON)")->required();
    add_tolerance_flags(compute, flags, false);
    add_format_flags(compute, flags);

    auto* compare = app.add_subcommand("compare", "screen two states for LU non-equivalence (exit 1 = not equivalent)");
    compare->add_option("state_a", path_a, "first state file")->required();
    compare->add_option("state_b", path_b, "second state file")->required();
    add_tolerance_flags(compare, flags, true);
    add_format_flags(compare, flags);

    auto* mix = app.add_subcommand("mix", "recompute invariants over random unitary mixings of the eigen-decomposition");
    mix->add_option("state", path_a, "state file")->required();
    mix->add_option("--count,-k", count, "number of random mixings")->capture_default_str();
    add_tolerance_flags(mix, flags, true);
    add_format_flags(mix, flags);

    auto* random_lu = app.add_subcommand("random-lu", "write (u1 x u2) rho (u1 x u2)^dag for Haar-random u1, u2");
    random_lu->add_option("state", path_a, "state file")->required();
    random_lu->add_option("--out,-o", out_path, "output state file")->required();
    add_tolerance_flags(random_lu, flags, false);

    auto* selftest = app.add_subcommand("selftest", "run the built-in property suites");
    auto* q = selftest->add_flag("--quick", quick, "10 random trials per property (default)");
    auto* f = selftest->add_flag("--full", full, "100 random trials, plus padding-law and SL-covariance suites");
    q->excludes(f);
    selftest->add_option("--seed", flags.seed, "random seed (falls back to $LU_INVAR_SEED, then 0)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_usage;
    }

    if (*compute) return guarded([&] { return cmd_compute(path_a, flags); });
    if (*compare) return guarded([&] { return cmd_compare(path_a, path_b, flags); });
    if (*mix) return guarded([&] { return cmd_mix(path_a, count, flags); });
    if (*random_lu) return guarded([&] { return cmd_random_lu(path_a, out_path, flags); });
    if (*selftest) return guarded([&] { return cmd_selftest(full, flags); });
    return exit_usage;
}
