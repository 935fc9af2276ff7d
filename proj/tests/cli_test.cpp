// End-to-end runs of the lu-invar binary.

#include "luinv/io.hpp"

#include "gtest/gtest.h"

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

const std::string exe = LU_INVAR_EXE;
const std::string fixtures = LUINV_FIXTURES;

struct Run {
    int code = -1;
    std::string out; // stdout and stderr together
};

Run run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + (env.empty() ? "" : " ") + "'" + exe + "' " + args + " 2>&1";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string fixture(const char* name) { return "'" + fixtures + "/" + name + ".json'"; }

class TempDir {
public:
    TempDir() {
        path_ = fs::temp_directory_path() / ("lu_invar_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string file(const std::string& name, const std::string& content = "") const {
        const auto p = (path_ / name).string();
        if (!content.empty()) std::ofstream(p) << content;
        return p;
    }

private:
    fs::path path_;
    static inline int counter_ = 0;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST(cli_compute, rho1_text) {
    const auto r = run("compute " + fixture("rho1"));
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("N = 3.90625e-3"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("1/256"), std::string::npos);
    EXPECT_NE(r.out.find("kyfan = 0.707106781187 (1/√2)"), std::string::npos) << r.out;
}

TEST(cli_compute, json_output) {
    const auto r = run("compute --json " + fixture("sigma1"));
    ASSERT_EQ(r.code, 0) << r.out;
    const auto j = luinv::json::parse(r.out);
    EXPECT_EQ(j.at("fingerprint").at("rank"), 2);
    EXPECT_NEAR(j.at("fingerprint").at("M")[0].get<double>(), 1.0 / 6561.0, 1e-12);
}

TEST(cli_compute, malformed_json_exit_2) {
    TempDir t;
    EXPECT_EQ(run("compute " + t.file("bad.json", "{\"dims\": [2,")).code, 2);
    EXPECT_EQ(run("compute " + t.file("shape.json", "{\"dims\": [2], \"matrix\": [[[1,0]]]}")).code, 2);
    EXPECT_EQ(run("compute /nonexistent/file.json").code, 2);
}

TEST(cli_compute, not_psd_exit_3) {
    TempDir t;
    const auto path = t.file("neg.json", "{\"dims\": [2], \"matrix\": [[[0.5,0],[0.6,0]], [[0.6,0],[0.5,0]]]}");
    const auto r = run("compute " + path);
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.out.find("NotPSD"), std::string::npos) << r.out;
}

TEST(cli_compute, not_unit_trace_exit_3) {
    TempDir t;
    const auto r = run("compute " + t.file("tr.json", "{\"dims\": [2], \"matrix\": [[[1,0],[0,0]], [[0,0],[1,0]]]}"));
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.out.find("NotUnitTrace"), std::string::npos);
}

TEST(cli_compare, exit_codes) {
    const auto rho = run("compare " + fixture("rho1") + " " + fixture("rho2"));
    EXPECT_EQ(rho.code, 1);
    EXPECT_NE(rho.out.find("witness: invariant_N"), std::string::npos) << rho.out;
    EXPECT_EQ(run("compare " + fixture("rho1") + " " + fixture("rho1")).code, 0);
    const auto sigma = run("compare " + fixture("sigma1") + " " + fixture("sigma2"));
    EXPECT_EQ(sigma.code, 1);
    EXPECT_NE(sigma.out.find("FAIL  invariant_M"), std::string::npos) << sigma.out;
}

TEST(cli_compare, json_report_round_trips) {
    const auto r = run("compare --json --seed 5 " + fixture("rho1") + " " + fixture("rho2"));
    ASSERT_EQ(r.code, 1);
    const auto rf = luinv::report_from_json(luinv::json::parse(r.out));
    EXPECT_EQ(rf.cfg.seed, 5u);
    EXPECT_EQ(luinv::dump(luinv::report_to_json(rf)), r.out);
}

TEST(cli_compare, bad_flag_exit_2) {
    EXPECT_EQ(run("compare " + fixture("rho1")).code, 2);
    EXPECT_EQ(run("compare --atol notanumber " + fixture("rho1") + " " + fixture("rho2")).code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
}

TEST(cli_mix, rho1_five_columns) {
    const auto r = run("mix --count 5 --seed 3 " + fixture("rho1"));
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("mix 5"), std::string::npos);
    EXPECT_NE(r.out.find("all columns agree"), std::string::npos);
}

TEST(cli_mix, zero_count_empty_table) {
    const auto r = run("mix -k 0 --json " + fixture("rho1"));
    ASSERT_EQ(r.code, 0) << r.out;
    const auto j = luinv::json::parse(r.out);
    EXPECT_EQ(j.at("count"), 0);
    EXPECT_TRUE(j.at("mixings").at("F_1").empty());
}

TEST(cli_mix, pure_state) {
    TempDir t;
    const auto pure = t.file("pure.json", "{\"dims\": [2, 2], \"matrix\": [[[1,0],[0,0],[0,0],[0,0]], [[0,0],[0,0],[0,0],[0,0]], "
                                          "[[0,0],[0,0],[0,0],[0,0]], [[0,0],[0,0],[0,0],[0,0]]]}");
    const auto r = run("mix -k 3 --json " + pure);
    ASSERT_EQ(r.code, 0) << r.out;
    const auto j = luinv::json::parse(r.out);
    EXPECT_EQ(j.at("mixings").size(), 2u); // F_0, F_1 only
    for (const auto& v : j.at("mixings").at("F_1")) EXPECT_NEAR(v[0].get<double>(), 1.0, 1e-12);
}

TEST(cli_random_lu, deterministic_and_equivalent) {
    TempDir t;
    const auto a = t.file("a.json");
    const auto b = t.file("b.json");
    ASSERT_EQ(run("random-lu --seed 1 --out '" + a + "' " + fixture("rho1")).code, 0);
    ASSERT_EQ(run("random-lu --seed 1 --out '" + b + "' " + fixture("rho1")).code, 0);
    EXPECT_EQ(slurp(a), slurp(b));
    EXPECT_NE(slurp(a), slurp(fixtures + "/rho1.json"));
    EXPECT_EQ(run("compare " + fixture("rho1") + " '" + a + "'").code, 0);
    const auto fa = run("compute --json " + fixture("rho1"));
    const auto fb = run("compute --json '" + a + "'");
    const auto ja = luinv::json::parse(fa.out).at("fingerprint");
    const auto jb = luinv::json::parse(fb.out).at("fingerprint");
    EXPECT_NEAR(ja.at("N")[0].get<double>(), jb.at("N")[0].get<double>(), 1e-12);
}

TEST(cli_random_lu, multipartite_needs_cut) {
    TempDir t;
    std::string m = "{\"dims\": [2, 2, 2], \"matrix\": [";
    for (int r = 0; r < 8; ++r) {
        m += r ? ", [" : "[";
        for (int c = 0; c < 8; ++c) m += std::string(c ? ", " : "") + (r == c ? "[0.125, 0]" : "[0, 0]");
        m += "]";
    }
    m += "]}";
    const auto in = t.file("ghz.json", m);
    const auto out = t.file("out.json");
    const auto r = run("random-lu --out '" + out + "' " + in);
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("--cut"), std::string::npos) << r.out;
    EXPECT_EQ(run("random-lu --cut 2 --out '" + out + "' " + in).code, 0);
    EXPECT_EQ(run("compare --cut 2 '" + in + "' '" + out + "'").code, 0);
}

TEST(cli_random_lu, env_seed_fallback) {
    TempDir t;
    const auto a = t.file("a.json");
    const auto b = t.file("b.json");
    const auto c = t.file("c.json");
    ASSERT_EQ(run("random-lu --out '" + a + "' " + fixture("sigma1"), "LU_INVAR_SEED=11").code, 0);
    ASSERT_EQ(run("random-lu --seed 11 --out '" + b + "' " + fixture("sigma1")).code, 0);
    ASSERT_EQ(run("random-lu --out '" + c + "' " + fixture("sigma1"), "LU_INVAR_SEED=12").code, 0);
    EXPECT_EQ(slurp(a), slurp(b));
    EXPECT_NE(slurp(a), slurp(c));
    EXPECT_EQ(run("random-lu --out '" + a + "' " + fixture("sigma1"), "LU_INVAR_SEED=abc").code, 2);
}

TEST(cli_selftest, quick_and_full) {
    const auto q = run("selftest --quick");
    EXPECT_EQ(q.code, 0) << q.out;
    EXPECT_NE(q.out.find("Example1: N(ρ₁)=1/256 PASS"), std::string::npos);
    const auto f = run("selftest --full");
    EXPECT_EQ(f.code, 0) << f.out;
    EXPECT_NE(f.out.find("padding law"), std::string::npos);
    EXPECT_NE(f.out.find("SL covariance"), std::string::npos);
    EXPECT_EQ(run("selftest --quick --full").code, 2);
}

TEST(cli_seed, reproducible_bytes) {
    const auto a = run("mix -k 4 --seed 9 --json " + fixture("sigma1"));
    const auto b = run("mix -k 4 --seed 9 --json " + fixture("sigma1"));
    EXPECT_EQ(a.out, b.out);
}
