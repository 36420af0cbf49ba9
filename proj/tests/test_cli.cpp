#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rmt/cli.hpp"

using namespace rmt;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli_main(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("solve semicircle prints one CSV row") {
    const auto r = run({"solve", "--law", "semicircle", "--z", "0+2i"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("s_re,s_im,residual,iters\n", 0) == 0);
    CHECK(r.out.find("0.414213562373095") != std::string::npos);
}

TEST_CASE("solve silverstein and deformed") {
    const auto m = run({"solve", "--law", "silverstein", "--h", "1:1", "--y", "0.5", "--z", "0+1i"});
    CHECK(m.code == 0);
    CHECK(m.out.rfind("m_re,m_im,residual,iters\n0.38606082464", 0) == 0);
    const auto d = run({"solve", "--law", "deformed", "--h", "0.5:1,0.5:4", "--z", "0+2i", "--tol", "1e-13"});
    CHECK(d.code == 0);
    CHECK(d.out.rfind("s_re,s_im,g_re,g_im,residual,iters\n", 0) == 0);
}

TEST_CASE("usage errors exit 2 with help on standard error") {
    auto r = run({"solve", "--z", "0+2i"});
    CHECK(r.code == 2);
    CHECK(r.out.empty());
    CHECK(r.err.find("--law") != std::string::npos);
    r = run({"solve", "--law", "semicircle", "--z", "0+2i", "--bogus"});
    CHECK(r.code == 2);
    r = run({});
    CHECK(r.code == 2);
    r = run({"frobnicate"});
    CHECK(r.code == 2);
    r = run({"solve", "--law", "semicircle", "--z", "1-2i"});
    CHECK(r.code == 2);
    r = run({"solve", "--law", "silverstein", "--h", "0.5:1", "--z", "1i"});
    CHECK(r.code == 2);
    r = run({"lsd", "--ensemble", "wigner", "--sizes", "50", "--law", "cauchy"});
    CHECK(r.code == 2);
    r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.err.find("metric-check") != std::string::npos);
}

TEST_CASE("metric-check prints the violation report") {
    const auto r = run({"metric-check", "--spaces", "6", "--dims", "cycle:1-8", "--samples", "2000", "--seed", "3"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("max_triangle_violation,max_symmetry_violation,zero_distance_failures\n", 0) == 0);
    CHECK(r.out.find(",0,0\n") != std::string::npos);
}

TEST_CASE("lsd output is byte-identical across runs and thread counts") {
    const std::vector<std::string> base{"lsd", "--ensemble", "wigner", "--sizes", "60,120", "--reps", "5", "--seed", "42"};
    const auto a = run(base);
    const auto b = run(base);
    auto threaded = base;
    threaded.insert(threaded.end(), {"--threads", "3"});
    const auto c = run(threaded);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
    CHECK(a.out.find("experiment,lsd-wigner") != std::string::npos);
}

TEST_CASE("--out writes the same bytes to a file") {
    const auto path = std::filesystem::temp_directory_path() / "rmtk_cli_test.csv";
    const auto direct = run({"clt", "--n", "30", "--reps", "200", "--z", "0+2i,1+1i", "--seed", "4"});
    const auto to_file = run({"clt", "--n", "30", "--reps", "200", "--z", "0+2i,1+1i", "--seed", "4",
                              "--out", path.string()});
    CHECK(to_file.out.empty());
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == direct.out);
    std::filesystem::remove(path);
}

TEST_CASE("seed falls back to RMTK_SEED and flags take precedence") {
    const std::vector<std::string> base{"lsd", "--ensemble", "wigner", "--sizes", "40", "--reps", "2"};
    auto explicit_seed = base;
    explicit_seed.insert(explicit_seed.end(), {"--seed", "77"});
    const auto flagged = run(explicit_seed);
    ::setenv("RMTK_SEED", "77", 1);
    const auto from_env = run(base);
    ::setenv("RMTK_SEED", "5", 1);
    const auto overridden = run(explicit_seed);
    ::setenv("RMTK_SEED", "not-a-number", 1);
    const auto bad = run(base);
    ::unsetenv("RMTK_SEED");
    CHECK(flagged.out == from_env.out);
    CHECK(flagged.out == overridden.out);
    CHECK(bad.code == 2);
}

TEST_CASE("spiked subcommand and criterion failures exit 1") {
    const auto ok = run({"spiked", "--eigenvalues", "5,1", "--multiplicities", "1,2", "--n", "2000",
                         "--reps", "1000", "--nested-draws", "20000", "--seed", "1"});
    CHECK(ok.code == 0);
    const auto strict = run({"spiked", "--eigenvalues", "5,1", "--multiplicities", "1,2", "--n", "2000",
                             "--reps", "1000", "--nested-draws", "20000", "--seed", "1",
                             "--variance-band", "1e-6"});
    CHECK(strict.code == 1);
    CHECK(strict.out.find(",0\n") != std::string::npos);
    const auto few = run({"spiked", "--eigenvalues", "5", "--n", "500", "--reps", "10"});
    CHECK(few.code == 2);
    const auto mismatch = run({"spiked", "--eigenvalues", "5,1", "--multiplicities", "1", "--n", "50"});
    CHECK(mismatch.code == 2);
}
