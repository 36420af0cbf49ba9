#include <doctest.h>

#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rmt/errors.hpp"
#include "rmt/harness.hpp"

using namespace rmt;

namespace {

std::string csv_of(const ExperimentReport& r) {
    std::ostringstream os;
    write_report_csv(os, r);
    return os.str();
}

/// The report with its summary replaced by `summary`, as CSV.
std::string csv_with(ExperimentReport r, std::vector<SummaryEntry> summary) {
    r.summary = std::move(summary);
    return csv_of(r);
}

}  // namespace

TEST_CASE("complex literals") {
    CHECK(parse_complex("0+2i") == cplx(0, 2));
    CHECK(parse_complex("2i") == cplx(0, 2));
    CHECK(parse_complex("-1.5-0.25i") == cplx(-1.5, -0.25));
    CHECK(parse_complex("3") == cplx(3, 0));
    CHECK(parse_complex("1e-3+2e+1i") == cplx(1e-3, 20));
    CHECK(parse_complex("1+i") == cplx(1, 1));
    CHECK(parse_complex("-i") == cplx(0, -1));
    CHECK_THROWS_AS(parse_complex(""), UsageError);
    CHECK_THROWS_AS(parse_complex("abc"), UsageError);
    CHECK_THROWS_AS(parse_complex("1+2j"), UsageError);
    for (const cplx z : {cplx(0, 2), cplx(-1.5, -0.25), cplx(0.1, 1e-7)})
        CHECK(parse_complex(format_complex(z)) == z);
    CHECK(format_complex({0, 1.5}) == "0+1.5i");
}

TEST_CASE("parallel_for visits every index once and propagates errors") {
    for (std::size_t threads : {1, 2, 5}) {
        std::vector<std::atomic<int>> hits(1000);
        parallel_for(hits.size(), threads, [&](std::size_t i) { ++hits[i]; });
        for (auto& h : hits) CHECK(h == 1);
        CHECK_THROWS_AS(parallel_for(100, threads,
                                     [](std::size_t i) {
                                         if (i == 37) throw NonConvergence("boom");
                                     }),
                        NonConvergence);
    }
    parallel_for(0, 4, [](std::size_t) { FAIL("no work expected"); });
}

TEST_CASE("report CSV layout and row round trip") {
    ExperimentReport r;
    r.experiment_name = "demo";
    r.master_seed = 9;
    r.columns = {"replicate", "x"};
    r.rows = {{0, 0.1}, {1, 1.0 / 3.0}, {2, -2e-300}};
    r.summary = {{"mean", 0.5, 0.1, 0.4, true}, {"other", 1, 0, std::nullopt, false}};
    r.notes = {"hello"};
    const auto csv = csv_of(r);
    CHECK(csv ==
          "key,value\nexperiment,demo\nmaster_seed,9\ntolerances,2026.1\nnote,hello\n\n"
          "replicate,x\n0,0.1\n1,0.3333333333333333\n2,-2e-300\n\n"
          "statistic,estimate,std_error,theory,pass\nmean,0.5,0.1,0.4,1\nother,1,0,,0\n");
    CHECK(read_report_rows(csv) == r.rows);
    CHECK_FALSE(r.passed());
    CHECK(r.entry("mean").estimate == 0.5);
    CHECK_THROWS_AS(r.entry("missing"), DomainError);
}

TEST_CASE("LSD summary logic") {
    const std::vector<std::size_t> sizes{10, 20};
    std::vector<std::vector<double>> rows{{0, 10, 0.3}, {1, 10, 0.5}, {2, 20, 0.2}, {3, 20, 0.3}};
    auto s = summarize_lsd(rows, sizes, 0.26, false);
    auto find = [&](const std::string& name) {
        for (const auto& e : s)
            if (e.statistic == name) return e;
        FAIL("missing " << name);
        return SummaryEntry{};
    };
    CHECK(find("mean_ks[n=10]").estimate == doctest::Approx(0.4));
    CHECK(find("mean_ks[n=20]").std_error == doctest::Approx(0.05));
    CHECK(find("ks_strictly_decreasing").pass);
    CHECK(find("ks_largest_n_below_threshold[n=20]").pass);
    rows[3][2] = 0.7;  // mean at 20 rises to 0.45
    s = summarize_lsd(rows, sizes, 0.26, false);
    CHECK_FALSE(find("ks_strictly_decreasing").pass);
    CHECK_FALSE(find("ks_largest_n_below_threshold[n=20]").pass);
    CHECK_THROWS_AS(summarize_lsd(rows, {10, 30}, 0.1, false), InsufficientSamples);
}

TEST_CASE("LSD experiment: determinism, serial vs parallel, summary from rows") {
    EnsembleConfig e;
    LsdOptions o;
    o.sizes = {40, 80, 160};
    o.reps = 4;
    o.seed = 42;
    const auto a = run_lsd_experiment(e, o);
    const auto b = run_lsd_experiment(e, o);
    o.execution.threads = 3;
    const auto c = run_lsd_experiment(e, o);
    CHECK(csv_of(a) == csv_of(b));
    CHECK(csv_of(a) == csv_of(c));
    const auto rows = read_report_rows(csv_of(a));
    CHECK(rows == a.rows);
    CHECK(csv_with(a, summarize_lsd(rows, o.sizes, o.tolerances.lsd_ks_wigner, false)) == csv_of(a));
    for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(a.rows[i][0] == static_cast<double>(i));
    o.seed = 43;
    CHECK(csv_of(run_lsd_experiment(e, o)) != csv_of(a));
}

TEST_CASE("LSD experiment with one replicate reproduces") {
    EnsembleConfig e;
    e.kind = EnsembleConfig::Kind::Deformed;
    e.population = AtomicDistribution::parse("0.5:1,0.5:4");
    LsdOptions o;
    o.sizes = {50};
    o.reps = 1;
    o.seed = 1;
    CHECK(csv_of(run_lsd_experiment(e, o)) == csv_of(run_lsd_experiment(e, o)));
}

TEST_CASE("LSD experiment: configuration errors") {
    EnsembleConfig e;
    LsdOptions o;
    o.sizes = {100, 50};
    CHECK_THROWS_AS(run_lsd_experiment(e, o), InvalidConfig);
    o.sizes = {50, 50};
    CHECK_THROWS_AS(run_lsd_experiment(e, o), InvalidConfig);
    o.sizes = {};
    CHECK_THROWS_AS(run_lsd_experiment(e, o), InvalidConfig);
    o.sizes = {50};
    o.reps = 0;
    CHECK_THROWS_AS(run_lsd_experiment(e, o), InsufficientSamples);
    e.kind = EnsembleConfig::Kind::SampleCovariance;
    e.aspect_ratio = 2.0;
    CHECK_THROWS_AS(limit_cdf(e, 1e-2), InvalidConfig);
}

TEST_CASE("inverted covariance limit CDF tracks the Marchenko-Pastur integral") {
    EnsembleConfig e;
    e.kind = EnsembleConfig::Kind::SampleCovariance;
    e.aspect_ratio = 0.5;
    const auto f = limit_cdf(e, 1e-3);
    const double y = 0.5;
    const auto [a, b] = marchenko_pastur_edges(y);
    const auto density = [&](double x) {
        return x <= a || x >= b ? 0.0 : std::sqrt((b - x) * (x - a)) / (2 * std::numbers::pi * x * y);
    };
    double acc = 0, prev_x = a;
    const int steps = 200000;
    for (int k = 1; k <= steps; ++k) {
        const double x = a + (b - a) * k / steps;
        acc += 0.5 * (density(x) + density(prev_x)) * (x - prev_x);
        prev_x = x;
        if (k % 20000 == 0) CHECK(std::abs(f(x) - acc) <= 5e-3);
    }
}

TEST_CASE("iid population mode is summarized by the median") {
    EnsembleConfig e;
    e.kind = EnsembleConfig::Kind::SampleCovariance;
    e.mode = PopulationMode::IidFromH;
    e.population = AtomicDistribution::parse("0.5:1,0.5:2");
    LsdOptions o;
    o.sizes = {50, 200};
    o.reps = 3;
    const auto r = run_lsd_experiment(e, o);
    bool noted = false;
    for (const auto& n : r.notes) noted = noted || n.find("median") != std::string::npos;
    CHECK(noted);
    CHECK(r.entry("ks_largest_n_below_threshold[n=200]").estimate ==
          r.entry("median_ks[n=200]").estimate);
}

TEST_CASE("deformed ESD against the inverted solver density, both smoothed") {
    DeformedConfig d;
    d.n = 800;
    d.population = AtomicDistribution::parse("0.5:1,0.5:4");
    d.seed = 2026;
    const auto spec = eigenvalues_symmetric(sample_deformed_wigner(d));
    const double v = 1e-3;
    const Transform s = [&](cplx z) { return solve_deformed_wigner(d.population, UpperHalfPoint(z)).s; };
    const auto limit = cdf_from_transform(s, -9, 9, 72001, v);
    std::vector<double> grid;
    for (double x = -9; x <= 9; x += 0.005) grid.push_back(x);
    const auto smoothed = [&](double x) { return smoothed_esd_cdf(spec, x, v); };
    CHECK(sup_distance_on_grid(smoothed, limit, grid) <= 0.08);
    CHECK(ks_distance(StepCdf(spec), std::function<double(double)>(limit)) <= 0.08);
}

TEST_CASE("spiked experiment: summary from rows and determinism") {
    SpikedConfig c;
    c.levels = {{4.0, 1}, {1.0, 2}};
    c.n = 300;
    SpikedOptions o;
    o.reps = 150;
    o.seed = 3;
    o.nested_draws = 5000;
    const auto a = run_spiked_experiment(c, o);
    o.execution.threads = 4;
    const auto b = run_spiked_experiment(c, o);
    CHECK(csv_of(a) == csv_of(b));
    const auto rows = read_report_rows(csv_of(a));
    const auto again = summarize_spiked(rows, spiked_limit_description(c), spiked_nested_samples(c, o),
                                        o.tolerances);
    CHECK(csv_with(a, again) == csv_of(a));
    CHECK(a.columns.size() == 4);
    o.reps = 99;
    CHECK_THROWS_AS(run_spiked_experiment(c, o), InsufficientSamples);
    o.reps = 100;
    o.nested_draws = 1;
    CHECK_THROWS_AS(run_spiked_experiment(c, o), InvalidConfig);
}

TEST_CASE("nested block order statistics") {
    const LimitBlock one{5.0, 1, 50.0, 25.0};
    const auto s = sample_block_order_statistics(one, 100000, 1);
    REQUIRE(s.size() == 1);
    double m = 0, v = 0;
    for (double x : s[0]) m += x;
    m /= s[0].size();
    for (double x : s[0]) v += (x - m) * (x - m);
    v /= s[0].size() - 1;
    CHECK(v == doctest::Approx(50.0).epsilon(0.02));
    const LimitBlock three{1.0, 3, 2.0, 1.0};
    const auto t = sample_block_order_statistics(three, 1000, 2);
    REQUIRE(t.size() == 3);
    for (std::size_t r = 0; r < 1000; ++r) {
        CHECK(t[0][r] >= t[1][r]);
        CHECK(t[1][r] >= t[2][r]);
    }
    const LimitBlock zero{0.0, 2, 0.0, 0.0};
    for (const auto& col : sample_block_order_statistics(zero, 10, 3))
        for (double x : col) CHECK(x == 0.0);
}

TEST_CASE("spiked summary with a zero-variance block") {
    SpikedConfig c;
    c.levels = {{2.0, 1}, {0.0, 1}};
    c.n = 200;
    SpikedOptions o;
    o.reps = 100;
    o.nested_draws = 1000;
    const auto r = run_spiked_experiment(c, o);
    CHECK(r.entry("variance[t=2]").estimate == 0.0);
    CHECK(r.entry("variance[t=2]").pass);
}

TEST_CASE("CLT statistic is n times the derivative gap") {
    const EmpiricalSpectrum spec({-1.0, 0.0, 0.5, 1.5});
    const UpperHalfPoint z(0.2, 1.0);
    cplx direct = 0;
    for (double l : spec.values()) direct += 1.0 / ((l - z.value()) * (l - z.value()));
    direct = direct - 4.0 * semicircle_stieltjes_derivative(z);
    CHECK(std::abs(clt_statistic(spec, z) - direct) <= 1e-14);
}

TEST_CASE("CLT experiment: summary from rows, determinism, errors") {
    CltOptions o;
    o.n = 60;
    o.reps = 200;
    o.z_points = {UpperHalfPoint(0, 2), UpperHalfPoint(0.5, 1.5)};
    o.seed = 5;
    const auto a = run_clt_experiment(o);
    o.execution.threads = 2;
    CHECK(csv_of(run_clt_experiment(o)) == csv_of(a));
    const auto rows = read_report_rows(csv_of(a));
    const auto again = summarize_clt(rows, o.z_points, CltConstants::for_entry_law(o.entry_law), o.v0,
                                     o.tolerances);
    CHECK(csv_with(a, again) == csv_of(a));
    CHECK(a.entry("covariance_min_eigenvalue").estimate >= -1e-10);
    CHECK(a.columns.size() == 5);

    o.reps = 199;
    CHECK_THROWS_AS(run_clt_experiment(o), InsufficientSamples);
    o.reps = 200;
    o.z_points = {UpperHalfPoint(0, 0.2)};
    CHECK_THROWS_AS(run_clt_experiment(o), DomainError);
}

TEST_CASE("CLT summary flags a mean outside the band") {
    // Constant statistic: zero standard error, so only exact agreement passes.
    std::vector<std::vector<double>> rows;
    for (int r = 0; r < 300; ++r) rows.push_back({double(r), 1.0, 0.0});
    const auto s = summarize_clt(rows, {UpperHalfPoint(0, 2)}, CltConstants{}, 0.5, Tolerances{});
    CHECK_FALSE(s[0].pass);
    CHECK(s[1].pass);
}
