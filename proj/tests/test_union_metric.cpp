#include <doctest.h>

#include <cmath>
#include <vector>

#include "rmt/errors.hpp"
#include "rmt/random.hpp"
#include "rmt/union_metric.hpp"

using namespace rmt;

namespace {

UnionSpace line_family(std::size_t count, double eps_scale) {
    UnionSpace space([](std::size_t) { return std::size_t{1}; }, count);
    space.with_mapping([](std::size_t, std::span<const double> x) {
        return std::vector<double>(x.begin(), x.end());
    });
    space.with_epsilons([eps_scale](std::size_t n) { return eps_scale / static_cast<double>(n); });
    return space;
}

}  // namespace

TEST_CASE("delta of a point with itself is zero in every space") {
    UnionSpace space(parse_dimension_rule("cycle:1-4"), 5);
    Rng rng(3);
    for (std::size_t n = 0; n < 5; ++n) {
        TaggedPoint x{n, std::vector<double>(space.dim(n))};
        for (auto& c : x.coords) c = rng.normal();
        CHECK(delta(space, x, x) == 0.0);
    }
}

TEST_CASE("same-space branch takes the smaller of eps and rho") {
    // rho_0(phi x, phi y) = 0.2, eps_3 = 0.5, rho_3(x, y) = 0.3
    auto space = line_family(5, 1.5);
    space.with_metric([](std::size_t n, std::span<const double> x, std::span<const double> y) {
        return (n == 3 ? 1.5 : 1.0) * std::abs(x[0] - y[0]);
    });
    const TaggedPoint x{3, {0.0}}, y{3, {0.2}};
    CHECK(space.epsilon(3) == doctest::Approx(0.5));
    CHECK(space.rho(3, x.coords, y.coords) == doctest::Approx(0.3));
    CHECK(delta(space, x, y) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("cross-space branch takes the larger eps") {
    // rho_0 = 0.1, eps_1 = 0.5, eps_2 = 0.25
    const auto space = line_family(4, 0.5);
    const TaggedPoint x{1, {0.0}}, y{2, {0.1}};
    const auto t = delta_terms(space, x, y);
    CHECK(t.image == doctest::Approx(0.1));
    CHECK(t.separation == 0.5);
    CHECK(delta(space, x, y) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(delta(space, y, x) == delta(space, x, y));
}

TEST_CASE("points with the wrong coordinate count are rejected") {
    UnionSpace space(parse_dimension_rule("list:2,3,4"), 3);
    const TaggedPoint good{1, {0, 0, 0}}, bad{1, {0, 0}}, outside{3, {0}};
    CHECK_THROWS_AS(delta(space, good, bad), InvalidPoint);
    CHECK_THROWS_AS(delta(space, bad, good), InvalidPoint);
    CHECK_THROWS_AS(delta(space, good, outside), InvalidPoint);
}

TEST_CASE("default epsilons are 1/n with eps_0 = 0") {
    UnionSpace space([](std::size_t) { return std::size_t{2}; });
    CHECK(space.epsilon(0) == 0.0);
    CHECK(space.epsilon(1) == 1.0);
    CHECK(space.epsilon(4) == 0.25);
    CHECK_NOTHROW(space.check_epsilon_prefix(1000));
}

TEST_CASE("non-strict epsilon schedules are refused") {
    UnionSpace space([](std::size_t) { return std::size_t{1}; });
    space.with_epsilons([](std::size_t n) { return n < 3 ? 0.5 : 1.0 / static_cast<double>(n); });
    CHECK_THROWS_AS(space.check_epsilon_prefix(5), InvalidConfig);
    space.with_epsilons([](std::size_t) { return 0.0; });
    CHECK_THROWS_AS(space.check_epsilon_prefix(2), InvalidConfig);
}

TEST_CASE("mapping must land in S_0") {
    UnionSpace space(parse_dimension_rule("list:2,2"), 2);
    space.with_mapping([](std::size_t, std::span<const double>) { return std::vector<double>{1.0}; });
    CHECK_THROWS_AS(space.image(TaggedPoint{1, {0, 0}}), InvalidConfig);
}

TEST_CASE("default mapping is the identity on S_0 and has length d_0") {
    const std::vector<double> x{0.5, -1.0, 2.0};
    CHECK(default_base_mapping(0, x, 3) == x);
    const auto y = default_base_mapping(2, x, 5);
    REQUIRE(y.size() == 5);
    CHECK(y[0] == doctest::Approx(0.5 + std::sin(-1.0) / 3.0));
    CHECK(y[3] == doctest::Approx(0.5 + std::sin(-1.0) / 3.0));
}

TEST_CASE("dimension rules parse") {
    CHECK(parse_dimension_rule("const:3")(7) == 3);
    CHECK(parse_dimension_rule("5")(0) == 5);
    const auto list = parse_dimension_rule("list:1,4,2");
    CHECK(list(1) == 4);
    CHECK_THROWS_AS(list(3), InvalidConfig);
    const auto cycle = parse_dimension_rule("cycle:1-8");
    CHECK(cycle(0) == 1);
    CHECK(cycle(7) == 8);
    CHECK(cycle(8) == 1);
    CHECK_THROWS(parse_dimension_rule("zigzag:3"));
    CHECK_THROWS(parse_dimension_rule("const:0"));
}

TEST_CASE("trace: sequence inside S_k converges and never leaves S_k") {
    UnionSpace space(parse_dimension_rule("const:2"), 4);
    const TaggedPoint limit{2, {0.3, -0.7}};
    std::vector<TaggedPoint> seq;
    for (int n = 1; n <= 200; ++n)
        seq.push_back({2, {0.3 + 1.0 / n, -0.7}});
    const auto trace = convergence_trace(space, seq, limit);
    for (std::size_t n = 0; n < trace.size(); ++n) {
        CHECK(trace[n].space_index == 2);
        CHECK(trace[n].delta <= trace[n].rho0 + 1.0 / static_cast<double>(n + 1) + 1e-15);
        CHECK(trace[n].rho0 <= trace[n].delta);
        if (n > 0) CHECK(trace[n].delta < trace[n - 1].delta);
    }
    CHECK(trace.back().delta < 0.02);
}

TEST_CASE("trace: x_n in S_n with phi_n(x_n) = x_0 gives delta = eps_n") {
    const auto space = line_family(101, 1.0);
    const TaggedPoint limit{0, {1.25}};
    std::vector<TaggedPoint> seq;
    for (std::size_t n = 1; n <= 100; ++n) seq.push_back({n, {1.25}});
    const auto trace = convergence_trace(space, seq, limit);
    for (std::size_t i = 0; i < trace.size(); ++i) {
        CHECK(trace[i].rho0 == 0.0);
        CHECK(trace[i].delta == space.epsilon(i + 1));
        CHECK(trace[i].space_index == i + 1);
    }
}

TEST_CASE("trace: bounded space index cannot approach S_0") {
    // s(x_n) <= N = 3, limit in S_0: delta stays above min_{k<=N} eps_k.
    UnionSpace space(parse_dimension_rule("const:1"), 4);
    const TaggedPoint limit{0, {0.0}};
    std::vector<TaggedPoint> seq;
    for (std::size_t n = 1; n <= 300; ++n) seq.push_back({1 + n % 3, {1e-3 / static_cast<double>(n)}});
    const auto trace = convergence_trace(space, seq, limit);
    const double floor = space.epsilon(3);
    for (const auto& e : trace) {
        CHECK(e.delta >= floor);
        CHECK(e.rho0 <= e.delta);
    }
}

TEST_CASE("trace: once delta < eps_k / 2 the index equals k") {
    UnionSpace space(parse_dimension_rule("cycle:1-3"), 8);
    Rng rng(17);
    for (std::size_t k = 1; k < 8; ++k) {
        TaggedPoint limit{k, std::vector<double>(space.dim(k))};
        for (auto& c : limit.coords) c = rng.uniform_symmetric();
        std::vector<TaggedPoint> seq;
        for (int n = 0; n < 400; ++n) {
            const std::size_t s = rng.coin() ? k : static_cast<std::size_t>(rng.next_u64() % 8);
            TaggedPoint x{s, std::vector<double>(space.dim(s))};
            for (std::size_t i = 0; i < x.coords.size(); ++i)
                x.coords[i] = (s == k ? limit.coords[i] : 0.0) + 1e-3 * rng.normal();
            seq.push_back(std::move(x));
        }
        std::size_t close = 0;
        for (const auto& e : convergence_trace(space, seq, limit)) {
            if (e.delta < space.epsilon(k) / 2) {
                ++close;
                CHECK(e.space_index == k);
            }
        }
        CHECK(close > 0);
    }
}

TEST_CASE("axiom suite on a five-space family") {
    UnionSpace space(parse_dimension_rule("cycle:1-5"), 5);
    const auto r = metric_axiom_suite(space, 2024, 10000);
    CHECK(r.triples == 10000);
    CHECK(r.max_triangle_violation <= 1e-12);
    CHECK(r.max_symmetry_violation == 0.0);
    CHECK(r.zero_distance_failures == 0);
    CHECK(r.max_separation_violation <= 0.0);
    for (auto c : r.pattern_counts) CHECK(c > 0);
}

TEST_CASE("axiom suite with one space reduces to the base metric") {
    UnionSpace space(parse_dimension_rule("const:3"), 1);
    const auto r = metric_axiom_suite(space, 5, 2000);
    CHECK(r.max_triangle_violation <= 1e-12);
    CHECK(r.max_symmetry_violation == 0.0);
    CHECK(r.zero_distance_failures == 0);
    CHECK(r.pattern_counts[static_cast<std::size_t>(TriplePattern::AllSame)] == 2000);

    Rng rng(9);
    TaggedPoint x{0, {rng.normal(), rng.normal(), rng.normal()}};
    TaggedPoint y{0, {rng.normal(), rng.normal(), rng.normal()}};
    CHECK(delta(space, x, y) == euclidean_distance(x.coords, y.coords));
}

TEST_CASE("axiom suite is deterministic in its seed") {
    UnionSpace space(parse_dimension_rule("cycle:1-8"), 6);
    const auto a = metric_axiom_suite(space, 77, 3000);
    const auto b = metric_axiom_suite(space, 77, 3000);
    CHECK(a.max_triangle_violation == b.max_triangle_violation);
    CHECK(a.pattern_counts == b.pattern_counts);
}

TEST_CASE("axiom suite with the alternative metric and mapping") {
    UnionSpace space(parse_dimension_rule("cycle:2-4"), 6);
    space.with_metric([](std::size_t, std::span<const double> x, std::span<const double> y) {
        double m = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
        return m;
    });
    space.with_epsilons([](std::size_t n) { return std::pow(0.5, static_cast<double>(n)); });
    const auto r = metric_axiom_suite(space, 1, 5000);
    CHECK(r.max_triangle_violation <= 1e-12);
    CHECK(r.zero_distance_failures == 0);
}

TEST_CASE("axiom suite needs a finite family") {
    UnionSpace space([](std::size_t) { return std::size_t{1}; });
    CHECK_THROWS_AS(metric_axiom_suite(space, 1, 10), InvalidConfig);
}
