#include "rmt/union_metric.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "rmt/errors.hpp"
#include "rmt/random.hpp"

namespace rmt {

double euclidean_distance(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return std::sqrt(s);
}

std::vector<double> default_base_mapping(std::size_t n, std::span<const double> x,
                                         std::size_t base_dim) {
    if (n == 0) return {x.begin(), x.end()};
    std::vector<double> out(base_dim);
    const std::size_t d = x.size();
    const double scale = 1.0 / static_cast<double>(n + 1);
    for (std::size_t i = 0; i < base_dim; ++i)
        out[i] = x[i % d] + std::sin(x[(i + 1) % d]) * scale;
    return out;
}

UnionSpace::UnionSpace(DimensionRule dims, std::optional<std::size_t> space_count)
    : dims_(std::move(dims)), space_count_(space_count) {
    if (space_count_ && *space_count_ == 0) throw InvalidConfig("union space needs at least S_0");
    metric_ = [](std::size_t, std::span<const double> x, std::span<const double> y) {
        return euclidean_distance(x, y);
    };
    eps_ = [](std::size_t n) { return 1.0 / static_cast<double>(n); };
}

UnionSpace& UnionSpace::with_metric(ComponentMetric metric) {
    metric_ = std::move(metric);
    return *this;
}

UnionSpace& UnionSpace::with_mapping(BaseMapping mapping) {
    mapping_ = std::move(mapping);
    return *this;
}

UnionSpace& UnionSpace::with_epsilons(EpsilonSchedule eps) {
    eps_ = std::move(eps);
    return *this;
}

std::size_t UnionSpace::dim(std::size_t n) const {
    if (space_count_ && n >= *space_count_)
        throw InvalidPoint("space index " + std::to_string(n) + " outside family of " +
                           std::to_string(*space_count_));
    const std::size_t d = dims_(n);
    if (d == 0) throw InvalidConfig("component dimension must be positive");
    return d;
}

double UnionSpace::epsilon(std::size_t n) const { return n == 0 ? 0.0 : eps_(n); }

double UnionSpace::rho(std::size_t n, std::span<const double> x, std::span<const double> y) const {
    return metric_(n, x, y);
}

std::vector<double> UnionSpace::image(const TaggedPoint& x) const {
    if (x.space_index == 0) return x.coords;
    auto out = mapping_ ? mapping_(x.space_index, x.coords)
                        : default_base_mapping(x.space_index, x.coords, dim(0));
    if (out.size() != dim(0))
        throw InvalidConfig("mapping into S_0 returned " + std::to_string(out.size()) +
                            " coordinates, expected " + std::to_string(dim(0)));
    return out;
}

void UnionSpace::validate(const TaggedPoint& x) const {
    const std::size_t d = dim(x.space_index);
    if (x.coords.size() != d)
        throw InvalidPoint("point in S_" + std::to_string(x.space_index) + " has " +
                           std::to_string(x.coords.size()) + " coordinates, space has " +
                           std::to_string(d));
}

void UnionSpace::check_epsilon_prefix(std::size_t count) const {
    double prev = 0.0;
    for (std::size_t n = 1; n < count; ++n) {
        const double e = epsilon(n);
        if (!(e > 0.0) || !std::isfinite(e))
            throw InvalidConfig("eps_" + std::to_string(n) + " must be positive and finite");
        if (n > 1 && !(e < prev))
            throw InvalidConfig("eps must strictly decrease; eps_" + std::to_string(n) +
                                " >= eps_" + std::to_string(n - 1));
        prev = e;
    }
}

DeltaTerms delta_terms(const UnionSpace& space, const TaggedPoint& x, const TaggedPoint& y) {
    space.validate(x);
    space.validate(y);
    DeltaTerms t;
    const auto px = space.image(x);
    const auto py = space.image(y);
    t.image = space.rho(0, px, py);
    if (x.space_index == y.space_index) {
        const std::size_t n = x.space_index;
        // eps_0 = 0 kills the term on S_0, where the image distance already is rho_0.
        t.separation = n == 0 ? 0.0 : std::min(space.epsilon(n), space.rho(n, x.coords, y.coords));
    } else {
        t.separation = std::max(space.epsilon(x.space_index), space.epsilon(y.space_index));
    }
    return t;
}

double delta(const UnionSpace& space, const TaggedPoint& x, const TaggedPoint& y) {
    return delta_terms(space, x, y).total();
}

std::vector<TraceEntry> convergence_trace(const UnionSpace& space,
                                          std::span<const TaggedPoint> seq,
                                          const TaggedPoint& limit) {
    space.validate(limit);
    const auto limit_image = space.image(limit);
    std::vector<TraceEntry> out;
    out.reserve(seq.size());
    for (const auto& x : seq) {
        TraceEntry e;
        e.space_index = x.space_index;
        e.delta = delta(space, x, limit);
        e.rho0 = space.rho(0, space.image(x), limit_image);
        out.push_back(e);
    }
    return out;
}

namespace {

TaggedPoint random_point(const UnionSpace& space, std::size_t n, Rng& rng) {
    static constexpr double kScales[] = {1e-3, 1e-1, 1.0, 10.0};
    const double scale = kScales[rng.next_u64() % 4];
    TaggedPoint p{n, std::vector<double>(space.dim(n))};
    for (double& c : p.coords) c = scale * rng.uniform_symmetric();
    return p;
}

/// A point in space n that is usually close to `anchor` when it lives in the
/// same space, so that both branches of eps min rho get exercised.
TaggedPoint near_point(const UnionSpace& space, std::size_t n, const TaggedPoint& anchor,
                       Rng& rng) {
    if (anchor.space_index != n) return random_point(space, n, rng);
    switch (rng.next_u64() % 4) {
        case 0:
            return anchor;  // exact duplicate
        case 1:
        case 2: {
            const double scale = std::pow(10.0, -4.0 * rng.uniform());
            TaggedPoint p = anchor;
            for (double& c : p.coords) c += scale * rng.uniform_symmetric();
            return p;
        }
        default:
            return random_point(space, n, rng);
    }
}

std::size_t draw_other(std::size_t k, std::span<const std::size_t> exclude, Rng& rng) {
    for (;;) {
        const std::size_t n = rng.next_u64() % k;
        if (std::find(exclude.begin(), exclude.end(), n) == exclude.end()) return n;
    }
}

std::size_t pair_failure(const TaggedPoint& a, const TaggedPoint& b, double d) {
    return ((a == b) ? (d != 0.0) : (d == 0.0)) ? 1 : 0;
}

}  // namespace

AxiomReport metric_axiom_suite(const UnionSpace& space, std::uint64_t sampler_seed,
                               std::size_t count) {
    if (count == 0) throw InvalidConfig("metric axiom suite needs count >= 1");
    if (!space.space_count())
        throw InvalidConfig("metric axiom suite needs a finite family of spaces");
    const std::size_t k = *space.space_count();
    space.check_epsilon_prefix(k);

    std::vector<TriplePattern> patterns{TriplePattern::AllSame};
    if (k >= 2) {
        patterns.push_back(TriplePattern::FirstPair);
        patterns.push_back(TriplePattern::SecondPair);
        patterns.push_back(TriplePattern::OuterPair);
    }
    if (k >= 3) patterns.push_back(TriplePattern::AllDistinct);

    AxiomReport report;
    Rng rng(derive_seed(sampler_seed, 0, 0x6d6574726963ULL));
    for (std::size_t i = 0; i < count; ++i) {
        const TriplePattern pattern = patterns[i % patterns.size()];
        const std::size_t sx = rng.next_u64() % k;
        std::size_t sy = sx, sz = sx;
        switch (pattern) {
            case TriplePattern::AllSame:
                break;
            case TriplePattern::FirstPair:
                sz = draw_other(k, std::array{sx}, rng);
                break;
            case TriplePattern::SecondPair:
                sy = sz = draw_other(k, std::array{sx}, rng);
                break;
            case TriplePattern::OuterPair:
                sy = draw_other(k, std::array{sx}, rng);
                break;
            case TriplePattern::AllDistinct:
                sy = draw_other(k, std::array{sx}, rng);
                sz = draw_other(k, std::array{sx, sy}, rng);
                break;
        }
        const TaggedPoint x = random_point(space, sx, rng);
        const TaggedPoint y = near_point(space, sy, x, rng);
        const TaggedPoint z = near_point(space, sz, y, rng);

        const DeltaTerms xy = delta_terms(space, x, y);
        const DeltaTerms yz = delta_terms(space, y, z);
        const DeltaTerms xz = delta_terms(space, x, z);
        const double dxy = xy.total(), dyz = yz.total(), dxz = xz.total();

        report.max_triangle_violation =
            std::max({report.max_triangle_violation, dxz - dxy - dyz, dxy - dxz - dyz,
                      dyz - dxy - dxz});
        report.max_symmetry_violation =
            std::max({report.max_symmetry_violation, std::abs(dxy - delta(space, y, x)),
                      std::abs(dyz - delta(space, z, y)), std::abs(dxz - delta(space, z, x))});
        report.zero_distance_failures +=
            pair_failure(x, y, dxy) + pair_failure(y, z, dyz) + pair_failure(x, z, dxz);
        if (pattern == TriplePattern::AllDistinct)
            report.max_separation_violation =
                std::max(report.max_separation_violation,
                         xz.separation - xy.separation - yz.separation);
        ++report.pattern_counts[static_cast<std::size_t>(pattern)];
        ++report.triples;
    }
    return report;
}

namespace {

std::size_t parse_size(std::string_view s) {
    std::size_t v = 0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end || s.empty())
        throw UsageError("expected a nonnegative integer, got '" + std::string(s) + "'");
    return v;
}

std::size_t parse_dim(std::string_view s) {
    const std::size_t d = parse_size(s);
    if (d == 0) throw UsageError("component dimensions must be positive");
    return d;
}

}  // namespace

DimensionRule parse_dimension_rule(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        const std::size_t d = parse_dim(text);
        return [d](std::size_t) { return d; };
    }
    const auto kind = text.substr(0, colon);
    const auto body = text.substr(colon + 1);
    if (kind == "const") {
        const std::size_t d = parse_dim(body);
        return [d](std::size_t) { return d; };
    }
    if (kind == "list") {
        std::vector<std::size_t> dims;
        std::size_t start = 0;
        while (start <= body.size()) {
            const auto comma = body.find(',', start);
            const auto piece = body.substr(start, comma == std::string_view::npos
                                                      ? std::string_view::npos
                                                      : comma - start);
            dims.push_back(parse_dim(piece));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        return [dims](std::size_t n) {
            if (n >= dims.size())
                throw InvalidConfig("dimension list has no entry for S_" + std::to_string(n));
            return dims[n];
        };
    }
    if (kind == "cycle") {
        const auto dash = body.find('-');
        if (dash == std::string_view::npos) throw UsageError("cycle rule needs <lo>-<hi>");
        const std::size_t lo = parse_size(body.substr(0, dash));
        const std::size_t hi = parse_size(body.substr(dash + 1));
        if (lo == 0 || hi < lo) throw UsageError("cycle rule needs 1 <= lo <= hi");
        return [lo, hi](std::size_t n) { return lo + n % (hi - lo + 1); };
    }
    throw UsageError("unknown dimension rule '" + std::string(text) + "'");
}

}  // namespace rmt
