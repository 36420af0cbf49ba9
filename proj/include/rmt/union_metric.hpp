#pragma once

// Metric on the disjoint union T of a family of spaces S_0, S_1, S_2, ...
//
//   delta(x, y) = rho_0(phi(x), phi(y))
//               + { eps_{s(x)} min rho_{s(x)}(x, y)   if s(x) == s(y)
//                 { eps_{s(x)} max eps_{s(y)}         otherwise
//
// where s(x) is the index of the space holding x, phi maps every S_n into S_0
// (phi_0 = id), and eps_0 = 0 < ... < eps_2 < eps_1 with eps_n -> 0.
// Component spaces here are R^{d_n} with pluggable metrics.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace rmt {

struct TaggedPoint {
    std::size_t space_index = 0;
    std::vector<double> coords;

    /// Exact representation equality: same space, bitwise-equal coordinates.
    bool operator==(const TaggedPoint&) const = default;
};

using DimensionRule = std::function<std::size_t(std::size_t)>;
using ComponentMetric =
    std::function<double(std::size_t, std::span<const double>, std::span<const double>)>;
using BaseMapping = std::function<std::vector<double>(std::size_t, std::span<const double>)>;
using EpsilonSchedule = std::function<double(std::size_t)>;

double euclidean_distance(std::span<const double> x, std::span<const double> y);

/// phi_n(x)_i = x[i mod d_n] + sin(x[(i+1) mod d_n]) / (n+1) for n >= 1; identity for n = 0.
/// Continuous, and not injective across spaces, which is what makes the
/// separation term matter.
std::vector<double> default_base_mapping(std::size_t n, std::span<const double> x,
                                         std::size_t base_dim);

class UnionSpace {
public:
    /// `space_count` bounds the family when it is finite; nullopt means the
    /// rule is queried lazily for any index.
    explicit UnionSpace(DimensionRule dims, std::optional<std::size_t> space_count = std::nullopt);

    UnionSpace& with_metric(ComponentMetric metric);
    UnionSpace& with_mapping(BaseMapping mapping);
    /// Rule for n >= 1. eps_0 is always 0.
    UnionSpace& with_epsilons(EpsilonSchedule eps);

    std::size_t dim(std::size_t n) const;
    double epsilon(std::size_t n) const;
    double rho(std::size_t n, std::span<const double> x, std::span<const double> y) const;
    std::optional<std::size_t> space_count() const noexcept { return space_count_; }

    /// phi(x), checked to have length d_0.
    std::vector<double> image(const TaggedPoint& x) const;

    /// Throws InvalidPoint on unknown space or coordinate-length mismatch.
    void validate(const TaggedPoint& x) const;

    /// Throws InvalidConfig unless eps_1 > eps_2 > ... > eps_{count-1} > 0.
    void check_epsilon_prefix(std::size_t count) const;

private:
    DimensionRule dims_;
    std::optional<std::size_t> space_count_;
    ComponentMetric metric_;
    BaseMapping mapping_;
    EpsilonSchedule eps_;
};

/// The two summands of delta: image distance in S_0 and the separation term.
struct DeltaTerms {
    double image = 0.0;
    double separation = 0.0;
    double total() const noexcept { return image + separation; }
};

DeltaTerms delta_terms(const UnionSpace& space, const TaggedPoint& x, const TaggedPoint& y);
double delta(const UnionSpace& space, const TaggedPoint& x, const TaggedPoint& y);

struct TraceEntry {
    std::size_t space_index = 0;
    double delta = 0.0;
    double rho0 = 0.0;  // rho_0(phi(x_n), phi(limit))
};

/// Per-element (s(x_n), delta(x_n, limit), rho_0(phi(x_n), phi(limit))).
std::vector<TraceEntry> convergence_trace(const UnionSpace& space,
                                          std::span<const TaggedPoint> seq,
                                          const TaggedPoint& limit);

/// Space-index patterns of a triple (x, y, z).
enum class TriplePattern : std::size_t {
    AllSame = 0,      // s(x) = s(y) = s(z)
    FirstPair = 1,    // s(x) = s(y) != s(z)
    SecondPair = 2,   // s(x) != s(y) = s(z)
    OuterPair = 3,    // s(x) = s(z) != s(y)
    AllDistinct = 4,  // pairwise different
};
inline constexpr std::size_t kTriplePatternCount = 5;

struct AxiomReport {
    std::size_t triples = 0;
    double max_triangle_violation = 0.0;
    double max_symmetry_violation = 0.0;
    /// Pairs with delta == 0 but x != y, or delta != 0 with x == y.
    std::size_t zero_distance_failures = 0;
    /// Triangle slack of the separation term alone, over all-distinct triples.
    double max_separation_violation = 0.0;
    std::array<std::size_t, kTriplePatternCount> pattern_counts{};
};

/// Draws `count` seeded random triples cycling through every space-index
/// pattern the family admits and records the worst axiom violations.
/// Requires a finite family.
AxiomReport metric_axiom_suite(const UnionSpace& space, std::uint64_t sampler_seed,
                               std::size_t count);

/// Parses `const:<d>`, `list:<d0>,<d1>,...`, `cycle:<lo>-<hi>` (d_n = lo + n mod (hi-lo+1)),
/// or a bare integer (constant).
DimensionRule parse_dimension_rule(std::string_view text);

}  // namespace rmt
