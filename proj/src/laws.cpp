#include "rmt/laws.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "rmt/errors.hpp"

namespace rmt {

namespace {

constexpr double kPi = std::numbers::pi;

struct FixedPointResult {
    cplx value;
    double residual;
    std::size_t iterations;
};

/// x <- x + damping * (F(x) - x), undamped until the step grows twice in a row.
/// Stops once residual(x) <= tol.
template <typename Map, typename Residual>
FixedPointResult iterate(Map&& map, Residual&& residual, cplx x, const SolverSettings& settings,
                         const char* what) {
    double relax = 1.0;
    double last_step = std::numeric_limits<double>::infinity();
    int growth = 0;
    for (std::size_t it = 1; it <= settings.max_iter; ++it) {
        const cplx next = map(x);
        const cplx step = next - x;
        const double size = std::abs(step);
        growth = size > last_step ? growth + 1 : 0;
        if (growth >= 2) relax = settings.damping;
        last_step = size;
        x += relax * step;
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
            throw NonConvergence(fmt::format("{} iteration diverged after {} steps", what, it));
        const double r = residual(x);
        if (r <= settings.tol) return {x, r, it};
    }
    throw NonConvergence(fmt::format("{} did not reach tol {} within {} iterations", what,
                                     settings.tol, settings.max_iter));
}

void check_population(const AtomicDistribution& h) {
    for (const auto& a : h.atoms())
        if (a.location < 0.0) throw InvalidConfig("population spectrum atoms must be nonnegative");
}

double real_step(cplx z, double rel) { return rel * std::max(1.0, std::abs(z)); }

}  // namespace

UpperHalfPoint::UpperHalfPoint(cplx z) : z_(z) {
    if (!(z.imag() > 0.0) || !std::isfinite(z.real()))
        throw DomainError(fmt::format("{}{:+}i is not in the open upper half plane", z.real(),
                                      z.imag()));
}

void SolverSettings::validate() const {
    if (!(tol > 0.0)) throw InvalidConfig("solver tol must be positive");
    if (max_iter < 1) throw InvalidConfig("solver max_iter must be >= 1");
    if (!(damping > 0.0 && damping <= 1.0)) throw InvalidConfig("damping must lie in (0, 1]");
}

// ---- semicircle ------------------------------------------------------------

cplx semicircle_stieltjes(UpperHalfPoint zp) {
    const cplx z = zp.value();
    cplx q = std::sqrt(z * z - 4.0);
    // Align q with z so that -(z + q)/2 is the large root without cancellation;
    // the roots multiply to 1.
    if ((std::conj(z) * q).real() < 0.0) q = -q;
    const cplx big = -(z + q) / 2.0;
    const cplx small = 1.0 / big;
    return small.imag() > 0.0 ? small : big;
}

cplx semicircle_stieltjes_derivative(UpperHalfPoint z) {
    const cplx s = semicircle_stieltjes(z);
    return -s / (2.0 * s + z.value());
}

double semicircle_cdf(double x) {
    if (x <= -2.0) return 0.0;
    if (x >= 2.0) return 1.0;
    return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * kPi) + std::asin(x / 2.0) / kPi;
}

double semicircle_density(double x) {
    if (std::abs(x) >= 2.0) return 0.0;
    return std::sqrt(4.0 - x * x) / (2.0 * kPi);
}

// ---- Silverstein -----------------------------------------------------------

double silverstein_residual(const AtomicDistribution& h, double y, cplx z, cplx m) {
    cplx rhs = 0.0;
    const cplx factor = 1.0 - y - y * z * m;
    for (const auto& a : h.atoms()) rhs += a.weight / (a.location * factor - z);
    return std::abs(m - rhs);
}

std::pair<double, double> marchenko_pastur_edges(double y) {
    const double r = std::sqrt(y);
    return {(1.0 - r) * (1.0 - r), (1.0 + r) * (1.0 + r)};
}

SilversteinSolution solve_silverstein(const AtomicDistribution& h, double y, UpperHalfPoint zp,
                                      const SolverSettings& settings) {
    settings.validate();
    check_population(h);
    if (!(y > 0.0) || !std::isfinite(y)) throw InvalidConfig("aspect ratio y must be positive");
    const cplx z = zp.value();
    const auto to_m = [&](cplx u) { return (u + (1.0 - y) / z) / y; };
    const auto map = [&](cplx u) {
        cplx acc = 0.0;
        for (const auto& a : h.atoms()) acc += a.weight * a.location / (1.0 + a.location * u);
        return -1.0 / (z - y * acc);
    };
    const auto residual = [&](cplx u) { return silverstein_residual(h, y, z, to_m(u)); };
    // u0 = -1/z is the companion value of m0 = -1/z, the solution for H = delta_0.
    const auto r = iterate(map, residual, -1.0 / z, settings, "Silverstein solver");
    if (!(r.value.imag() > 0.0))
        throw DomainViolation("Silverstein solution left D_y (-(1-y)/z + y m not in C+)");
    const cplx m = to_m(r.value);
    if (!(m.imag() > 0.0)) throw DomainViolation("Silverstein solution has Im m <= 0");
    return {m, r.residual, r.iterations};
}

// ---- deformed Wigner -------------------------------------------------------

double deformed_residual(const AtomicDistribution& h, cplx z, cplx g) {
    cplx rhs = 0.0;
    for (const auto& a : h.atoms()) rhs += a.weight * a.location / (-z - a.location * g);
    return std::abs(g - rhs);
}

DeformedSolution solve_deformed_wigner(const AtomicDistribution& h, UpperHalfPoint zp,
                                       const SolverSettings& settings) {
    settings.validate();
    check_population(h);
    const cplx z = zp.value();
    const auto map = [&](cplx g) {
        cplx rhs = 0.0;
        for (const auto& a : h.atoms()) rhs += a.weight * a.location / (-z - a.location * g);
        return rhs;
    };
    const auto residual = [&](cplx g) { return deformed_residual(h, z, g); };
    // g = 0 is the solution for H = delta_0.
    const auto r = iterate(map, residual, cplx(0.0), settings, "deformed Wigner solver");
    if (r.value.imag() < -settings.tol)
        throw DomainViolation("deformed Wigner solution has Im g < 0");
    const cplx s = -(1.0 + r.value * r.value) / z;
    if (!(s.imag() > 0.0)) throw DomainViolation("deformed Wigner solution has Im s <= 0");
    return {s, r.value, r.residual, r.iterations};
}

// ---- inversion and derivatives ---------------------------------------------

std::vector<double> invert_stieltjes(const Transform& transform, std::span<const double> x_grid,
                                     double v) {
    if (!(v > 0.0)) throw DomainError("inversion needs v > 0");
    std::vector<double> out;
    out.reserve(x_grid.size());
    for (double x : x_grid) out.push_back(transform(cplx(x, v)).imag() / kPi);
    return out;
}

std::vector<double> invert_stieltjes_richardson(const Transform& transform,
                                                std::span<const double> x_grid, double v) {
    auto fine = invert_stieltjes(transform, x_grid, v);
    const auto coarse = invert_stieltjes(transform, x_grid, 2.0 * v);
    for (std::size_t k = 0; k < fine.size(); ++k) fine[k] = 2.0 * fine[k] - coarse[k];
    return fine;
}

cplx transform_derivative(const Transform& transform, UpperHalfPoint zp) {
    const cplx z = zp.value();
    const double h = real_step(z, 1e-5);
    return (transform(z + h) - transform(z - h)) / (2.0 * h);
}

TabulatedCdf::TabulatedCdf(std::vector<double> xs, std::vector<double> fs)
    : xs_(std::move(xs)), fs_(std::move(fs)) {
    if (xs_.size() < 2 || xs_.size() != fs_.size())
        throw InvalidConfig("tabulated CDF needs at least two matching nodes");
}

double TabulatedCdf::operator()(double x) const {
    if (x <= xs_.front()) return fs_.front();
    if (x >= xs_.back()) return fs_.back();
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - xs_.begin());
    const double t = (x - xs_[k - 1]) / (xs_[k] - xs_[k - 1]);
    return fs_[k - 1] + t * (fs_[k] - fs_[k - 1]);
}

TabulatedCdf cdf_from_transform(const Transform& transform, double lo, double hi,
                                std::size_t points, double v) {
    if (points < 2 || !(hi > lo)) throw InvalidConfig("CDF table needs lo < hi and >= 2 points");
    std::vector<double> xs(points);
    for (std::size_t k = 0; k < points; ++k)
        xs[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
    const auto density = invert_stieltjes(transform, xs, v);
    std::vector<double> fs(points, 0.0);
    for (std::size_t k = 1; k < points; ++k)
        fs[k] = fs[k - 1] + 0.5 * (density[k] + density[k - 1]) * (xs[k] - xs[k - 1]);
    const double total = fs.back();
    if (!(total > 0.0)) throw InvalidConfig("inverted density has no mass on [lo, hi]");
    for (double& f : fs) f /= total;
    return TabulatedCdf(std::move(xs), std::move(fs));
}

// ---- CLT -------------------------------------------------------------------

CltConstants CltConstants::for_entry_law(EntryLaw law, double diag_variance) {
    CltConstants c;
    c.sigma2 = diag_variance;
    c.kappa = is_complex(law) ? 1.0 : 2.0;
    // E(|w|^2 - 1)^2 for each standardized law.
    double fourth_central = 0.0;
    switch (law) {
        case EntryLaw::GaussianReal: fourth_central = 2.0; break;        // E w^4 = 3
        case EntryLaw::GaussianComplex: fourth_central = 1.0; break;     // |w|^2 ~ Exp(1)
        case EntryLaw::Rademacher: fourth_central = 0.0; break;          // |w|^2 = 1
        case EntryLaw::UniformStandardized: fourth_central = 0.8; break; // E w^4 = 9/5
    }
    c.beta = fourth_central - c.kappa;
    return c;
}

void CltConstants::validate() const {
    if (kappa != 1.0 && kappa != 2.0) throw InvalidConfig("kappa must be 1 or 2");
    if (!(sigma2 > 0.0)) throw InvalidConfig("sigma2 must be positive");
}

namespace {

void check_region(UpperHalfPoint z, double v0) {
    if (z.im() < v0)
        throw DomainError(fmt::format("Im z = {} is below the CLT region bound v0 = {}", z.im(), v0));
}

cplx mean_function(cplx z, const CltConstants& c) {
    const UpperHalfPoint p(z);
    const cplx s = semicircle_stieltjes(p);
    const cplx ds = -s / (2.0 * s + z);
    return (1.0 + ds) * s * s * s * (c.sigma2 - 1.0 + (c.kappa - 1.0) * ds + c.beta * s * s);
}

cplx covariance_function(cplx z1, cplx z2, const CltConstants& c) {
    // Fixed argument order makes b(z1, z2) == b(z2, z1) bit for bit.
    if (z2.real() < z1.real() || (z2.real() == z1.real() && z2.imag() < z1.imag())) std::swap(z1, z2);
    const cplx s1 = semicircle_stieltjes(UpperHalfPoint(z1));
    const cplx s2 = semicircle_stieltjes(UpperHalfPoint(z2));
    const cplx ds1 = -s1 / (2.0 * s1 + z1);
    const cplx ds2 = -s2 / (2.0 * s2 + z2);
    const cplx gap = 1.0 - s1 * s2;
    if (std::abs(gap) < 1e-8) throw SingularityError("1 - s(z1) s(z2) vanishes");
    return ds1 * ds2 * (c.sigma2 - c.kappa + 2.0 * c.beta * s1 * s2 + c.kappa / (gap * gap));
}

}  // namespace

CltMean clt_mean_a(UpperHalfPoint z, const CltConstants& c, double v0) {
    c.validate();
    check_region(z, v0);
    const Transform a = [&c](cplx w) { return mean_function(w, c); };
    return {a(z.value()), transform_derivative(a, z)};
}

CltCovariance clt_cov_b(UpperHalfPoint z1, UpperHalfPoint z2, const CltConstants& c,
                        double v0) {
    c.validate();
    check_region(z1, v0);
    check_region(z2, v0);
    const cplx a = z1.value(), b = z2.value();
    const double h1 = real_step(a, 1e-4), h2 = real_step(b, 1e-4);
    // Grouped so that swapping (z1, z2) permutes only commuting terms.
    const cplx same = covariance_function(a + h1, b + h2, c) + covariance_function(a - h1, b - h2, c);
    const cplx cross = covariance_function(a + h1, b - h2, c) + covariance_function(a - h1, b + h2, c);
    const cplx mixed = (same - cross) / (4.0 * (h1 * h2));
    return {covariance_function(a, b, c), mixed};
}

std::vector<LimitBlock> spiked_limit_description(const SpikedConfig& config) {
    config.validate();
    std::vector<LimitBlock> out;
    for (const auto& l : config.levels) {
        const double l2 = l.eigenvalue * l.eigenvalue;
        out.push_back({l.eigenvalue, l.multiplicity, 2.0 * l2, l2});
    }
    return out;
}

}  // namespace rmt
