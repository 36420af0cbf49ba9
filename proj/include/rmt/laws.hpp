#pragma once

// Limiting spectral objects: the semicircle transform, the Silverstein
// equation for sample covariance matrices, the coupled (s, g) system for
// deformed Wigner matrices, Stieltjes inversion, numerical derivatives, and
// the mean/covariance functions of the Wigner linear-statistic CLT.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "rmt/ensembles.hpp"
#include "rmt/matrix.hpp"
#include "rmt/spectra.hpp"

namespace rmt {

/// A point of the open upper half plane.
class UpperHalfPoint {
public:
    /// DomainError unless Im z > 0.
    explicit UpperHalfPoint(cplx z);
    UpperHalfPoint(double re, double im) : UpperHalfPoint(cplx(re, im)) {}

    cplx value() const noexcept { return z_; }
    double re() const noexcept { return z_.real(); }
    double im() const noexcept { return z_.imag(); }

private:
    cplx z_;
};

struct SolverSettings {
    double tol = 1e-12;
    std::size_t max_iter = 100000;
    /// Relaxation applied once the step size grows twice in a row.
    double damping = 0.5;

    void validate() const;
};

using Transform = std::function<cplx(cplx)>;

// ---- semicircle ------------------------------------------------------------

/// Root of s^2 + z s + 1 = 0 in the upper half plane.
cplx semicircle_stieltjes(UpperHalfPoint z);
/// s'(z) = -s / (2s + z), from implicit differentiation of s^2 + z s + 1 = 0.
cplx semicircle_stieltjes_derivative(UpperHalfPoint z);
double semicircle_cdf(double x);
double semicircle_density(double x);

// ---- Silverstein equation --------------------------------------------------

struct SilversteinSolution {
    cplx m;
    double residual = 0.0;  // |m - int dH(t) / (t(1 - y - y z m) - z)|
    std::size_t iterations = 0;
};

/// Solves m = int dH(t) / (t (1 - y - y z m) - z) for the unique m with
/// -(1 - y)/z + y m in the upper half plane.
///
/// The iteration runs on that companion value u = -(1 - y)/z + y m, for which
/// the equation reads u = -1 / (z - y int t dH(t) / (1 + t u)) and the map
/// sends the upper half plane into itself; it stops on the residual of the
/// equation in m.
SilversteinSolution solve_silverstein(const AtomicDistribution& h, double y, UpperHalfPoint z,
                                      const SolverSettings& settings = {});

/// Residual of the Silverstein equation at a candidate m.
double silverstein_residual(const AtomicDistribution& h, double y, cplx z, cplx m);

/// Marchenko-Pastur support edges ((1 - sqrt y)^2, (1 + sqrt y)^2).
std::pair<double, double> marchenko_pastur_edges(double y);

// ---- deformed Wigner -------------------------------------------------------

struct DeformedSolution {
    cplx s;
    cplx g;
    double residual = 0.0;  // |g - int t dH(t) / (-z - t g)|
    std::size_t iterations = 0;
};

/// s = -(1 + g^2)/z with g = int t dH(t) / (-z - t g), Im g >= 0.
DeformedSolution solve_deformed_wigner(const AtomicDistribution& h, UpperHalfPoint z,
                                       const SolverSettings& settings = {});

double deformed_residual(const AtomicDistribution& h, cplx z, cplx g);

// ---- inversion and derivatives ---------------------------------------------

/// (1/pi) Im m(x_k + i v): the density convolved with a Cauchy kernel of half-width v.
std::vector<double> invert_stieltjes(const Transform& transform, std::span<const double> x_grid,
                                     double v);

/// 2 rho_v - rho_{2v}, cancelling the O(v) smoothing bias.
std::vector<double> invert_stieltjes_richardson(const Transform& transform,
                                                std::span<const double> x_grid, double v);

/// (m(z + h) - m(z - h)) / (2h), h = 1e-5 max(1, |z|).
cplx transform_derivative(const Transform& transform, UpperHalfPoint z);

/// Piecewise-linear CDF tabulated from a v-smoothed density.
class TabulatedCdf {
public:
    TabulatedCdf(std::vector<double> xs, std::vector<double> fs);
    double operator()(double x) const;
    std::span<const double> xs() const noexcept { return xs_; }
    std::span<const double> fs() const noexcept { return fs_; }

private:
    std::vector<double> xs_;
    std::vector<double> fs_;
};

/// Integrates (1/pi) Im m(x + iv) by the trapezoid rule over `points`
/// equispaced nodes of [lo, hi] and normalizes the result to end at 1.
TabulatedCdf cdf_from_transform(const Transform& transform, double lo, double hi,
                                std::size_t points, double v);

// ---- CLT for the derivative process of Wigner matrices ---------------------

struct CltConstants {
    double sigma2 = 1.0;  // diagonal variance
    double kappa = 2.0;   // 1 complex, 2 real
    double beta = 0.0;    // E(|w_12|^2 - 1)^2 - kappa

    static CltConstants for_entry_law(EntryLaw law, double diag_variance = 1.0);
    void validate() const;
};

/// Default lower bound v0 on Im z for the CLT region.
inline constexpr double kDefaultCltV0 = 0.5;

struct CltMean {
    cplx a;
    cplx a_prime;  // mean of the limiting derivative process
};

/// a(z) = (1 + s') s^3 [sigma2 - 1 + (kappa - 1) s' + beta s^2]; a' numerically.
/// DomainError when Im z < v0.
CltMean clt_mean_a(UpperHalfPoint z, const CltConstants& c, double v0 = kDefaultCltV0);

struct CltCovariance {
    cplx b;
    cplx d2b;  // covariance of the limiting derivative process
};

/// b(z1, z2) = s'(z1) s'(z2) [sigma2 - kappa + 2 beta s1 s2 + kappa (1 - s1 s2)^-2];
/// the mixed partial by nested central differences.
CltCovariance clt_cov_b(UpperHalfPoint z1, UpperHalfPoint z2, const CltConstants& c,
                        double v0 = kDefaultCltV0);

// ---- spiked covariance fluctuations ----------------------------------------

struct LimitBlock {
    double eigenvalue = 0.0;
    std::size_t size = 0;
    double diag_variance = 0.0;     // 2 lambda^2
    double offdiag_variance = 0.0;  // lambda^2
};

/// Per distinct population eigenvalue, the Gaussian symmetric block whose
/// ordered eigenvalues are the limit of sqrt(n)(l_t - lambda_j). Blocks are independent.
std::vector<LimitBlock> spiked_limit_description(const SpikedConfig& config);

}  // namespace rmt
