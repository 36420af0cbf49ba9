#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "rmt/matrix.hpp"

namespace rmt {

/// Finite atomic probability measure. Used for population spectra H and as a
/// generic step CDF.
class AtomicDistribution {
public:
    struct Atom {
        double weight = 0.0;
        double location = 0.0;
    };

    /// Throws InvalidConfig unless all weights are positive, locations finite
    /// and the weights sum to 1 within 1e-9.
    explicit AtomicDistribution(std::vector<Atom> atoms);

    static AtomicDistribution point_mass(double location);

    /// `weight:location` pairs separated by commas, e.g. `0.5:1.0,0.5:4.0`.
    static AtomicDistribution parse(std::string_view text);

    std::span<const Atom> atoms() const noexcept { return atoms_; }
    double min_location() const;
    double max_location() const;

    double cdf(double x) const;
    /// sum_k w_k / (t_k - z)
    cplx stieltjes(cplx z) const;

private:
    std::vector<Atom> atoms_;
};

/// Sorted eigenvalues of one matrix draw.
class EmpiricalSpectrum {
public:
    EmpiricalSpectrum() = default;
    /// Sorts ascending; throws InvalidConfig on non-finite values.
    explicit EmpiricalSpectrum(std::vector<double> eigenvalues);

    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }
    double min() const { return values_.front(); }
    double max() const { return values_.back(); }

private:
    std::vector<double> values_;
};

/// (1/n) #{lambda_i <= x}
double esd_cdf(const EmpiricalSpectrum& spec, double x);

/// (1/n) sum_i 1/(lambda_i - z); DomainError unless Im z > 0.
cplx stieltjes_of_spectrum(const EmpiricalSpectrum& spec, cplx z);

/// (1/n) sum_i 1/(lambda_i - z)^2, the exact z-derivative of the empirical transform.
cplx stieltjes_derivative_of_spectrum(const EmpiricalSpectrum& spec, cplx z);

/// Right-continuous step CDF given by its jump locations and the CDF value at each.
class StepCdf {
public:
    explicit StepCdf(const EmpiricalSpectrum& spec);
    explicit StepCdf(const AtomicDistribution& dist);
    /// Samples need not be sorted; each carries mass 1/size.
    static StepCdf from_samples(std::vector<double> samples);

    double operator()(double x) const;
    std::span<const double> jumps() const noexcept { return jumps_; }
    std::span<const double> levels() const noexcept { return levels_; }

private:
    StepCdf() = default;
    std::vector<double> jumps_;   // strictly increasing
    std::vector<double> levels_;  // CDF value at each jump
};

/// sup_x |F(x) - G(x)|, exact: both are constant between the union of jumps.
double ks_distance(const StepCdf& f, const StepCdf& g);

/// sup_x |F(x) - G(x)| for a step F and a continuous nondecreasing G, exact:
/// G is compared with both F(x_k) and F(x_k-) at every jump x_k.
double ks_distance(const StepCdf& f, const std::function<double(double)>& g);

/// max_k |F(x_k) - G(x_k)| over a grid. Only for two continuous CDFs, where
/// no exact step-point formula exists.
double sup_distance_on_grid(const std::function<double(double)>& f,
                            const std::function<double(double)>& g,
                            std::span<const double> grid);

/// CDF of the ESD convolved with a Cauchy kernel of half-width v, i.e. the
/// integral of (1/pi) Im m(t + iv) up to x.
double smoothed_esd_cdf(const EmpiricalSpectrum& spec, double x, double v);

// ---- eigenvalues -----------------------------------------------------------

/// All eigenvalues, ascending. Householder tridiagonalization + implicit-shift QL.
/// Throws ContractViolation unless the input is Hermitian within 1e-12 relative.
EmpiricalSpectrum eigenvalues_symmetric(const RealMatrix& a);
/// Complex Hermitian input is solved through its real symmetric embedding
/// [[Re A, -Im A], [Im A, Re A]], whose spectrum is that of A doubled.
EmpiricalSpectrum eigenvalues_symmetric(const ComplexMatrix& a);

struct EigenDecomposition {
    std::vector<double> values;  // ascending
    RealMatrix vectors;          // column k belongs to values[k]
};

struct ComplexEigenDecomposition {
    std::vector<double> values;
    ComplexMatrix vectors;
};

EigenDecomposition eigen_decompose(const RealMatrix& a);
ComplexEigenDecomposition eigen_decompose(const ComplexMatrix& a);

/// ||A v - lambda v|| for column k of the decomposition.
double eigen_residual(const RealMatrix& a, const EigenDecomposition& dec, std::size_t k);
double eigen_residual(const ComplexMatrix& a, const ComplexEigenDecomposition& dec, std::size_t k);

/// Largest |A_ij - conj(A_ji)| relative to max |A_ij|.
double hermitian_asymmetry(const RealMatrix& a);
double hermitian_asymmetry(const ComplexMatrix& a);

// ---- CSV -------------------------------------------------------------------

/// Header `eigenvalue`, one value per line.
void write_spectrum_csv(std::ostream& os, const EmpiricalSpectrum& spec);
/// Header `x,F`.
void write_cdf_csv(std::ostream& os, std::span<const double> xs, std::span<const double> fs);

}  // namespace rmt
