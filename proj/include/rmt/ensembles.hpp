#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include "rmt/matrix.hpp"
#include "rmt/random.hpp"
#include "rmt/spectra.hpp"

namespace rmt {

/// Standardized entry distributions: mean 0, E|w|^2 = 1, finite fourth moment.
enum class EntryLaw {
    GaussianReal,
    GaussianComplex,  // independent real/imaginary parts of variance 1/2, so E w^2 = 0
    Rademacher,
    UniformStandardized,  // uniform on [-sqrt 3, sqrt 3]
};

bool is_complex(EntryLaw law) noexcept;
/// `gauss-real|gauss-complex|rademacher|uniform`
EntryLaw parse_entry_law(std::string_view text);
std::string_view to_string(EntryLaw law) noexcept;

/// One real draw from a real law. For the complex law this is a standard
/// normal (used for real diagonal entries).
double draw_real(EntryLaw law, Rng& rng);
cplx draw_complex(EntryLaw law, Rng& rng);

/// A Hermitian matrix that is real symmetric or complex Hermitian depending on the law.
using HermitianMatrix = std::variant<RealMatrix, ComplexMatrix>;

EmpiricalSpectrum eigenvalues_symmetric(const HermitianMatrix& m);
std::size_t dimension(const HermitianMatrix& m);

struct WignerConfig {
    std::size_t n = 1;
    EntryLaw entry_law = EntryLaw::GaussianReal;
    /// E|w_ii|^2.
    double diag_variance = 1.0;
    std::uint64_t seed = 0;
};

/// How the population matrix T is built from H.
enum class PopulationMode {
    /// T = diag of the atoms, counts proportional to the weights (largest remainder).
    Apportioned,
    /// T = diag of iid draws from H; its ESD tends to H only in probability.
    IidFromH,
};

struct CovarianceConfig {
    std::size_t p = 1;
    std::size_t n = 1;
    AtomicDistribution population = AtomicDistribution::point_mass(1.0);
    EntryLaw entry_law = EntryLaw::GaussianReal;
    std::uint64_t seed = 0;
    PopulationMode mode = PopulationMode::Apportioned;
};

struct DeformedConfig {
    std::size_t n = 1;
    AtomicDistribution population = AtomicDistribution::point_mass(1.0);
    EntryLaw entry_law = EntryLaw::GaussianReal;
    double diag_variance = 1.0;
    std::uint64_t seed = 0;
    PopulationMode mode = PopulationMode::Apportioned;
};

struct SpikedConfig {
    struct Level {
        double eigenvalue = 1.0;
        std::size_t multiplicity = 1;
    };
    std::vector<Level> levels;  // strictly decreasing eigenvalues, all >= 0
    /// Orthogonal V; empty means the identity.
    RealMatrix rotation;
    std::size_t n = 2;
    std::uint64_t seed = 0;

    std::size_t dimension() const;
    void validate() const;
};

/// Entries w_ij / sqrt(n); strict upper triangle from the law, diagonal real
/// with variance diag_variance. Draws are consumed row by row over i <= j.
HermitianMatrix sample_wigner(const WignerConfig& config);

/// Diagonal of T for `count` rows. Apportioned mode is deterministic.
std::vector<double> population_diagonal(const AtomicDistribution& h, std::size_t count,
                                        PopulationMode mode, Rng& rng);

/// Largest-remainder counts of `total` items over the weights of `h`.
std::vector<std::size_t> apportion(const AtomicDistribution& h, std::size_t total);

/// The p x n data matrix X that sample_sample_covariance draws for `config`.
std::variant<RealMatrix, ComplexMatrix> sample_data_matrix(const CovarianceConfig& config);

/// B = (1/n) T^{1/2} X X^* T^{1/2}, X p x n with iid entries.
HermitianMatrix sample_sample_covariance(const CovarianceConfig& config);

/// T^{1/2} W T^{1/2} with W = sample_wigner (which already carries the n^{-1/2}).
HermitianMatrix sample_deformed_wigner(const DeformedConfig& config);

struct SpikedSample {
    RealMatrix sample_covariance;  // S_n, divisor n - 1, mean-centred
    RealMatrix population;         // Sigma = V diag(lambda_j I_{d_j}) V'
};

/// n iid N(0, Sigma) vectors and their sample covariance.
SpikedSample sample_spiked(const SpikedConfig& config);

/// Population covariance V diag(lambda_j I_{d_j}) V'.
RealMatrix spiked_population(const SpikedConfig& config);

/// Cov(X_i X_j, X_s X_t) for X ~ N(0, Sigma): Sigma_is Sigma_jt + Sigma_it Sigma_js.
double wick_covariance(const RealMatrix& sigma, std::size_t i, std::size_t j, std::size_t s,
                       std::size_t t);

}  // namespace rmt
