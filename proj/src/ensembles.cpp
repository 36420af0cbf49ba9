#include "rmt/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <fmt/format.h>

#include "rmt/errors.hpp"

namespace rmt {

namespace {

// Stream tags keep the population draw and the data draw of one config apart.
constexpr std::uint64_t kPopulationStream = 0x504f50;  // "POP"
constexpr std::uint64_t kDataStream = 0x444154;        // "DAT"

constexpr double kSqrt3 = 1.7320508075688772;
constexpr double kSqrtHalf = 0.7071067811865476;

template <typename T>
T draw_entry(EntryLaw law, Rng& rng);

template <>
double draw_entry<double>(EntryLaw law, Rng& rng) {
    return draw_real(law, rng);
}

template <>
cplx draw_entry<cplx>(EntryLaw law, Rng& rng) {
    return draw_complex(law, rng);
}

template <typename T>
Matrix<T> wigner_of(const WignerConfig& c) {
    Rng rng(c.seed);
    const double scale = 1.0 / std::sqrt(static_cast<double>(c.n));
    const double diag_sd = std::sqrt(c.diag_variance);
    Matrix<T> w(c.n, c.n);
    for (std::size_t i = 0; i < c.n; ++i) {
        w(i, i) = T(diag_sd * draw_real(c.entry_law, rng) * scale);
        for (std::size_t j = i + 1; j < c.n; ++j) {
            const T x = draw_entry<T>(c.entry_law, rng) * scale;
            w(i, j) = x;
            w(j, i) = conj_if(x);
        }
    }
    return w;
}

template <typename T>
Matrix<T> data_matrix(std::size_t p, std::size_t n, EntryLaw law, Rng& rng) {
    Matrix<T> x(p, n);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t k = 0; k < n; ++k) x(i, k) = draw_entry<T>(law, rng);
    return x;
}

template <typename T>
Matrix<T> covariance_of(const CovarianceConfig& c) {
    Rng pop_rng(derive_seed(c.seed, 0, kPopulationStream));
    Rng data_rng(derive_seed(c.seed, 0, kDataStream));
    const auto t = population_diagonal(c.population, c.p, c.mode, pop_rng);
    const auto x = data_matrix<T>(c.p, c.n, c.entry_law, data_rng);
    const double inv_n = 1.0 / static_cast<double>(c.n);
    Matrix<T> b(c.p, c.p);
    for (std::size_t i = 0; i < c.p; ++i) {
        const auto xi = x.row(i);
        for (std::size_t j = i; j < c.p; ++j) {
            const auto xj = x.row(j);
            T dot{};
            for (std::size_t k = 0; k < c.n; ++k) dot += xi[k] * conj_if(xj[k]);
            const T v = std::sqrt(t[i] * t[j]) * (dot * inv_n);
            b(i, j) = i == j ? T(std::real(v)) : v;
            if (i != j) b(j, i) = conj_if(v);
        }
    }
    return b;
}

template <typename T>
Matrix<T> deform(Matrix<T> w, const std::vector<double>& t) {
    for (std::size_t i = 0; i < w.rows(); ++i)
        for (std::size_t j = 0; j < w.cols(); ++j) w(i, j) = std::sqrt(t[i] * t[j]) * w(i, j);
    return w;
}

void check_population(const AtomicDistribution& h) {
    for (const auto& a : h.atoms())
        if (a.location < 0.0) throw InvalidConfig("population spectrum atoms must be nonnegative");
}

}  // namespace

bool is_complex(EntryLaw law) noexcept { return law == EntryLaw::GaussianComplex; }

EntryLaw parse_entry_law(std::string_view text) {
    if (text == "gauss-real") return EntryLaw::GaussianReal;
    if (text == "gauss-complex") return EntryLaw::GaussianComplex;
    if (text == "rademacher") return EntryLaw::Rademacher;
    if (text == "uniform") return EntryLaw::UniformStandardized;
    throw UsageError("unknown entry law '" + std::string(text) +
                     "' (expected gauss-real|gauss-complex|rademacher|uniform)");
}

std::string_view to_string(EntryLaw law) noexcept {
    switch (law) {
        case EntryLaw::GaussianReal: return "gauss-real";
        case EntryLaw::GaussianComplex: return "gauss-complex";
        case EntryLaw::Rademacher: return "rademacher";
        case EntryLaw::UniformStandardized: return "uniform";
    }
    return "?";
}

double draw_real(EntryLaw law, Rng& rng) {
    switch (law) {
        case EntryLaw::GaussianReal:
        case EntryLaw::GaussianComplex:
            return rng.normal();
        case EntryLaw::Rademacher:
            return rng.coin() ? 1.0 : -1.0;
        case EntryLaw::UniformStandardized:
            return kSqrt3 * rng.uniform_symmetric();
    }
    return 0.0;
}

cplx draw_complex(EntryLaw law, Rng& rng) {
    if (law == EntryLaw::GaussianComplex) {
        const double re = rng.normal() * kSqrtHalf;
        const double im = rng.normal() * kSqrtHalf;
        return {re, im};
    }
    return {draw_real(law, rng), 0.0};
}

EmpiricalSpectrum eigenvalues_symmetric(const HermitianMatrix& m) {
    return std::visit([](const auto& a) { return eigenvalues_symmetric(a); }, m);
}

std::size_t dimension(const HermitianMatrix& m) {
    return std::visit([](const auto& a) { return a.rows(); }, m);
}

HermitianMatrix sample_wigner(const WignerConfig& config) {
    if (config.n == 0) throw InvalidConfig("Wigner matrix needs n >= 1");
    if (!(config.diag_variance > 0.0)) throw InvalidConfig("diag_variance must be positive");
    if (is_complex(config.entry_law)) return wigner_of<cplx>(config);
    return wigner_of<double>(config);
}

std::vector<std::size_t> apportion(const AtomicDistribution& h, std::size_t total) {
    const auto atoms = h.atoms();
    std::vector<std::size_t> counts(atoms.size());
    std::vector<double> remainders(atoms.size());
    std::size_t assigned = 0;
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        const double quota = atoms[k].weight * static_cast<double>(total);
        counts[k] = static_cast<std::size_t>(std::floor(quota));
        remainders[k] = quota - static_cast<double>(counts[k]);
        assigned += counts[k];
    }
    // Guard against a quota rounding above total when weights sum to 1 + 1e-9.
    while (assigned > total) {
        auto it = std::max_element(counts.begin(), counts.end());
        --*it;
        --assigned;
    }
    std::vector<std::size_t> order(atoms.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
    for (std::size_t r = 0; assigned < total; r = (r + 1) % order.size()) {
        ++counts[order[r]];
        ++assigned;
    }
    return counts;
}

std::vector<double> population_diagonal(const AtomicDistribution& h, std::size_t count,
                                        PopulationMode mode, Rng& rng) {
    check_population(h);
    std::vector<double> t;
    t.reserve(count);
    if (mode == PopulationMode::Apportioned) {
        const auto counts = apportion(h, count);
        for (std::size_t k = 0; k < counts.size(); ++k)
            t.insert(t.end(), counts[k], h.atoms()[k].location);
        return t;
    }
    for (std::size_t i = 0; i < count; ++i) {
        const double u = rng.uniform();
        double acc = 0.0;
        double pick = h.atoms().back().location;
        for (const auto& a : h.atoms()) {
            acc += a.weight;
            if (u < acc) {
                pick = a.location;
                break;
            }
        }
        t.push_back(pick);
    }
    return t;
}

std::variant<RealMatrix, ComplexMatrix> sample_data_matrix(const CovarianceConfig& config) {
    Rng data_rng(derive_seed(config.seed, 0, kDataStream));
    if (is_complex(config.entry_law))
        return data_matrix<cplx>(config.p, config.n, config.entry_law, data_rng);
    return data_matrix<double>(config.p, config.n, config.entry_law, data_rng);
}

HermitianMatrix sample_sample_covariance(const CovarianceConfig& config) {
    if (config.p == 0 || config.n == 0) throw InvalidConfig("sample covariance needs p, n >= 1");
    check_population(config.population);
    if (is_complex(config.entry_law)) return covariance_of<cplx>(config);
    return covariance_of<double>(config);
}

HermitianMatrix sample_deformed_wigner(const DeformedConfig& config) {
    check_population(config.population);
    Rng pop_rng(derive_seed(config.seed, 0, kPopulationStream));
    const auto t = population_diagonal(config.population, config.n, config.mode, pop_rng);
    auto w = sample_wigner({config.n, config.entry_law, config.diag_variance, config.seed});
    return std::visit([&](auto& m) -> HermitianMatrix { return deform(std::move(m), t); }, w);
}

std::size_t SpikedConfig::dimension() const {
    std::size_t d = 0;
    for (const auto& l : levels) d += l.multiplicity;
    return d;
}

void SpikedConfig::validate() const {
    if (levels.empty()) throw InvalidConfig("spiked model needs at least one eigenvalue");
    for (std::size_t j = 0; j < levels.size(); ++j) {
        if (levels[j].multiplicity == 0) throw InvalidConfig("multiplicities must be >= 1");
        if (!(levels[j].eigenvalue >= 0.0)) throw InvalidConfig("eigenvalues must be >= 0");
        if (j > 0 && !(levels[j].eigenvalue < levels[j - 1].eigenvalue))
            throw InvalidConfig("population eigenvalues must be strictly decreasing");
    }
    const std::size_t d = dimension();
    if (rotation.rows() == 0) return;
    if (rotation.rows() != d || rotation.cols() != d)
        throw InvalidConfig(fmt::format("rotation must be {0}x{0}", d));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            double dot = 0.0;
            for (std::size_t k = 0; k < d; ++k) dot += rotation(k, i) * rotation(k, j);
            if (std::abs(dot - (i == j ? 1.0 : 0.0)) > 1e-10)
                throw InvalidConfig("rotation is not orthogonal within 1e-10");
        }
}

RealMatrix spiked_population(const SpikedConfig& config) {
    config.validate();
    const std::size_t d = config.dimension();
    std::vector<double> lambda;
    for (const auto& l : config.levels) lambda.insert(lambda.end(), l.multiplicity, l.eigenvalue);
    RealMatrix sigma(d, d);
    const bool identity = config.rotation.rows() == 0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            if (identity) {
                sigma(i, j) = i == j ? lambda[i] : 0.0;
                continue;
            }
            double s = 0.0;
            for (std::size_t k = 0; k < d; ++k)
                s += config.rotation(i, k) * lambda[k] * config.rotation(j, k);
            sigma(i, j) = s;
        }
    return sigma;
}

SpikedSample sample_spiked(const SpikedConfig& config) {
    config.validate();
    if (config.n <= 1) throw InsufficientSamples("sample covariance needs n >= 2 observations");
    const std::size_t d = config.dimension();
    const std::size_t n = config.n;
    std::vector<double> root;
    for (const auto& l : config.levels)
        root.insert(root.end(), l.multiplicity, std::sqrt(l.eigenvalue));
    const bool identity = config.rotation.rows() == 0;

    Rng rng(derive_seed(config.seed, 0, kDataStream));
    RealMatrix x(n, d);
    std::vector<double> z(d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < d; ++k) z[k] = root[k] * rng.normal();
        for (std::size_t r = 0; r < d; ++r) {
            if (identity) {
                x(i, r) = z[r];
                continue;
            }
            double s = 0.0;
            for (std::size_t k = 0; k < d; ++k) s += config.rotation(r, k) * z[k];
            x(i, r) = s;
        }
    }

    std::vector<double> mean(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t r = 0; r < d; ++r) mean[r] += x(i, r);
    for (double& m : mean) m /= static_cast<double>(n);

    RealMatrix s(d, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t r = 0; r < d; ++r) {
            const double a = x(i, r) - mean[r];
            for (std::size_t c = r; c < d; ++c) s(r, c) += a * (x(i, c) - mean[c]);
        }
    const double inv = 1.0 / static_cast<double>(n - 1);
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = r; c < d; ++c) {
            s(r, c) *= inv;
            s(c, r) = s(r, c);
        }
    return {std::move(s), spiked_population(config)};
}

double wick_covariance(const RealMatrix& sigma, std::size_t i, std::size_t j, std::size_t s,
                       std::size_t t) {
    const std::size_t d = sigma.rows();
    if (i >= d || j >= d || s >= d || t >= d)
        throw DomainError(fmt::format("index out of range for a {0}x{0} covariance", d));
    return sigma(i, s) * sigma(j, t) + sigma(i, t) * sigma(j, s);
}

}  // namespace rmt
