#include "rmt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "rmt/errors.hpp"

namespace rmt {

namespace {

constexpr std::uint64_t kLsdStream = 0x4c5344;         // "LSD"
constexpr std::uint64_t kSpikedStream = 0x535049;      // "SPI"
constexpr std::uint64_t kNestedStream = 0x4e4553;      // "NES"
constexpr std::uint64_t kCltStream = 0x434c54;         // "CLT"

double mean_of(std::span<const double> x) {
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

/// Unbiased sample variance; 0 for a single value.
double variance_of(std::span<const double> x) {
    if (x.size() < 2) return 0.0;
    const double m = mean_of(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
}

double std_error_of_mean(std::span<const double> x) {
    return std::sqrt(variance_of(x) / static_cast<double>(x.size()));
}

double median_of(std::vector<double> x) {
    std::sort(x.begin(), x.end());
    const std::size_t n = x.size();
    return n % 2 ? x[n / 2] : 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

std::vector<double> column(const std::vector<std::vector<double>>& rows, std::size_t c) {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.at(c));
    return out;
}

bool within(double estimate, double theory, double se, double multiple) {
    const double gap = std::abs(estimate - theory);
    if (se == 0.0) return gap <= 1e-12;
    return gap <= multiple * se;
}

std::string format_number(double x) { return fmt::format("{}", x); }

}  // namespace

// ---- report ----------------------------------------------------------------

bool ExperimentReport::passed() const {
    return std::all_of(summary.begin(), summary.end(), [](const auto& e) { return e.pass; });
}

const SummaryEntry& ExperimentReport::entry(std::string_view statistic) const {
    for (const auto& e : summary)
        if (e.statistic == statistic) return e;
    throw DomainError(fmt::format("report {} has no statistic '{}'", experiment_name, statistic));
}

void write_report_csv(std::ostream& os, const ExperimentReport& report) {
    os << "key,value\n";
    os << "experiment," << report.experiment_name << '\n';
    os << "master_seed," << report.master_seed << '\n';
    os << "tolerances," << Tolerances::kVersion << '\n';
    for (const auto& note : report.notes) os << "note," << note << '\n';
    os << '\n';

    for (std::size_t c = 0; c < report.columns.size(); ++c)
        os << (c ? "," : "") << report.columns[c];
    os << '\n';
    for (const auto& row : report.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_number(row[c]);
        os << '\n';
    }
    os << '\n';

    os << "statistic,estimate,std_error,theory,pass\n";
    for (const auto& e : report.summary) {
        os << e.statistic << ',' << format_number(e.estimate) << ',' << format_number(e.std_error)
           << ',' << (e.theory ? format_number(*e.theory) : std::string()) << ','
           << (e.pass ? 1 : 0) << '\n';
    }
}

std::vector<std::vector<double>> read_report_rows(std::string_view csv) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < csv.size()) {
        const auto end = csv.find('\n', start);
        lines.push_back(csv.substr(start, end == std::string_view::npos ? csv.size() - start
                                                                      : end - start));
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    // Second block: skip header block, blank line, column header.
    std::size_t i = 0;
    while (i < lines.size() && !lines[i].empty()) ++i;
    i += 2;
    std::vector<std::vector<double>> rows;
    for (; i < lines.size() && !lines[i].empty(); ++i) {
        std::vector<double> row;
        std::size_t pos = 0;
        const auto line = lines[i];
        while (pos <= line.size()) {
            const auto comma = line.find(',', pos);
            const auto cell =
                line.substr(pos, comma == std::string_view::npos ? line.size() - pos : comma - pos);
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc{} || ptr != cell.data() + cell.size())
                throw UsageError(fmt::format("malformed report cell '{}'", cell));
            row.push_back(v);
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body) {
    threads = std::max<std::size_t>(1, std::min(threads, count));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next = count;
                }
            }
        });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

// ---- LSD -------------------------------------------------------------------

std::string_view to_string(EnsembleConfig::Kind kind) noexcept {
    switch (kind) {
        case EnsembleConfig::Kind::Wigner: return "wigner";
        case EnsembleConfig::Kind::SampleCovariance: return "covariance";
        case EnsembleConfig::Kind::Deformed: return "deformed";
    }
    return "?";
}

std::function<double(double)> limit_cdf(const EnsembleConfig& ensemble, double inversion_v) {
    using Kind = EnsembleConfig::Kind;
    if (ensemble.kind == Kind::Wigner) return semicircle_cdf;

    const double top = ensemble.population.max_location();
    Transform transform;
    double lo = 0.0, hi = 0.0;
    if (ensemble.kind == Kind::SampleCovariance) {
        const double y = ensemble.aspect_ratio;
        if (y > 1.0)
            throw InvalidConfig("LSD reference CDF is only tabulated for y <= 1 (no atom at 0)");
        const auto h = ensemble.population;
        transform = [h, y](cplx z) { return solve_silverstein(h, y, UpperHalfPoint(z)).m; };
        lo = -0.5;
        hi = top * marchenko_pastur_edges(y).second + 0.5;
    } else {
        const auto h = ensemble.population;
        transform = [h](cplx z) { return solve_deformed_wigner(h, UpperHalfPoint(z)).s; };
        lo = -2.0 * top - 1.0;
        hi = 2.0 * top + 1.0;
    }
    const auto points = static_cast<std::size_t>(std::ceil((hi - lo) / (inversion_v / 4.0))) + 1;
    auto table = std::make_shared<TabulatedCdf>(cdf_from_transform(transform, lo, hi, points, inversion_v));
    return [table](double x) { return (*table)(x); };
}

HermitianMatrix draw_ensemble(const EnsembleConfig& ensemble, std::size_t n, std::uint64_t seed) {
    using Kind = EnsembleConfig::Kind;
    switch (ensemble.kind) {
        case Kind::Wigner:
            return sample_wigner({n, ensemble.entry_law, ensemble.diag_variance, seed});
        case Kind::SampleCovariance: {
            CovarianceConfig c;
            c.n = n;
            c.p = std::max<std::size_t>(
                1, static_cast<std::size_t>(std::llround(ensemble.aspect_ratio * static_cast<double>(n))));
            c.population = ensemble.population;
            c.entry_law = ensemble.entry_law;
            c.seed = seed;
            c.mode = ensemble.mode;
            return sample_sample_covariance(c);
        }
        case Kind::Deformed: {
            DeformedConfig c;
            c.n = n;
            c.population = ensemble.population;
            c.entry_law = ensemble.entry_law;
            c.diag_variance = ensemble.diag_variance;
            c.seed = seed;
            c.mode = ensemble.mode;
            return sample_deformed_wigner(c);
        }
    }
    throw InvalidConfig("unknown ensemble kind");
}

std::vector<SummaryEntry> summarize_lsd(const std::vector<std::vector<double>>& rows,
                                        const std::vector<std::size_t>& sizes,
                                        double ks_threshold, bool use_median) {
    std::vector<SummaryEntry> out;
    std::vector<double> centre, se;
    for (std::size_t n : sizes) {
        std::vector<double> ks;
        for (const auto& r : rows)
            if (r.at(1) == static_cast<double>(n)) ks.push_back(r.at(2));
        if (ks.empty()) throw InsufficientSamples(fmt::format("no LSD rows for n={}", n));
        const double m = mean_of(ks);
        const double e = std_error_of_mean(ks);
        const double med = median_of(ks);
        out.push_back({fmt::format("mean_ks[n={}]", n), m, e, std::nullopt, true});
        out.push_back({fmt::format("median_ks[n={}]", n), med, 0.0, std::nullopt, true});
        centre.push_back(use_median ? med : m);
        se.push_back(e);
    }
    bool strict = true, within_se = true;
    for (std::size_t k = 1; k < centre.size(); ++k) {
        strict = strict && centre[k] < centre[k - 1];
        within_se = within_se && centre[k] <= centre[k - 1] + se[k];
    }
    out.push_back({"ks_strictly_decreasing", strict ? 1.0 : 0.0, 0.0, 1.0, strict});
    out.push_back({"ks_decreasing_within_se", within_se ? 1.0 : 0.0, 0.0, 1.0, within_se});
    out.push_back({fmt::format("ks_largest_n_below_threshold[n={}]", sizes.back()), centre.back(),
                   se.back(), ks_threshold, centre.back() < ks_threshold});
    return out;
}

ExperimentReport run_lsd_experiment(const EnsembleConfig& ensemble, const LsdOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();
    if (options.sizes.empty()) throw InvalidConfig("LSD experiment needs at least one size");
    if (!std::is_sorted(options.sizes.begin(), options.sizes.end(), std::less_equal<>{}) &&
        options.sizes.size() > 1)
        throw InvalidConfig("LSD sizes must be strictly increasing");
    for (std::size_t k = 1; k < options.sizes.size(); ++k)
        if (options.sizes[k] <= options.sizes[k - 1])
            throw InvalidConfig("LSD sizes must be strictly increasing");
    if (options.reps < 1) throw InsufficientSamples("LSD experiment needs reps >= 1");

    const auto reference = limit_cdf(ensemble, options.inversion_v);
    const std::size_t jobs = options.sizes.size() * options.reps;
    std::vector<std::vector<double>> rows(jobs);
    parallel_for(jobs, options.execution.threads, [&](std::size_t i) {
        const std::size_t n = options.sizes[i / options.reps];
        const auto m = draw_ensemble(ensemble, n, derive_seed(options.seed, i, kLsdStream));
        const auto spec = eigenvalues_symmetric(m);
        rows[i] = {static_cast<double>(i), static_cast<double>(n), ks_distance(StepCdf(spec), reference)};
    });

    using Kind = EnsembleConfig::Kind;
    double threshold = options.tolerances.lsd_ks_wigner;
    if (ensemble.kind == Kind::SampleCovariance) threshold = options.tolerances.lsd_ks_covariance;
    if (ensemble.kind == Kind::Deformed) threshold = options.tolerances.lsd_ks_deformed;
    if (options.ks_threshold) threshold = *options.ks_threshold;
    const bool use_median = ensemble.mode == PopulationMode::IidFromH &&
                            ensemble.kind != Kind::Wigner;

    ExperimentReport report;
    report.experiment_name = fmt::format("lsd-{}", to_string(ensemble.kind));
    report.master_seed = options.seed;
    report.columns = {"replicate", "n", "ks"};
    report.rows = std::move(rows);
    report.summary = summarize_lsd(report.rows, options.sizes, threshold, use_median);
    report.notes.push_back(fmt::format("entry_law={}", to_string(ensemble.entry_law)));
    if (ensemble.kind != Kind::Wigner)
        report.notes.push_back(fmt::format("limit_cdf=inverted transform at v={}", options.inversion_v));
    if (use_median)
        report.notes.push_back(
            "population drawn iid from H: median KS decreasing in n is the finite-sample proxy "
            "for convergence in probability");
    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

// ---- spiked ----------------------------------------------------------------

std::vector<std::vector<double>> sample_block_order_statistics(const LimitBlock& block,
                                                               std::size_t draws,
                                                               std::uint64_t seed) {
    const std::size_t d = block.size;
    std::vector<std::vector<double>> out(d, std::vector<double>(draws));
    Rng rng(seed);
    const double diag_sd = std::sqrt(block.diag_variance);
    const double off_sd = std::sqrt(block.offdiag_variance);
    RealMatrix m(d, d);
    for (std::size_t r = 0; r < draws; ++r) {
        for (std::size_t i = 0; i < d; ++i) {
            m(i, i) = diag_sd * rng.normal();
            for (std::size_t j = i + 1; j < d; ++j) {
                m(i, j) = off_sd * rng.normal();
                m(j, i) = m(i, j);
            }
        }
        if (d == 1) {
            out[0][r] = m(0, 0);
            continue;
        }
        const auto spec = eigenvalues_symmetric(m);
        for (std::size_t t = 0; t < d; ++t) out[t][r] = spec.values()[d - 1 - t];
    }
    return out;
}

std::vector<SummaryEntry> summarize_spiked(
    const std::vector<std::vector<double>>& rows, const std::vector<LimitBlock>& blocks,
    const std::vector<std::vector<std::vector<double>>>& nested, const Tolerances& tolerances) {
    std::vector<SummaryEntry> out;
    std::vector<std::size_t> group_of;
    for (std::size_t j = 0; j < blocks.size(); ++j) group_of.insert(group_of.end(), blocks[j].size, j);
    const std::size_t d = group_of.size();
    const double reps = static_cast<double>(rows.size());

    std::size_t t = 0;
    for (std::size_t j = 0; j < blocks.size(); ++j) {
        for (std::size_t k = 0; k < blocks[j].size; ++k, ++t) {
            const auto x = column(rows, t + 1);
            const double var = variance_of(x);
            const double m = mean_of(x);
            double m4 = 0.0;
            for (double v : x) m4 += std::pow(v - m, 4);
            m4 /= reps;
            const double var_se = std::sqrt(std::max(0.0, m4 - var * var) / reps);
            const double theory = blocks[j].size == 1 ? blocks[j].diag_variance
                                                      : variance_of(nested[j][k]);
            const bool ok = theory == 0.0
                                ? var <= 1e-12
                                : std::abs(var - theory) <= tolerances.spiked_variance_band * theory;
            out.push_back({fmt::format("variance[t={}]", t + 1), var, var_se, theory, ok});

            const double ks = ks_distance(StepCdf::from_samples(x), StepCdf::from_samples(nested[j][k]));
            out.push_back({fmt::format("ks_vs_block[t={}]", t + 1), ks, 0.0, tolerances.spiked_ks,
                           theory == 0.0 || ks <= tolerances.spiked_ks});
        }
    }
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = a + 1; b < d; ++b) {
            if (group_of[a] == group_of[b]) continue;
            const auto x = column(rows, a + 1);
            const auto y = column(rows, b + 1);
            const double mx = mean_of(x), my = mean_of(y);
            double sxy = 0.0, sxx = 0.0, syy = 0.0;
            for (std::size_t r = 0; r < x.size(); ++r) {
                sxy += (x[r] - mx) * (y[r] - my);
                sxx += (x[r] - mx) * (x[r] - mx);
                syy += (y[r] - my) * (y[r] - my);
            }
            const double corr = (sxx > 0.0 && syy > 0.0) ? sxy / std::sqrt(sxx * syy) : 0.0;
            out.push_back({fmt::format("correlation[t={},t={}]", a + 1, b + 1), corr,
                           1.0 / std::sqrt(reps), 0.0,
                           std::abs(corr) <= tolerances.spiked_correlation_band});
        }
    return out;
}

std::vector<std::vector<std::vector<double>>> spiked_nested_samples(const SpikedConfig& config,
                                                                    const SpikedOptions& options) {
    if (options.nested_draws < 2) throw InvalidConfig("nested_draws must be >= 2");
    const auto blocks = spiked_limit_description(config);
    std::vector<std::vector<std::vector<double>>> nested(blocks.size());
    parallel_for(blocks.size(), options.execution.threads, [&](std::size_t j) {
        nested[j] = sample_block_order_statistics(blocks[j], options.nested_draws,
                                                  derive_seed(options.seed, j, kNestedStream));
    });
    return nested;
}

ExperimentReport run_spiked_experiment(const SpikedConfig& config, const SpikedOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();
    config.validate();
    if (options.reps < 100) throw InsufficientSamples("spiked experiment needs reps >= 100");
    const std::size_t d = config.dimension();
    const auto blocks = spiked_limit_description(config);
    std::vector<double> lambda;
    for (const auto& l : config.levels) lambda.insert(lambda.end(), l.multiplicity, l.eigenvalue);
    const double root_n = std::sqrt(static_cast<double>(config.n));

    std::vector<std::vector<double>> rows(options.reps);
    parallel_for(options.reps, options.execution.threads, [&](std::size_t r) {
        SpikedConfig c = config;
        c.seed = derive_seed(options.seed, r, kSpikedStream);
        const auto sample = sample_spiked(c);
        const auto spec = eigenvalues_symmetric(sample.sample_covariance);
        std::vector<double> row{static_cast<double>(r)};
        for (std::size_t t = 0; t < d; ++t) row.push_back(root_n * (spec.values()[d - 1 - t] - lambda[t]));
        rows[r] = std::move(row);
    });

    const auto nested = spiked_nested_samples(config, options);

    ExperimentReport report;
    report.experiment_name = "spiked";
    report.master_seed = options.seed;
    report.columns = {"replicate"};
    for (std::size_t t = 1; t <= d; ++t) report.columns.push_back(fmt::format("fluct_{}", t));
    report.rows = std::move(rows);
    report.summary = summarize_spiked(report.rows, blocks, nested, options.tolerances);
    report.notes.push_back(fmt::format("n={}", config.n));
    report.notes.push_back(fmt::format("nested_draws={}", options.nested_draws));
    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

// ---- CLT -------------------------------------------------------------------

cplx clt_statistic(const EmpiricalSpectrum& spec, UpperHalfPoint z) {
    const double n = static_cast<double>(spec.size());
    return n * (stieltjes_derivative_of_spectrum(spec, z.value()) - semicircle_stieltjes_derivative(z));
}

std::vector<SummaryEntry> summarize_clt(const std::vector<std::vector<double>>& rows,
                                        const std::vector<UpperHalfPoint>& z_points,
                                        const CltConstants& constants, double v0,
                                        const Tolerances& tolerances) {
    std::vector<SummaryEntry> out;
    const std::size_t k = z_points.size();
    const double reps = static_cast<double>(rows.size());
    const double mult = tolerances.clt_se_multiple;

    std::vector<std::vector<cplx>> xi(k);
    std::vector<cplx> mean(k);
    for (std::size_t a = 0; a < k; ++a) {
        const auto re = column(rows, 1 + 2 * a);
        const auto im = column(rows, 2 + 2 * a);
        for (std::size_t r = 0; r < re.size(); ++r) xi[a].emplace_back(re[r], im[r]);
        mean[a] = {mean_of(re), mean_of(im)};
        const cplx theory = clt_mean_a(z_points[a], constants, v0).a_prime;
        const std::string z = format_complex(z_points[a].value());
        const double se_re = std_error_of_mean(re), se_im = std_error_of_mean(im);
        out.push_back({fmt::format("mean_re[z={}]", z), mean[a].real(), se_re, theory.real(),
                       within(mean[a].real(), theory.real(), se_re, mult)});
        out.push_back({fmt::format("mean_im[z={}]", z), mean[a].imag(), se_im, theory.imag(),
                       within(mean[a].imag(), theory.imag(), se_im, mult)});
    }

    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a; b < k; ++b) {
            // Unconjugated covariance E[(xi_a - E xi_a)(xi_b - E xi_b)].
            std::vector<double> pre, pim;
            for (std::size_t r = 0; r < xi[a].size(); ++r) {
                const cplx p = (xi[a][r] - mean[a]) * (xi[b][r] - mean[b]);
                pre.push_back(p.real());
                pim.push_back(p.imag());
            }
            const double scale = reps / (reps - 1.0);
            const cplx cov(scale * mean_of(pre), scale * mean_of(pim));
            const double se_re = scale * std_error_of_mean(pre);
            const double se_im = scale * std_error_of_mean(pim);
            const cplx theory = clt_cov_b(z_points[a], z_points[b], constants, v0).d2b;
            const std::string tag = fmt::format("z1={},z2={}", format_complex(z_points[a].value()),
                                                format_complex(z_points[b].value()));
            out.push_back({fmt::format("cov_re[{}]", tag), cov.real(), se_re, theory.real(),
                           within(cov.real(), theory.real(), se_re, mult)});
            out.push_back({fmt::format("cov_im[{}]", tag), cov.imag(), se_im, theory.imag(),
                           within(cov.imag(), theory.imag(), se_im, mult)});
        }

    // Real covariance matrix of (Re xi_1, ..., Re xi_k, Im xi_1, ..., Im xi_k).
    RealMatrix c(2 * k, 2 * k);
    for (std::size_t a = 0; a < 2 * k; ++a)
        for (std::size_t b = a; b < 2 * k; ++b) {
            double s = 0.0;
            for (std::size_t r = 0; r < rows.size(); ++r) {
                const auto part = [&](std::size_t idx) {
                    const std::size_t zi = idx % k;
                    const double v = idx < k ? xi[zi][r].real() - mean[zi].real()
                                             : xi[zi][r].imag() - mean[zi].imag();
                    return v;
                };
                s += part(a) * part(b);
            }
            c(a, b) = c(b, a) = s / (reps - 1.0);
        }
    const double min_eig = eigenvalues_symmetric(c).min();
    out.push_back({"covariance_min_eigenvalue", min_eig, 0.0, tolerances.psd_floor,
                   min_eig >= tolerances.psd_floor});
    return out;
}

ExperimentReport run_clt_experiment(const CltOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();
    if (options.reps < 200) throw InsufficientSamples("CLT experiment needs reps >= 200");
    if (options.z_points.empty()) throw InvalidConfig("CLT experiment needs at least one z");
    const auto constants = CltConstants::for_entry_law(options.entry_law, options.diag_variance);
    // Region violations surface before any sampling.
    for (const auto& z : options.z_points) (void)clt_mean_a(z, constants, options.v0);

    const std::size_t k = options.z_points.size();
    std::vector<std::vector<double>> rows(options.reps);
    parallel_for(options.reps, options.execution.threads, [&](std::size_t r) {
        const auto w = sample_wigner({options.n, options.entry_law, options.diag_variance,
                                      derive_seed(options.seed, r, kCltStream)});
        const auto spec = eigenvalues_symmetric(w);
        std::vector<double> row{static_cast<double>(r)};
        for (std::size_t a = 0; a < k; ++a) {
            const cplx x = clt_statistic(spec, options.z_points[a]);
            row.push_back(x.real());
            row.push_back(x.imag());
        }
        rows[r] = std::move(row);
    });

    ExperimentReport report;
    report.experiment_name = "clt";
    report.master_seed = options.seed;
    report.columns = {"replicate"};
    for (const auto& z : options.z_points) {
        report.columns.push_back(fmt::format("xi_re[z={}]", format_complex(z.value())));
        report.columns.push_back(fmt::format("xi_im[z={}]", format_complex(z.value())));
    }
    report.rows = std::move(rows);
    report.summary = summarize_clt(report.rows, options.z_points, constants, options.v0,
                                   options.tolerances);
    report.notes.push_back(fmt::format("n={}", options.n));
    report.notes.push_back(fmt::format("entry_law={}", to_string(options.entry_law)));
    report.notes.push_back(fmt::format("sigma2={};kappa={};beta={}", constants.sigma2,
                                       constants.kappa, constants.beta));
    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

// ---- complex literals ------------------------------------------------------

cplx parse_complex(std::string_view text) {
    const auto fail = [&] {
        return UsageError(fmt::format("'{}' is not a complex literal of the form a+bi", text));
    };
    if (text.empty()) throw fail();
    const auto number = [&](std::string_view s) {
        if (s == "" || s == "+") return 1.0;
        if (s == "-") return -1.0;
        if (s.front() == '+') s.remove_prefix(1);
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size()) throw fail();
        return v;
    };
    if (text.back() != 'i') return {number(text), 0.0};
    const auto body = text.substr(0, text.size() - 1);
    std::size_t split = std::string_view::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string_view::npos) return {0.0, number(body)};
    return {number(body.substr(0, split)), number(body.substr(split))};
}

std::string format_complex(cplx z) { return fmt::format("{}{}{}i", z.real(), z.imag() < 0 ? "-" : "+", std::abs(z.imag())); }

}  // namespace rmt
