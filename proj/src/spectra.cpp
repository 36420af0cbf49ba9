#include "rmt/spectra.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include <fmt/format.h>

#include "rmt/errors.hpp"

namespace rmt {

namespace {

double parse_double(std::string_view s) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end || s.empty())
        throw UsageError("expected a number, got '" + std::string(s) + "'");
    return v;
}

}  // namespace

AtomicDistribution::AtomicDistribution(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw InvalidConfig("atomic distribution needs at least one atom");
    double total = 0.0;
    for (const auto& a : atoms_) {
        if (!(a.weight > 0.0) || !std::isfinite(a.weight))
            throw InvalidConfig("atom weights must be positive");
        if (!std::isfinite(a.location)) throw InvalidConfig("atom locations must be finite");
        total += a.weight;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw InvalidConfig(fmt::format("atom weights sum to {}, not 1", total));
}

AtomicDistribution AtomicDistribution::point_mass(double location) {
    return AtomicDistribution({{1.0, location}});
}

AtomicDistribution AtomicDistribution::parse(std::string_view text) {
    std::vector<Atom> atoms;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto piece = text.substr(
            start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        const auto colon = piece.find(':');
        if (colon == std::string_view::npos)
            throw UsageError("spectrum atom '" + std::string(piece) + "' is not weight:location");
        atoms.push_back({parse_double(piece.substr(0, colon)), parse_double(piece.substr(colon + 1))});
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return AtomicDistribution(std::move(atoms));
}

double AtomicDistribution::min_location() const {
    return std::min_element(atoms_.begin(), atoms_.end(),
                            [](const Atom& a, const Atom& b) { return a.location < b.location; })
        ->location;
}

double AtomicDistribution::max_location() const {
    return std::max_element(atoms_.begin(), atoms_.end(),
                            [](const Atom& a, const Atom& b) { return a.location < b.location; })
        ->location;
}

double AtomicDistribution::cdf(double x) const {
    double s = 0.0;
    for (const auto& a : atoms_)
        if (a.location <= x) s += a.weight;
    return std::min(s, 1.0);
}

cplx AtomicDistribution::stieltjes(cplx z) const {
    cplx s = 0.0;
    for (const auto& a : atoms_) s += a.weight / (a.location - z);
    return s;
}

EmpiricalSpectrum::EmpiricalSpectrum(std::vector<double> eigenvalues)
    : values_(std::move(eigenvalues)) {
    for (double v : values_)
        if (!std::isfinite(v)) throw InvalidConfig("spectrum contains a non-finite eigenvalue");
    std::sort(values_.begin(), values_.end());
}

double esd_cdf(const EmpiricalSpectrum& spec, double x) {
    if (spec.empty()) return 0.0;
    const auto v = spec.values();
    const auto count = std::upper_bound(v.begin(), v.end(), x) - v.begin();
    return static_cast<double>(count) / static_cast<double>(v.size());
}

cplx stieltjes_of_spectrum(const EmpiricalSpectrum& spec, cplx z) {
    if (!(z.imag() > 0.0)) throw DomainError("Stieltjes transform needs Im z > 0");
    cplx s = 0.0;
    for (double l : spec.values()) s += 1.0 / (l - z);
    return s / static_cast<double>(spec.size());
}

cplx stieltjes_derivative_of_spectrum(const EmpiricalSpectrum& spec, cplx z) {
    if (!(z.imag() > 0.0)) throw DomainError("Stieltjes transform needs Im z > 0");
    cplx s = 0.0;
    for (double l : spec.values()) {
        const cplx r = 1.0 / (l - z);
        s += r * r;
    }
    return s / static_cast<double>(spec.size());
}

StepCdf::StepCdf(const EmpiricalSpectrum& spec) {
    const auto v = spec.values();
    const double n = static_cast<double>(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        // Ties collapse into one jump of size m/n.
        if (!jumps_.empty() && jumps_.back() == v[i]) {
            levels_.back() = static_cast<double>(i + 1) / n;
        } else {
            jumps_.push_back(v[i]);
            levels_.push_back(static_cast<double>(i + 1) / n);
        }
    }
}

StepCdf::StepCdf(const AtomicDistribution& dist) {
    std::vector<AtomicDistribution::Atom> atoms(dist.atoms().begin(), dist.atoms().end());
    std::sort(atoms.begin(), atoms.end(),
              [](const auto& a, const auto& b) { return a.location < b.location; });
    double acc = 0.0;
    for (const auto& a : atoms) {
        acc += a.weight;
        if (!jumps_.empty() && jumps_.back() == a.location) {
            levels_.back() = std::min(acc, 1.0);
        } else {
            jumps_.push_back(a.location);
            levels_.push_back(std::min(acc, 1.0));
        }
    }
    levels_.back() = 1.0;
}

StepCdf StepCdf::from_samples(std::vector<double> samples) {
    return StepCdf(EmpiricalSpectrum(std::move(samples)));
}

double StepCdf::operator()(double x) const {
    const auto it = std::upper_bound(jumps_.begin(), jumps_.end(), x);
    if (it == jumps_.begin()) return 0.0;
    return levels_[static_cast<std::size_t>(it - jumps_.begin()) - 1];
}

double ks_distance(const StepCdf& f, const StepCdf& g) {
    double sup = 0.0;
    for (double x : f.jumps()) sup = std::max(sup, std::abs(f(x) - g(x)));
    for (double x : g.jumps()) sup = std::max(sup, std::abs(f(x) - g(x)));
    return sup;
}

double ks_distance(const StepCdf& f, const std::function<double(double)>& g) {
    double sup = 0.0;
    double below = 0.0;
    const auto jumps = f.jumps();
    const auto levels = f.levels();
    for (std::size_t k = 0; k < jumps.size(); ++k) {
        const double gx = g(jumps[k]);
        sup = std::max({sup, std::abs(levels[k] - gx), std::abs(below - gx)});
        below = levels[k];
    }
    return sup;
}

double sup_distance_on_grid(const std::function<double(double)>& f,
                            const std::function<double(double)>& g,
                            std::span<const double> grid) {
    double sup = 0.0;
    for (double x : grid) sup = std::max(sup, std::abs(f(x) - g(x)));
    return sup;
}

double smoothed_esd_cdf(const EmpiricalSpectrum& spec, double x, double v) {
    double s = 0.0;
    for (double l : spec.values()) s += std::atan((x - l) / v);
    return 0.5 + s / (std::numbers::pi * static_cast<double>(spec.size()));
}

void write_spectrum_csv(std::ostream& os, const EmpiricalSpectrum& spec) {
    os << "eigenvalue\n";
    for (double v : spec.values()) os << fmt::format("{}\n", v);
}

void write_cdf_csv(std::ostream& os, std::span<const double> xs, std::span<const double> fs) {
    if (xs.size() != fs.size()) throw InvalidConfig("CDF table columns differ in length");
    os << "x,F\n";
    for (std::size_t i = 0; i < xs.size(); ++i) os << fmt::format("{},{}\n", xs[i], fs[i]);
}

}  // namespace rmt
