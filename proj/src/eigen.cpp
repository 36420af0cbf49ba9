// Symmetric eigensolver: Householder reduction to tridiagonal form followed by
// the implicit-shift QL iteration (the EISPACK tred2/tql2 pair).
//
// Working storage is column-major (w[c * n + r] holds entry (r, c)) so that
// the inner loops of both phases, which run down a column, touch contiguous
// memory.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "rmt/errors.hpp"
#include "rmt/spectra.hpp"

namespace rmt {

namespace {

class ColumnMajor {
public:
    explicit ColumnMajor(std::size_t n) : n_(n), w_(n * n, 0.0) {}
    double& operator()(std::size_t r, std::size_t c) noexcept { return w_[c * n_ + r]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return w_[c * n_ + r]; }
    double* column(std::size_t c) noexcept { return w_.data() + c * n_; }

private:
    std::size_t n_;
    std::vector<double> w_;
};

/// Reduces the symmetric matrix held in `v` to tridiagonal form: diagonal in d,
/// subdiagonal in e[1..n-1]. With `accumulate`, v ends up holding the
/// orthogonal transformation.
void tridiagonalize(ColumnMajor& v, std::vector<double>& d, std::vector<double>& e,
                    bool accumulate) {
    const std::size_t n = d.size();
    for (std::size_t j = 0; j < n; ++j) d[j] = v(n - 1, j);

    for (std::size_t i = n - 1; i > 0; --i) {
        double scale = 0.0;
        double h = 0.0;
        for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
        if (scale == 0.0) {
            e[i] = d[i - 1];
            for (std::size_t j = 0; j < i; ++j) {
                d[j] = v(i - 1, j);
                v(i, j) = 0.0;
                v(j, i) = 0.0;
            }
        } else {
            for (std::size_t k = 0; k < i; ++k) {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            double f = d[i - 1];
            double g = std::sqrt(h);
            if (f > 0) g = -g;
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            std::fill(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(i), 0.0);

            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                v(j, i) = f;
                const double* col = v.column(j);
                g = e[j] + col[j] * f;
                for (std::size_t k = j + 1; k < i; ++k) {
                    g += col[k] * d[k];
                    e[k] += col[k] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for (std::size_t j = 0; j < i; ++j) {
                e[j] /= h;
                f += e[j] * d[j];
            }
            const double hh = f / (h + h);
            for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                g = e[j];
                double* col = v.column(j);
                for (std::size_t k = j; k < i; ++k) col[k] -= (f * e[k] + g * d[k]);
                d[j] = v(i - 1, j);
                v(i, j) = 0.0;
            }
        }
        d[i] = h;
    }

    if (!accumulate) {
        for (std::size_t j = 0; j < n; ++j) d[j] = v(j, j);
        e[0] = 0.0;
        return;
    }

    for (std::size_t i = 0; i + 1 < n; ++i) {
        v(n - 1, i) = v(i, i);
        v(i, i) = 1.0;
        const double h = d[i + 1];
        if (h != 0.0) {
            const double* next = v.column(i + 1);
            for (std::size_t k = 0; k <= i; ++k) d[k] = next[k] / h;
            for (std::size_t j = 0; j <= i; ++j) {
                double* col = v.column(j);
                double g = 0.0;
                for (std::size_t k = 0; k <= i; ++k) g += next[k] * col[k];
                for (std::size_t k = 0; k <= i; ++k) col[k] -= g * d[k];
            }
        }
        for (std::size_t k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
    }
    for (std::size_t j = 0; j < n; ++j) {
        d[j] = v(n - 1, j);
        v(n - 1, j) = 0.0;
    }
    v(n - 1, n - 1) = 1.0;
    e[0] = 0.0;
}

/// Implicit-shift QL on the tridiagonal (d, e). Eigenvalues land in d,
/// unsorted; `v` (if given) receives the same rotations.
void ql_implicit(std::vector<double>& d, std::vector<double>& e, ColumnMajor* v) {
    const std::size_t n = d.size();
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr int max_sweeps = 64;
    double f = 0.0;
    double tst1 = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
        std::size_t m = l;
        while (m < n) {
            if (std::abs(e[m]) <= eps * tst1) break;
            ++m;
        }
        if (m > l) {
            int sweeps = 0;
            do {
                if (++sweeps > max_sweeps)
                    throw NonConvergence(
                        fmt::format("QL iteration stalled at eigenvalue {} of {}", l, n));
                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0) r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double h = g - d[l];
                for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
                f += h;

                p = d[m];
                double c = 1.0, c2 = 1.0, c3 = 1.0;
                const double el1 = e[l + 1];
                double s = 0.0, s2 = 0.0;
                for (std::size_t i = m; i-- > l;) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = std::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if (v) {
                        double* a = v->column(i);
                        double* b = v->column(i + 1);
                        for (std::size_t k = 0; k < n; ++k) {
                            h = b[k];
                            b[k] = s * a[k] + c * h;
                            a[k] = c * a[k] - s * h;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::abs(e[l]) > eps * tst1);
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

void require_hermitian(double asymmetry) {
    if (asymmetry > 1e-12)
        throw ContractViolation(
            fmt::format("matrix is not Hermitian (relative asymmetry {:.3e})", asymmetry));
}

ColumnMajor load(const RealMatrix& a) {
    const std::size_t n = a.rows();
    ColumnMajor v(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) v(i, j) = a(i, j);
    return v;
}

RealMatrix real_embedding(const ComplexMatrix& a) {
    const std::size_t n = a.rows();
    RealMatrix r(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const cplx x = a(i, j);
            r(i, j) = x.real();
            r(i + n, j + n) = x.real();
            r(i, j + n) = -x.imag();
            r(i + n, j) = x.imag();
        }
    return r;
}

std::vector<double> symmetric_values(const RealMatrix& a) {
    const std::size_t n = a.rows();
    if (n == 0) return {};
    ColumnMajor v = load(a);
    std::vector<double> d(n), e(n);
    tridiagonalize(v, d, e, false);
    ql_implicit(d, e, nullptr);
    std::sort(d.begin(), d.end());
    return d;
}

}  // namespace

double hermitian_asymmetry(const RealMatrix& a) {
    if (!a.square()) return std::numeric_limits<double>::infinity();
    double scale = 0.0, worst = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            scale = std::max(scale, std::abs(a(i, j)));
            worst = std::max(worst, std::abs(a(i, j) - a(j, i)));
        }
    return scale == 0.0 ? 0.0 : worst / scale;
}

double hermitian_asymmetry(const ComplexMatrix& a) {
    if (!a.square()) return std::numeric_limits<double>::infinity();
    double scale = 0.0, worst = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            scale = std::max(scale, std::abs(a(i, j)));
            worst = std::max(worst, std::abs(a(i, j) - std::conj(a(j, i))));
        }
    return scale == 0.0 ? 0.0 : worst / scale;
}

EmpiricalSpectrum eigenvalues_symmetric(const RealMatrix& a) {
    require_hermitian(hermitian_asymmetry(a));
    return EmpiricalSpectrum(symmetric_values(a));
}

EmpiricalSpectrum eigenvalues_symmetric(const ComplexMatrix& a) {
    require_hermitian(hermitian_asymmetry(a));
    const auto doubled = symmetric_values(real_embedding(a));
    std::vector<double> out(a.rows());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = 0.5 * (doubled[2 * k] + doubled[2 * k + 1]);
    return EmpiricalSpectrum(std::move(out));
}

EigenDecomposition eigen_decompose(const RealMatrix& a) {
    require_hermitian(hermitian_asymmetry(a));
    const std::size_t n = a.rows();
    EigenDecomposition out;
    if (n == 0) return out;
    ColumnMajor v = load(a);
    std::vector<double> d(n), e(n);
    tridiagonalize(v, d, e, true);
    ql_implicit(d, e, &v);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return d[x] < d[y]; });
    out.values.resize(n);
    out.vectors = RealMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = d[order[k]];
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
    }
    return out;
}

ComplexEigenDecomposition eigen_decompose(const ComplexMatrix& a) {
    require_hermitian(hermitian_asymmetry(a));
    const std::size_t n = a.rows();
    const auto real = eigen_decompose(real_embedding(a));
    ComplexEigenDecomposition out;
    out.values.resize(n);
    out.vectors = ComplexMatrix(n, n);
    // Each eigenvalue of A appears twice in the embedding; any real
    // eigenvector (u; w) of the embedding gives the eigenvector u + i w of A.
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = 2 * k;
        out.values[k] = 0.5 * (real.values[src] + real.values[src + 1]);
        double norm = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const cplx x(real.vectors(r, src), real.vectors(r + n, src));
            out.vectors(r, k) = x;
            norm += std::norm(x);
        }
        norm = std::sqrt(norm);
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) /= norm;
    }
    return out;
}

double eigen_residual(const RealMatrix& a, const EigenDecomposition& dec, std::size_t k) {
    const std::size_t n = a.rows();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double av = 0.0;
        for (std::size_t j = 0; j < n; ++j) av += a(i, j) * dec.vectors(j, k);
        const double r = av - dec.values[k] * dec.vectors(i, k);
        s += r * r;
    }
    return std::sqrt(s);
}

double eigen_residual(const ComplexMatrix& a, const ComplexEigenDecomposition& dec,
                      std::size_t k) {
    const std::size_t n = a.rows();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cplx av = 0.0;
        for (std::size_t j = 0; j < n; ++j) av += a(i, j) * dec.vectors(j, k);
        s += std::norm(av - dec.values[k] * dec.vectors(i, k));
    }
    return std::sqrt(s);
}

}  // namespace rmt
