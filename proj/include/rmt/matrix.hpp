#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace rmt {

using cplx = std::complex<double>;

/// Dense row-major matrix. Only what the generators and the eigensolver need.
template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<T> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
    std::span<const T> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }

    std::span<const T> data() const noexcept { return data_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using RealMatrix = Matrix<double>;
using ComplexMatrix = Matrix<cplx>;

inline double conj_if(double x) noexcept { return x; }
inline cplx conj_if(cplx x) noexcept { return std::conj(x); }

inline double abs2(double x) noexcept { return x * x; }
inline double abs2(cplx x) noexcept { return std::norm(x); }

template <typename T>
Matrix<T> multiply(const Matrix<T>& a, const Matrix<T>& b) {
    Matrix<T> c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto ci = c.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const T aik = a(i, k);
            auto bk = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
        }
    }
    return c;
}

template <typename T>
Matrix<T> adjoint(const Matrix<T>& a) {
    Matrix<T> t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = conj_if(a(i, j));
    return t;
}

template <typename T>
double frobenius_norm_sq(const Matrix<T>& a) {
    double s = 0.0;
    for (const T& x : a.data()) s += abs2(x);
    return s;
}

template <typename T>
T trace(const Matrix<T>& a) {
    T s{};
    for (std::size_t i = 0; i < a.rows() && i < a.cols(); ++i) s += a(i, i);
    return s;
}

}  // namespace rmt
