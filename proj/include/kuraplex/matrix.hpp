#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <vector>

namespace kuraplex {

/// Dense row-major matrix of doubles. Coupling matrices, Jacobians and
/// eigenvector bundles all use this one representation; at the scales this
/// library targets (a few thousand rows at most) dense storage keeps every
/// downstream algorithm simple.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
        Matrix m(rows.size(), rows.size() ? rows.begin()->size() : 0);
        std::size_t i = 0;
        for (const auto& r : rows) {
            if (r.size() != m.cols_) throw std::invalid_argument("Matrix::from_rows: ragged rows");
            std::size_t j = 0;
            for (double v : r) m(i, j++) = v;
            ++i;
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    const double* row(std::size_t i) const { return data_.data() + i * cols_; }

    const std::vector<double>& entries() const { return data_; }

    bool is_square() const { return rows_ == cols_; }

    bool all_finite() const {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (double v : data_) s += v * v;
        return std::sqrt(s);
    }

    /// Largest |a_ij - a_ji|; zero for an exactly symmetric matrix.
    double symmetry_defect() const {
        if (!is_square()) return std::numeric_limits<double>::infinity();
        double d = 0.0;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i + 1; j < cols_; ++j)
                d = std::max(d, std::abs((*this)(i, j) - (*this)(j, i)));
        return d;
    }

    bool is_symmetric(double rel_tol = 1e-12) const {
        if (!is_square()) return false;
        return symmetry_defect() <= rel_tol * std::max(1.0, max_abs());
    }

    std::vector<double> row_sums() const {
        std::vector<double> s(rows_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i) {
            double acc = 0.0;
            const double* r = row(i);
            for (std::size_t j = 0; j < cols_; ++j) acc += r[j];
            s[i] = acc;
        }
        return s;
    }

    Matrix& operator*=(double c) {
        for (double& v : data_) v *= c;
        return *this;
    }

    friend Matrix operator*(double c, Matrix m) {
        m *= c;
        return m;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            d = std::max(d, std::abs(a(i, j) - b(i, j)));
    return d;
}

}  // namespace kuraplex
