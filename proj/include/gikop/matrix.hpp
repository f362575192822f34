#ifndef GIKOP_MATRIX_HPP
#define GIKOP_MATRIX_HPP

// Minimal dense row-major matrix used for Nystrom discretizations and the
// exponential term recurrence.  Products with a diagonal weight in the
// middle are the only nontrivial operation; they route every inner sum
// through kernels::weighted_dot so that matrix products and pointwise
// closure sums agree bit for bit.

#include <cstddef>
#include <span>
#include <vector>

#include "gikop/kernels.hpp"

namespace gikop {

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

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }
    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

    std::span<const double> flat() const { return data_; }
    std::span<double> flat() { return data_; }

    Matrix transposed() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    double max_abs() const { return kernels::max_abs(data_); }

    void add_scaled(const Matrix& other, double alpha) {
        kernels::axpy(alpha, other.data_, data_);
    }

    void scale(double alpha) {
        for (double& v : data_) v *= alpha;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// C[i][j] = post_scale * sum_k (A[i][k] * w[k]) * B[k][j]
inline Matrix product_wdiag(const Matrix& A, std::span<const double> w, const Matrix& B,
                            double post_scale = 1.0) {
    const Matrix Bt = B.transposed();
    Matrix C(A.rows(), B.cols());
    kernels::parallel_for(A.rows(), [&](std::size_t i) {
        for (std::size_t j = 0; j < B.cols(); ++j) {
            const double s = kernels::weighted_dot(A.row(i), w, Bt.row(j));
            C(i, j) = post_scale == 1.0 ? s : s * post_scale;
        }
    });
    return C;
}

// y = A x (plain, no weights)
inline std::vector<double> product_vec(const Matrix& A, std::span<const double> x) {
    std::vector<double> y(A.rows());
    for (std::size_t i = 0; i < A.rows(); ++i) y[i] = kernels::dot(A.row(i), x);
    return y;
}

inline Matrix subtract(const Matrix& A, const Matrix& B) {
    Matrix C = A;
    C.add_scaled(B, -1.0);
    return C;
}

}  // namespace gikop

#endif  // GIKOP_MATRIX_HPP
