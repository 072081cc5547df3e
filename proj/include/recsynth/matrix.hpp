#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace recsynth {

/// Dense row-major matrix of doubles. Just enough linear algebra for this
/// project; anything fancier belongs in a real library.
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* row_ptr(std::size_t i) { return data_.data() + i * cols_; }
    const double* row_ptr(std::size_t i) const { return data_.data() + i * cols_; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool operator==(const Matrix& other) const = default;

    /// this * other^T, i.e. result(i,k) = sum_j this(i,j) * other(k,j).
    Matrix multiply_transposed(const Matrix& other) const {
        if (cols_ != other.cols_)
            throw std::invalid_argument("Matrix::multiply_transposed: inner dimensions disagree");
        Matrix out(rows_, other.rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            const double* a = row_ptr(i);
            for (std::size_t k = 0; k < other.rows_; ++k) {
                const double* b = other.row_ptr(k);
                double acc = 0.0;
                for (std::size_t j = 0; j < cols_; ++j) acc += a[j] * b[j];
                out(i, k) = acc;
            }
        }
        return out;
    }

    Matrix multiply(const Matrix& other) const {
        if (cols_ != other.rows_)
            throw std::invalid_argument("Matrix::multiply: inner dimensions disagree");
        Matrix out(rows_, other.cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            const double* a = row_ptr(i);
            double* o = out.row_ptr(i);
            for (std::size_t j = 0; j < cols_; ++j) {
                double aij = a[j];
                if (aij == 0.0) continue;
                const double* b = other.row_ptr(j);
                for (std::size_t k = 0; k < other.cols_; ++k) o[k] += aij * b[k];
            }
        }
        return out;
    }

private:
    std::size_t rows_, cols_;
    std::vector<double> data_;
};

}  // namespace recsynth
