#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace otfs {

using Complex = std::complex<double>;

/// Dense row-major complex matrix. Rows are the delay/frequency axis,
/// columns the Doppler/time axis throughout this codebase.
class CMat {
public:
    CMat() = default;
    CMat(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    Complex& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Complex& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    Complex* data() { return data_.data(); }
    const Complex* data() const { return data_.data(); }

    std::vector<Complex>& raw() { return data_; }
    const std::vector<Complex>& raw() const { return data_; }

    double frobenius_norm() const {
        double acc = 0.0;
        for (const Complex& v : data_) acc += std::norm(v);
        return std::sqrt(acc);
    }

    bool same_shape(const CMat& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

}  // namespace otfs
