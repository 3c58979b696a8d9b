#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace factcheck {

// Dense row-major double matrix. Everything in this project is tiny, so a
// flat vector with bounds asserts is all we need.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& at(std::size_t r, std::size_t c) {
        assert(r < rows && c < cols);
        return data[r * cols + c];
    }
    double at(std::size_t r, std::size_t c) const {
        assert(r < rows && c < cols);
        return data[r * cols + c];
    }

    const double* row(std::size_t r) const {
        assert(r < rows);
        return data.data() + r * cols;
    }
    double* row(std::size_t r) {
        assert(r < rows);
        return data.data() + r * cols;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;
};

// y = M x
inline std::vector<double> matvec(const Matrix& m, const std::vector<double>& x) {
    assert(x.size() == m.cols);
    std::vector<double> y(m.rows, 0.0);
    for (std::size_t r = 0; r < m.rows; ++r) {
        const double* row = m.row(r);
        double acc = 0.0;
        for (std::size_t c = 0; c < m.cols; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
    return y;
}

// y = M^T x
inline std::vector<double> matvec_transposed(const Matrix& m, const std::vector<double>& x) {
    assert(x.size() == m.rows);
    std::vector<double> y(m.cols, 0.0);
    for (std::size_t r = 0; r < m.rows; ++r) {
        const double* row = m.row(r);
        const double xr = x[r];
        for (std::size_t c = 0; c < m.cols; ++c) y[c] += row[c] * xr;
    }
    return y;
}

}  // namespace factcheck
