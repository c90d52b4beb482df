#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ratefix {

enum class VectorNormKind { One, Two, Infinity };

double vector_norm(std::span<const double> v, VectorNormKind p);

/// Dense row-major matrix, just large enough for Jacobians and small linear
/// systems.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

enum class MatrixNormKind { One, Infinity };

/// Max absolute column sum (One) or max absolute row sum (Infinity).
double matrix_norm(const Matrix& m, MatrixNormKind p);

/// y = M x.
std::vector<double> matrix_apply(const Matrix& m, std::span<const double> x);

}  // namespace ratefix
