#include "ratefix/norms.hpp"

#include <algorithm>
#include <cmath>

#include "ratefix/errors.hpp"

namespace ratefix {

double vector_norm(std::span<const double> v, VectorNormKind p) {
    double acc = 0.0;
    switch (p) {
        case VectorNormKind::One:
            for (double x : v) acc += std::fabs(x);
            return acc;
        case VectorNormKind::Two:
            for (double x : v) acc += x * x;
            return std::sqrt(acc);
        case VectorNormKind::Infinity:
            for (double x : v) acc = std::max(acc, std::fabs(x));
            return acc;
    }
    return acc;
}

double matrix_norm(const Matrix& m, MatrixNormKind p) {
    double worst = 0.0;
    if (p == MatrixNormKind::Infinity) {
        for (std::size_t i = 0; i < m.rows; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < m.cols; ++j) row += std::fabs(m.at(i, j));
            worst = std::max(worst, row);
        }
    } else {
        for (std::size_t j = 0; j < m.cols; ++j) {
            double col = 0.0;
            for (std::size_t i = 0; i < m.rows; ++i) col += std::fabs(m.at(i, j));
            worst = std::max(worst, col);
        }
    }
    return worst;
}

std::vector<double> matrix_apply(const Matrix& m, std::span<const double> x) {
    if (x.size() != m.cols) throw DimensionMismatch("matrix_apply: size mismatch");
    std::vector<double> y(m.rows, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m.cols; ++j) acc += m.at(i, j) * x[j];
        y[i] = acc;
    }
    return y;
}

}  // namespace ratefix
