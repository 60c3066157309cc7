#ifndef HERMITEGF_TEST_SUPPORT_HPP
#define HERMITEGF_TEST_SUPPORT_HPP

#include <cmath>
#include <random>

#include "hermitegf/linalg.hpp"

namespace testsup {

using hermitegf::Matrix;
using hermitegf::Vector;

inline double frob(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

inline Matrix random_matrix(std::size_t rows, std::size_t cols, unsigned seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> dis(-1.0, 1.0);
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = dis(gen);
    return m;
}

inline Vector random_vector(std::size_t n, unsigned seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> dis(-1.0, 1.0);
    Vector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = dis(gen);
    return v;
}

} // namespace testsup

#endif
