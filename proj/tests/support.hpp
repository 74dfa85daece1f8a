#pragma once

// Shared helpers for the unit and acceptance suites. The oracles here
// (series exponential, random matrix generators) are deliberately independent
// of the library code paths they are used to check.

#include <random>

#include "qbundle/linalg.hpp"

namespace qbtest {

using qb::cplx;
using qb::Matrix;

inline std::mt19937_64 rng(uint64_t seed) { return std::mt19937_64(seed); }

inline double urand(std::mt19937_64& g, double lo = -1.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(g);
}

// Matrix exponential by scaling-and-squaring Taylor series (test oracle).
inline Matrix taylor_exp(const Matrix& A) {
    int n = A.rows;
    double nrm = A.max_abs() * n;
    int s = 0;
    while (nrm > 0.25) { nrm *= 0.5; ++s; }
    Matrix X = A * cplx(std::ldexp(1.0, -s));
    Matrix R = Matrix::identity(n);
    Matrix term = Matrix::identity(n);
    for (int k = 1; k <= 24; ++k) {
        term = term * X * cplx(1.0 / k);
        R = R + term;
    }
    for (int i = 0; i < s; ++i) R = R * R;
    return R;
}

inline Matrix random_antihermitian(std::mt19937_64& g, int n, double scale = 1.0) {
    Matrix A(n, n);
    for (int i = 0; i < n; ++i) {
        A(i, i) = cplx(0, urand(g) * scale);
        for (int j = i + 1; j < n; ++j) {
            cplx v(urand(g) * scale, urand(g) * scale);
            A(i, j) = v;
            A(j, i) = -std::conj(v);
        }
    }
    return A;
}

inline Matrix random_unitary(std::mt19937_64& g, int n, double scale = 1.0) {
    return taylor_exp(random_antihermitian(g, n, scale));
}

inline Matrix random_skew(std::mt19937_64& g, int n) {
    Matrix A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            cplx v(urand(g), urand(g));
            A(i, j) = v;
            A(j, i) = -v;
        }
    return A;
}

inline Matrix random_matrix(std::mt19937_64& g, int n) {
    Matrix A(n, n);
    for (auto& v : A.a) v = cplx(urand(g), urand(g));
    return A;
}

}  // namespace qbtest
