#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qb {

using cplx = std::complex<double>;

// Error with a stable machine-readable code, surfaced as JSON by the CLI.
struct Error : std::runtime_error {
    std::string code;
    Error(std::string code_, const std::string& msg) : std::runtime_error(msg), code(std::move(code_)) {}
};

// ---------------------------------------------------------------------------
// 2x2 complex matrices (the workhorse type: SU(2)/U(2) values, u(2) logs)
// ---------------------------------------------------------------------------

struct Mat2 {
    cplx m00{0}, m01{0}, m10{0}, m11{0};

    static Mat2 identity() { return {1, 0, 0, 1}; }
    static Mat2 zero() { return {0, 0, 0, 0}; }
    static Mat2 diag(cplx a, cplx b) { return {a, 0, 0, b}; }

    Mat2 operator*(const Mat2& o) const {
        return {m00 * o.m00 + m01 * o.m10, m00 * o.m01 + m01 * o.m11,
                m10 * o.m00 + m11 * o.m10, m10 * o.m01 + m11 * o.m11};
    }
    Mat2 operator+(const Mat2& o) const { return {m00 + o.m00, m01 + o.m01, m10 + o.m10, m11 + o.m11}; }
    Mat2 operator-(const Mat2& o) const { return {m00 - o.m00, m01 - o.m01, m10 - o.m10, m11 - o.m11}; }
    Mat2 operator*(cplx s) const { return {s * m00, s * m01, s * m10, s * m11}; }
    Mat2 adjoint() const { return {std::conj(m00), std::conj(m10), std::conj(m01), std::conj(m11)}; }
    Mat2 transpose() const { return {m00, m10, m01, m11}; }
    Mat2 conjugate() const { return {std::conj(m00), std::conj(m01), std::conj(m10), std::conj(m11)}; }
    cplx det() const { return m00 * m11 - m01 * m10; }
    cplx trace() const { return m00 + m11; }
    Mat2 inverse() const {
        cplx d = det();
        return Mat2{m11 / d, -m01 / d, -m10 / d, m00 / d};
    }
    double max_abs() const;
};

double max_abs_diff(const Mat2& a, const Mat2& b);
bool is_unitary2(const Mat2& u, double tol = 1e-10);

// The constant Q = [[0,-1],[1,0]]; Q^2 = -1, Pf(Q) = -1.
inline Mat2 qmat() { return Mat2{0, -1, 1, 0}; }

// ---------------------------------------------------------------------------
// Unit quaternions <-> SU(2)
//
// Convention pinned by requiring that the matrix
//   [[k0+i k3, -k1+i k2], [k1+i k2, k0-i k3]]
// maps to the quaternion (k0,k1,k2,k3). Equivalently U = q0 + i(q.E) with
// E = (-sigma_y, sigma_x, sigma_z); the E's satisfy the standard Pauli algebra
// and quaternion multiplication below matches matrix multiplication exactly.
// ---------------------------------------------------------------------------

struct Quat {
    double w{1}, x{0}, y{0}, z{0};

    double norm() const;
    Quat normalized() const;
    Quat conj() const { return {w, -x, -y, -z}; }
};

double qdot(const Quat& a, const Quat& b);
Quat qmul(const Quat& a, const Quat& b);
Mat2 matrix_from_quaternion(const Quat& q);
Quat su2_coords(const Mat2& u);  // requires |det(u)-1| <= 1e-8
Quat slerp(const Quat& a, const Quat& b, double t);
// log of a unit quaternion as a 3-vector x (angle*axis in the E basis);
// corresponds to the su(2) element i(x.E). Angle in [0, pi].
std::array<double, 3> quat_log3(const Quat& q);

// u(2) element u = i(alpha*1 + x.E) <-> real coords (alpha, x1, x2, x3).
std::array<double, 4> lie_coords(const Mat2& u);
Mat2 mat_from_lie_coords(const std::array<double, 4>& c);

// ---------------------------------------------------------------------------
// General small dense complex matrices (n <= 8 in practice)
// ---------------------------------------------------------------------------

struct Matrix {
    int rows{0}, cols{0};
    std::vector<cplx> a;  // row-major

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, cplx(0)) {}
    static Matrix identity(int n);

    cplx& operator()(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    const cplx& operator()(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

    Matrix operator*(const Matrix& o) const;
    Matrix operator+(const Matrix& o) const;
    Matrix operator-(const Matrix& o) const;
    Matrix operator*(cplx s) const;
    Matrix adjoint() const;
    Matrix transpose() const;
    Matrix conjugate() const;
    double max_abs() const;
};

double max_abs_diff(const Matrix& a, const Matrix& b);
Mat2 to_mat2(const Matrix& m);
Matrix from_mat2(const Mat2& m);

cplx det(Matrix m);  // LU with partial pivoting

// Pfaffian by recursive first-row expansion. Requires square, even dimension
// <= 8 and skew-symmetry within 1e-10 (relative to the largest entry).
cplx pfaffian(const Matrix& A);

struct HermEig {
    std::vector<double> val;  // ascending
    Matrix vec;               // columns; phase: largest-modulus entry real > 0
};

// Cyclic Jacobi for Hermitian matrices, deterministic sweep order.
HermEig jacobi_hermitian(const Matrix& H);

struct UnitaryEig {
    std::vector<cplx> val;
    Matrix vec;
};

// Eigendecomposition of a unitary matrix (simultaneous diagonalization of its
// Hermitian and anti-Hermitian parts).
UnitaryEig eig_unitary(const Matrix& U);

// Principal logarithm of a unitary: anti-Hermitian u with exp(u) = U and all
// eigen-angles in (-pi, pi). Throws E_BRANCH_CUT near -1.
Matrix principal_log(const Matrix& U);
Mat2 principal_log2(const Mat2& U);  // closed-form 2x2 path

// exp of an anti-Hermitian matrix via the Jacobi eigensolver.
Matrix exp_antiherm(const Matrix& u);
Mat2 exp_antiherm2(const Mat2& u);

// Gram-Schmidt with positive-diagonal upper-triangular change of basis.
Matrix gram_schmidt(const Matrix& frame);

// Loewdin orthonormalization F (F^dag F)^{-1/2}; used for frame transport.
Matrix polar_orthonormalize(const Matrix& F, double rank_tol = 1e-8);

// Deterministic pairwise tree summation (bitwise stable across thread counts).
double tree_sum(const std::vector<double>& v);

}  // namespace qb
