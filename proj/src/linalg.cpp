#include "qbundle/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qb {

static const cplx I_UNIT(0.0, 1.0);

double Mat2::max_abs() const {
    return std::max(std::max(std::abs(m00), std::abs(m01)), std::max(std::abs(m10), std::abs(m11)));
}

double max_abs_diff(const Mat2& a, const Mat2& b) { return (a - b).max_abs(); }

bool is_unitary2(const Mat2& u, double tol) {
    return max_abs_diff(u.adjoint() * u, Mat2::identity()) <= tol;
}

// ---------------------------------------------------------------------------
// quaternions
// ---------------------------------------------------------------------------

double Quat::norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

Quat Quat::normalized() const {
    double n = norm();
    if (n < 1e-300) throw Error("E_DEGENERATE", "cannot normalize zero quaternion");
    return {w / n, x / n, y / n, z / n};
}

double qdot(const Quat& a, const Quat& b) { return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z; }

// Multiplication rule derived from the E basis so that
// matrix_from_quaternion(qmul(a,b)) == matrix_from_quaternion(a)*matrix_from_quaternion(b).
// Vector part carries -(a x b) (mirror of the Hamilton convention).
Quat qmul(const Quat& a, const Quat& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + b.w * a.x - (a.y * b.z - a.z * b.y),
            a.w * b.y + b.w * a.y - (a.z * b.x - a.x * b.z),
            a.w * b.z + b.w * a.z - (a.x * b.y - a.y * b.x)};
}

Mat2 matrix_from_quaternion(const Quat& q) {
    return {cplx(q.w, q.z), cplx(-q.x, q.y), cplx(q.x, q.y), cplx(q.w, -q.z)};
}

Quat su2_coords(const Mat2& u) {
    if (std::abs(u.det() - cplx(1)) > 1e-8)
        throw Error("E_NOT_SPECIAL", "su2_coords: determinant differs from 1 beyond 1e-8");
    Quat q;
    q.w = 0.5 * (u.m00.real() + u.m11.real());
    q.z = 0.5 * (u.m00.imag() - u.m11.imag());
    q.x = 0.5 * (u.m10.real() - u.m01.real());
    q.y = 0.5 * (u.m10.imag() + u.m01.imag());
    return q;
}

Quat slerp(const Quat& a, const Quat& b, double t) {
    double d = qdot(a, b);
    if (d <= -1.0 + 1e-9)
        throw Error("E_ANTIPODAL", "slerp: endpoints are (nearly) antipodal on S^3");
    d = std::min(d, 1.0);
    double ang = std::acos(d);
    if (ang < 1e-9) {
        // nearly equal: linear blend + renormalize
        Quat r{a.w + t * (b.w - a.w), a.x + t * (b.x - a.x), a.y + t * (b.y - a.y), a.z + t * (b.z - a.z)};
        return r.normalized();
    }
    double s = std::sin(ang);
    double ca = std::sin((1.0 - t) * ang) / s, cb = std::sin(t * ang) / s;
    Quat r{ca * a.w + cb * b.w, ca * a.x + cb * b.x, ca * a.y + cb * b.y, ca * a.z + cb * b.z};
    return r.normalized();
}

std::array<double, 3> quat_log3(const Quat& q) {
    double vn = std::sqrt(q.x * q.x + q.y * q.y + q.z * q.z);
    double ang = std::atan2(vn, q.w);  // [0, pi]
    double scale = (vn < 1e-12) ? 1.0 : ang / vn;
    return {scale * q.x, scale * q.y, scale * q.z};
}

std::array<double, 4> lie_coords(const Mat2& u) {
    // u = i(alpha*1 + x.E), entries: u00 = i(alpha+x3), u11 = i(alpha-x3),
    // u10 = x1 + i x2, u01 = -x1 + i x2.
    return {0.5 * (u.m00.imag() + u.m11.imag()), u.m10.real(), u.m10.imag(),
            0.5 * (u.m00.imag() - u.m11.imag())};
}

Mat2 mat_from_lie_coords(const std::array<double, 4>& c) {
    double alpha = c[0], x1 = c[1], x2 = c[2], x3 = c[3];
    return {cplx(0, alpha + x3), cplx(-x1, x2), cplx(x1, x2), cplx(0, alpha - x3)};
}

// ---------------------------------------------------------------------------
// general matrices
// ---------------------------------------------------------------------------

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

Matrix Matrix::operator*(const Matrix& o) const {
    if (cols != o.rows) throw Error("E_INVALID_INPUT", "matrix product shape mismatch");
    Matrix r(rows, o.cols);
    for (int i = 0; i < rows; ++i)
        for (int k = 0; k < cols; ++k) {
            cplx aik = (*this)(i, k);
            if (aik == cplx(0)) continue;
            for (int j = 0; j < o.cols; ++j) r(i, j) += aik * o(k, j);
        }
    return r;
}

Matrix Matrix::operator+(const Matrix& o) const {
    Matrix r = *this;
    for (size_t i = 0; i < a.size(); ++i) r.a[i] += o.a[i];
    return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
    Matrix r = *this;
    for (size_t i = 0; i < a.size(); ++i) r.a[i] -= o.a[i];
    return r;
}

Matrix Matrix::operator*(cplx s) const {
    Matrix r = *this;
    for (auto& v : r.a) v *= s;
    return r;
}

Matrix Matrix::adjoint() const {
    Matrix r(cols, rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
}

Matrix Matrix::transpose() const {
    Matrix r(cols, rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) r(j, i) = (*this)(i, j);
    return r;
}

Matrix Matrix::conjugate() const {
    Matrix r = *this;
    for (auto& v : r.a) v = std::conj(v);
    return r;
}

double Matrix::max_abs() const {
    double m = 0;
    for (const auto& v : a) m = std::max(m, std::abs(v));
    return m;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    double m = 0;
    for (size_t i = 0; i < a.a.size(); ++i) m = std::max(m, std::abs(a.a[i] - b.a[i]));
    return m;
}

Mat2 to_mat2(const Matrix& m) {
    if (m.rows != 2 || m.cols != 2) throw Error("E_INVALID_INPUT", "to_mat2: not 2x2");
    return {m(0, 0), m(0, 1), m(1, 0), m(1, 1)};
}

Matrix from_mat2(const Mat2& m) {
    Matrix r(2, 2);
    r(0, 0) = m.m00; r(0, 1) = m.m01; r(1, 0) = m.m10; r(1, 1) = m.m11;
    return r;
}

cplx det(Matrix m) {
    if (m.rows != m.cols) throw Error("E_INVALID_INPUT", "det: not square");
    int n = m.rows;
    cplx d(1);
    for (int c = 0; c < n; ++c) {
        int piv = c;
        double best = std::abs(m(c, c));
        for (int r = c + 1; r < n; ++r)
            if (std::abs(m(r, c)) > best) { best = std::abs(m(r, c)); piv = r; }
        if (best == 0.0) return cplx(0);
        if (piv != c) {
            for (int j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
            d = -d;
        }
        d *= m(c, c);
        for (int r = c + 1; r < n; ++r) {
            cplx f = m(r, c) / m(c, c);
            for (int j = c; j < n; ++j) m(r, j) -= f * m(c, j);
        }
    }
    return d;
}

static cplx pfaffian_rec(std::vector<cplx>& a, std::vector<int>& idx, int n) {
    if (n == 0) return cplx(1);
    // expand along the row of idx[0]
    int i0 = idx[0];
    cplx acc(0);
    double sgn = 1.0;  // (-1)^j for j = 2..n alternating, starting +1
    for (int j = 1; j < n; ++j) {
        int ij = idx[j];
        cplx aij = a[static_cast<size_t>(i0) * 8 + ij];
        if (aij != cplx(0)) {
            std::vector<int> sub;
            sub.reserve(n - 2);
            for (int k = 1; k < n; ++k)
                if (k != j) sub.push_back(idx[k]);
            acc += sgn * aij * pfaffian_rec(a, sub, n - 2);
        }
        sgn = -sgn;
    }
    return acc;
}

cplx pfaffian(const Matrix& A) {
    if (A.rows != A.cols)
        throw Error("E_INVALID_INPUT", "pfaffian: matrix is not square");
    int n = A.rows;
    if (n % 2 != 0)
        throw Error("E_INVALID_INPUT", "pfaffian: dimension is odd (skew invariant requires even size)");
    if (n > 8) throw Error("E_INVALID_INPUT", "pfaffian: dimension exceeds the supported 8x8");
    double scale = std::max(1.0, A.max_abs());
    double skew = max_abs_diff(A, A.transpose() * cplx(-1));
    if (skew > 1e-10 * scale)
        throw Error("E_INVALID_INPUT",
                    "pfaffian: skew-symmetry violated, ||A + A^T||_max = " + std::to_string(skew));
    // pack into a fixed 8x8 buffer so recursion can index submatrices cheaply
    std::vector<cplx> buf(64, cplx(0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) buf[static_cast<size_t>(i) * 8 + j] = A(i, j);
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    return pfaffian_rec(buf, idx, n);
}

// ---------------------------------------------------------------------------
// eigensolvers
// ---------------------------------------------------------------------------

HermEig jacobi_hermitian(const Matrix& Hin) {
    if (Hin.rows != Hin.cols) throw Error("E_INVALID_INPUT", "jacobi: not square");
    int n = Hin.rows;
    double scale = std::max(1.0, Hin.max_abs());
    if (max_abs_diff(Hin, Hin.adjoint()) > 1e-9 * scale)
        throw Error("E_INVALID_INPUT", "jacobi: matrix is not Hermitian");
    Matrix H = Hin;
    // enforce exact Hermiticity so rotations stay consistent
    for (int i = 0; i < n; ++i) {
        H(i, i) = cplx(H(i, i).real(), 0.0);
        for (int j = i + 1; j < n; ++j) {
            cplx m = 0.5 * (H(i, j) + std::conj(H(j, i)));
            H(i, j) = m;
            H(j, i) = std::conj(m);
        }
    }
    Matrix V = Matrix::identity(n);
    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(H(p, q)));
        if (off <= 1e-15 * scale) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                cplx hpq = H(p, q);
                if (std::abs(hpq) <= 1e-18 * scale) continue;
                double app = H(p, p).real(), aqq = H(q, q).real();
                // 2x2 Hermitian rotation: diagonalize [[app, hpq],[conj(hpq), aqq]]
                double phi = std::arg(hpq);
                double t2 = 2.0 * std::abs(hpq);
                double theta = 0.5 * std::atan2(t2, app - aqq);
                double c = std::cos(theta);
                cplx s = std::sin(theta) * std::exp(cplx(0, phi));
                // apply J^dag H J with J = [[c, s],[-conj(s), c]] acting on (p,q)
                for (int k = 0; k < n; ++k) {
                    cplx hkp = H(k, p), hkq = H(k, q);
                    H(k, p) = c * hkp - std::conj(s) * hkq;
                    H(k, q) = s * hkp + c * hkq;
                }
                for (int k = 0; k < n; ++k) {
                    cplx hpk = H(p, k), hqk = H(q, k);
                    H(p, k) = c * hpk - s * hqk;
                    H(q, k) = std::conj(s) * hpk + c * hqk;
                }
                for (int k = 0; k < n; ++k) {
                    cplx vkp = V(k, p), vkq = V(k, q);
                    V(k, p) = c * vkp - std::conj(s) * vkq;
                    V(k, q) = s * vkp + c * vkq;
                }
                H(p, q) = 0;
                H(q, p) = 0;
                H(p, p) = cplx(H(p, p).real(), 0);
                H(q, q) = cplx(H(q, q).real(), 0);
            }
        }
    }
    // sort ascending, stable in the original index for reproducibility
    std::vector<int> ord(n);
    std::iota(ord.begin(), ord.end(), 0);
    std::stable_sort(ord.begin(), ord.end(),
                     [&](int i, int j) { return H(i, i).real() < H(j, j).real(); });
    HermEig out;
    out.val.resize(n);
    out.vec = Matrix(n, n);
    for (int c = 0; c < n; ++c) {
        out.val[c] = H(ord[c], ord[c]).real();
        // phase fix: largest-modulus component real positive (first on ties)
        int best = 0;
        double bm = -1;
        for (int r = 0; r < n; ++r) {
            double m = std::abs(V(r, ord[c]));
            if (m > bm + 1e-15) { bm = m; best = r; }
        }
        cplx ph = V(best, ord[c]);
        ph = (std::abs(ph) == 0.0) ? cplx(1) : std::conj(ph) / std::abs(ph);
        for (int r = 0; r < n; ++r) out.vec(r, c) = V(r, ord[c]) * ph;
    }
    return out;
}

UnitaryEig eig_unitary(const Matrix& U) {
    int n = U.rows;
    double scale = std::max(1.0, U.max_abs());
    if (max_abs_diff(U.adjoint() * U, Matrix::identity(n)) > 1e-8 * scale)
        throw Error("E_INVALID_INPUT", "eig_unitary: matrix is not unitary");
    // U = H1 + i H2 with commuting Hermitian H1, H2
    Matrix H1 = (U + U.adjoint()) * cplx(0.5);
    Matrix H2 = (U - U.adjoint()) * cplx(0, -0.5);
    HermEig e1 = jacobi_hermitian(H1);
    UnitaryEig out;
    out.val.resize(n);
    out.vec = Matrix(n, n);
    // group degenerate H1 eigenvalues, split each group with H2
    int i = 0;
    while (i < n) {
        int j = i + 1;
        while (j < n && std::abs(e1.val[j] - e1.val[i]) < 1e-9) ++j;
        int g = j - i;
        Matrix B(n, g);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < g; ++c) B(r, c) = e1.vec(r, i + c);
        Matrix K = B.adjoint() * (H2 * B);
        HermEig e2 = jacobi_hermitian(K);
        Matrix W = B * e2.vec;
        for (int c = 0; c < g; ++c) {
            for (int r = 0; r < n; ++r) out.vec(r, i + c) = W(r, c);
            out.val[i + c] = cplx(e1.val[i], 0) + cplx(0, 1) * cplx(e2.val[c], 0);
        }
        i = j;
    }
    // snap eigenvalues onto the unit circle and verify
    for (int c = 0; c < n; ++c) out.val[c] /= std::abs(out.val[c]);
    Matrix R(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) R(r, c) = out.vec(r, c) * out.val[c];
    if (max_abs_diff(U * out.vec, R) > 1e-7 * scale)
        throw Error("E_NUMERIC", "eig_unitary: residual verification failed");
    return out;
}

Matrix principal_log(const Matrix& U) {
    if (U.rows == 2 && U.cols == 2) return from_mat2(principal_log2(to_mat2(U)));
    UnitaryEig e = eig_unitary(U);
    int n = U.rows;
    for (auto& v : e.val) {
        double ang = std::arg(v);
        if (std::abs(std::abs(ang) - M_PI) < 1e-6)
            throw Error("E_BRANCH_CUT",
                        "principal_log: eigenvalue within 1e-6 of -1; refine the mesh or reanchor");
    }
    Matrix L(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            cplx acc(0);
            for (int k = 0; k < n; ++k)
                acc += e.vec(r, k) * cplx(0, std::arg(e.val[k])) * std::conj(e.vec(c, k));
            L(r, c) = acc;
        }
    // exact anti-Hermitization
    Matrix out = (L - L.adjoint()) * cplx(0.5);
    return out;
}

Mat2 principal_log2(const Mat2& U) {
    if (!is_unitary2(U, 1e-7)) throw Error("E_INVALID_INPUT", "principal_log2: not unitary");
    cplx d = U.det();
    double phi = std::arg(d);
    for (int cand = 0; cand < 2; ++cand) {
        double tbar = (cand == 0) ? 0.5 * phi : (phi > 0 ? 0.5 * phi - M_PI : 0.5 * phi + M_PI);
        Mat2 V = U * std::exp(cplx(0, -tbar));
        double ca = std::clamp(0.5 * V.trace().real(), -1.0, 1.0);
        double alpha = std::acos(ca);
        double t1 = tbar + alpha, t2 = tbar - alpha;
        if (std::max(std::abs(t1), std::abs(t2)) >= M_PI - 1e-6) continue;
        Mat2 T = (V - V.adjoint()) * cplx(0.5);  // = i sin(alpha) (n.E)
        double sa = std::sin(alpha);
        double scalefac = (sa < 1e-8) ? (1.0 + alpha * alpha / 6.0) : alpha / sa;
        Mat2 su = T * cplx(scalefac);
        return Mat2::diag(cplx(0, tbar), cplx(0, tbar)) + su;
    }
    throw Error("E_BRANCH_CUT",
                "principal_log2: eigenvalue within 1e-6 of -1; refine the mesh or reanchor");
}

Matrix exp_antiherm(const Matrix& u) {
    int n = u.rows;
    double scale = std::max(1.0, u.max_abs());
    if (max_abs_diff(u, u.adjoint() * cplx(-1)) > 1e-8 * scale)
        throw Error("E_INVALID_INPUT", "exp_antiherm: not anti-Hermitian");
    Matrix H = u * cplx(0, -1);  // Hermitian
    HermEig e = jacobi_hermitian(H);
    Matrix R(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            cplx acc(0);
            for (int k = 0; k < n; ++k)
                acc += e.vec(r, k) * std::exp(cplx(0, e.val[k])) * std::conj(e.vec(c, k));
            R(r, c) = acc;
        }
    return R;
}

Mat2 exp_antiherm2(const Mat2& u) {
    auto c = lie_coords(u);
    double alpha = c[0];
    double xn = std::sqrt(c[1] * c[1] + c[2] * c[2] + c[3] * c[3]);
    double co = std::cos(xn), si = (xn < 1e-12) ? 1.0 : std::sin(xn) / xn;
    Mat2 su = mat_from_lie_coords({0, c[1] * si, c[2] * si, c[3] * si});
    Mat2 r = Mat2::diag(co, co) + su;
    return r * std::exp(cplx(0, alpha));
}

Matrix gram_schmidt(const Matrix& frame) {
    Matrix Qm = frame;
    int n = frame.rows, k = frame.cols;
    for (int j = 0; j < k; ++j) {
        for (int i = 0; i < j; ++i) {
            cplx proj(0);
            for (int r = 0; r < n; ++r) proj += std::conj(Qm(r, i)) * Qm(r, j);
            for (int r = 0; r < n; ++r) Qm(r, j) -= proj * Qm(r, i);
        }
        double nrm = 0;
        for (int r = 0; r < n; ++r) nrm += std::norm(Qm(r, j));
        nrm = std::sqrt(nrm);
        if (nrm < 1e-8)
            throw Error("E_DEGENERATE_FRAME",
                        "gram_schmidt: column " + std::to_string(j) + " is linearly dependent");
        for (int r = 0; r < n; ++r) Qm(r, j) /= nrm;
    }
    return Qm;
}

Matrix polar_orthonormalize(const Matrix& F, double rank_tol) {
    Matrix G = F.adjoint() * F;  // k x k Hermitian
    HermEig e = jacobi_hermitian(G);
    int k = F.cols;
    for (int i = 0; i < k; ++i)
        if (e.val[i] < rank_tol * rank_tol)
            throw Error("E_DEGENERATE_FRAME", "polar_orthonormalize: rank-deficient frame");
    Matrix S(k, k);  // G^{-1/2}
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) {
            cplx acc(0);
            for (int m = 0; m < k; ++m)
                acc += e.vec(r, m) * (1.0 / std::sqrt(e.val[m])) * std::conj(e.vec(c, m));
            S(r, c) = acc;
        }
    return F * S;
}

double tree_sum(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    std::vector<double> cur = v;
    while (cur.size() > 1) {
        std::vector<double> nxt((cur.size() + 1) / 2);
        for (size_t i = 0; i + 1 < cur.size(); i += 2) nxt[i / 2] = cur[i] + cur[i + 1];
        if (cur.size() % 2) nxt.back() = cur.back();
        cur.swap(nxt);
    }
    return cur[0];
}

}  // namespace qb
