#include "cclab/mat.hpp"

#include <algorithm>
#include <cmath>

namespace cclab {

Vec matvec(const Mat& m, const Vec& v) {
    Vec r(m.rows());
    for (int i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (int j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

namespace {

// LU decomposition with partial pivoting, in place; returns permutation sign
// or 0 when a pivot underflows.
int lu_decompose(Mat& a, std::array<int, kMaxMat>& piv) {
    const int n = a.rows();
    int sign = 1;
    for (int i = 0; i < n; ++i) piv[static_cast<size_t>(i)] = i;
    for (int col = 0; col < n; ++col) {
        int best = col;
        double bestval = std::fabs(a(col, col));
        for (int i = col + 1; i < n; ++i) {
            const double v = std::fabs(a(i, col));
            if (v > bestval) {
                bestval = v;
                best = i;
            }
        }
        if (bestval < 1e-300) return 0;
        if (best != col) {
            for (int j = 0; j < n; ++j) std::swap(a(col, j), a(best, j));
            std::swap(piv[static_cast<size_t>(col)], piv[static_cast<size_t>(best)]);
            sign = -sign;
        }
        for (int i = col + 1; i < n; ++i) {
            a(i, col) /= a(col, col);
            const double f = a(i, col);
            for (int j = col + 1; j < n; ++j) a(i, j) -= f * a(col, j);
        }
    }
    return sign;
}

}  // namespace

Mat inverse(const Mat& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse: non-square");
    const int n = m.rows();
    Mat lu = m;
    std::array<int, kMaxMat> piv{};
    if (lu_decompose(lu, piv) == 0) throw std::runtime_error("inverse: singular matrix");
    Mat inv(n, n);
    for (int rhs = 0; rhs < n; ++rhs) {
        std::array<double, kMaxMat> x{};
        for (int i = 0; i < n; ++i) x[static_cast<size_t>(i)] = (piv[static_cast<size_t>(i)] == rhs) ? 1.0 : 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < i; ++j) x[static_cast<size_t>(i)] -= lu(i, j) * x[static_cast<size_t>(j)];
        for (int i = n - 1; i >= 0; --i) {
            for (int j = i + 1; j < n; ++j) x[static_cast<size_t>(i)] -= lu(i, j) * x[static_cast<size_t>(j)];
            x[static_cast<size_t>(i)] /= lu(i, i);
        }
        for (int i = 0; i < n; ++i) inv(i, rhs) = x[static_cast<size_t>(i)];
    }
    return inv;
}

double determinant(const Mat& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant: non-square");
    Mat lu = m;
    std::array<int, kMaxMat> piv{};
    const int sign = lu_decompose(lu, piv);
    if (sign == 0) return 0.0;
    double d = sign;
    for (int i = 0; i < m.rows(); ++i) d *= lu(i, i);
    return d;
}

std::array<double, kMaxMat> symmetric_eigenvalues(const Mat& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("symmetric_eigenvalues: non-square");
    const int n = m.rows();
    Mat a = m;
    a.symmetrize();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (off < 1e-30 * std::fmax(1.0, a.max_abs() * a.max_abs())) break;
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (std::fabs(a(p, q)) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int i = 0; i < n; ++i) {
                    const double aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
                for (int i = 0; i < n; ++i) {
                    const double api = a(p, i), aqi = a(q, i);
                    a(p, i) = c * api - s * aqi;
                    a(q, i) = s * api + c * aqi;
                }
            }
    }
    std::array<double, kMaxMat> ev{};
    for (int i = 0; i < n; ++i) ev[static_cast<size_t>(i)] = a(i, i);
    std::sort(ev.begin(), ev.begin() + n);
    return ev;
}

double min_symmetric_eigenvalue(const Mat& m) {
    Mat s = m;
    s.symmetrize();
    return symmetric_eigenvalues(s)[0];
}

}  // namespace cclab
