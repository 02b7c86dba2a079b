#ifndef CCLAB_MAT_HPP
#define CCLAB_MAT_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>

namespace cclab {

// Small dense vector with inline storage. Ambient dimensions here never
// exceed 8; matrix sides never exceed 12.
inline constexpr int kMaxVec = 8;
inline constexpr int kMaxMat = 12;

class Vec {
public:
    Vec() = default;
    explicit Vec(int n) : n_(check_size(n)) { v_.fill(0.0); }
    Vec(std::initializer_list<double> xs) : n_(check_size(static_cast<int>(xs.size()))) {
        int i = 0;
        for (double x : xs) v_[static_cast<size_t>(i++)] = x;
    }

    int size() const { return n_; }
    double& operator[](int i) { return v_[static_cast<size_t>(i)]; }
    double operator[](int i) const { return v_[static_cast<size_t>(i)]; }
    const double* data() const { return v_.data(); }
    double* data() { return v_.data(); }

    Vec& operator+=(const Vec& o) {
        for (int i = 0; i < n_; ++i) v_[static_cast<size_t>(i)] += o[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        for (int i = 0; i < n_; ++i) v_[static_cast<size_t>(i)] -= o[i];
        return *this;
    }
    Vec& operator*=(double c) {
        for (int i = 0; i < n_; ++i) v_[static_cast<size_t>(i)] *= c;
        return *this;
    }

    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend Vec operator*(double c, Vec a) { return a *= c; }
    friend Vec operator*(Vec a, double c) { return a *= c; }
    friend Vec operator-(Vec a) { return a *= -1.0; }

private:
    static int check_size(int n) {
        if (n < 0 || n > kMaxVec) throw std::invalid_argument("Vec: bad size " + std::to_string(n));
        return n;
    }
    std::array<double, kMaxVec> v_{};
    int n_ = 0;
};

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (int i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec axpy(double c, const Vec& x, const Vec& y) {
    Vec r = y;
    for (int i = 0; i < r.size(); ++i) r[i] += c * x[i];
    return r;
}

inline bool all_finite(const Vec& a) {
    for (int i = 0; i < a.size(); ++i)
        if (!std::isfinite(a[i])) return false;
    return true;
}

// Row-major small dense matrix, inline storage. Used for frames, Riccati
// unknowns and coefficient matrices (sides <= 12 at desk scale).
class Mat {
public:
    Mat() = default;
    Mat(int rows, int cols) : r_(check(rows)), c_(check(cols)) { a_.fill(0.0); }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
    static Mat zero(int rows, int cols) { return Mat(rows, cols); }

    int rows() const { return r_; }
    int cols() const { return c_; }

    double& operator()(int i, int j) { return a_[static_cast<size_t>(i * c_ + j)]; }
    double operator()(int i, int j) const { return a_[static_cast<size_t>(i * c_ + j)]; }

    Mat& operator+=(const Mat& o) {
        for (int i = 0; i < r_ * c_; ++i) a_[static_cast<size_t>(i)] += o.a_[static_cast<size_t>(i)];
        return *this;
    }
    Mat& operator-=(const Mat& o) {
        for (int i = 0; i < r_ * c_; ++i) a_[static_cast<size_t>(i)] -= o.a_[static_cast<size_t>(i)];
        return *this;
    }
    Mat& operator*=(double c) {
        for (int i = 0; i < r_ * c_; ++i) a_[static_cast<size_t>(i)] *= c;
        return *this;
    }
    friend Mat operator+(Mat a, const Mat& b) { return a += b; }
    friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
    friend Mat operator*(double c, Mat a) { return a *= c; }
    friend Mat operator*(Mat a, double c) { return a *= c; }

    friend Mat operator*(const Mat& a, const Mat& b) {
        Mat r(a.r_, b.c_);
        for (int i = 0; i < a.r_; ++i)
            for (int k = 0; k < a.c_; ++k) {
                const double aik = a(i, k);
                if (aik == 0.0) continue;
                for (int j = 0; j < b.c_; ++j) r(i, j) += aik * b(k, j);
            }
        return r;
    }

    Mat transposed() const {
        Mat r(c_, r_);
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    Mat block(int i0, int j0, int rows, int cols) const {
        Mat r(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) r(i, j) = (*this)(i0 + i, j0 + j);
        return r;
    }

    void set_block(int i0, int j0, const Mat& b) {
        for (int i = 0; i < b.rows(); ++i)
            for (int j = 0; j < b.cols(); ++j) (*this)(i0 + i, j0 + j) = b(i, j);
    }

    double trace() const {
        double s = 0.0;
        for (int i = 0; i < r_; ++i) s += (*this)(i, i);
        return s;
    }

    double max_abs() const {
        double s = 0.0;
        for (int i = 0; i < r_ * c_; ++i) s = std::fmax(s, std::fabs(a_[static_cast<size_t>(i)]));
        return s;
    }

    double min_entry() const {
        double s = a_[0];
        for (int i = 1; i < r_ * c_; ++i) s = std::fmin(s, a_[static_cast<size_t>(i)]);
        return s;
    }

    double symmetry_defect() const {
        double s = 0.0;
        for (int i = 0; i < r_; ++i)
            for (int j = i + 1; j < c_; ++j) s = std::fmax(s, std::fabs((*this)(i, j) - (*this)(j, i)));
        return s;
    }

    void symmetrize() {
        for (int i = 0; i < r_; ++i)
            for (int j = i + 1; j < c_; ++j) {
                const double v = 0.5 * ((*this)(i, j) + (*this)(j, i));
                (*this)(i, j) = v;
                (*this)(j, i) = v;
            }
    }

private:
    static int check(int n) {
        if (n < 0 || n > kMaxMat) throw std::invalid_argument("Mat: bad size " + std::to_string(n));
        return n;
    }
    std::array<double, kMaxMat * kMaxMat> a_{};
    int r_ = 0, c_ = 0;
};

Vec matvec(const Mat& m, const Vec& v);

// LU with partial pivoting; throws on (near-)singular input.
Mat inverse(const Mat& m);
double determinant(const Mat& m);

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
std::array<double, kMaxMat> symmetric_eigenvalues(const Mat& m);

// Smallest eigenvalue of the symmetric part; used for Loewner-order checks.
double min_symmetric_eigenvalue(const Mat& m);

}  // namespace cclab

#endif
