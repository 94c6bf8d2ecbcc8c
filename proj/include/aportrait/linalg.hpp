#pragma once

#include <array>
#include <cassert>
#include <cmath>

namespace aportrait {

// Fixed-capacity vector for 2- and 3-dimensional phase spaces.
// Value type, no allocation; size is 2 or 3.
class Vec {
public:
    Vec() = default;
    Vec(double x, double y) : v_{x, y, 0.0}, n_(2) {}
    Vec(double x, double y, double z) : v_{x, y, z}, n_(3) {}

    static Vec zero(int n) {
        assert(n == 2 || n == 3);
        Vec v;
        v.n_ = n;
        return v;
    }
    static Vec from(const double* p, int n) {
        Vec v = zero(n);
        for (int i = 0; i < n; ++i) v.v_[i] = p[i];
        return v;
    }

    int size() const { return n_; }
    double operator[](int i) const { return v_[i]; }
    double& operator[](int i) { return v_[i]; }
    const double* data() const { return v_.data(); }
    double* data() { return v_.data(); }

    Vec operator+(const Vec& o) const {
        Vec r = *this;
        for (int i = 0; i < n_; ++i) r.v_[i] += o.v_[i];
        return r;
    }
    Vec operator-(const Vec& o) const {
        Vec r = *this;
        for (int i = 0; i < n_; ++i) r.v_[i] -= o.v_[i];
        return r;
    }
    Vec operator*(double s) const {
        Vec r = *this;
        for (int i = 0; i < n_; ++i) r.v_[i] *= s;
        return r;
    }
    Vec operator-() const { return *this * -1.0; }

    double dot(const Vec& o) const {
        double s = 0;
        for (int i = 0; i < n_; ++i) s += v_[i] * o.v_[i];
        return s;
    }
    double norm() const { return std::sqrt(dot(*this)); }
    double norm_inf() const {
        double m = 0;
        for (int i = 0; i < n_; ++i) m = std::max(m, std::fabs(v_[i]));
        return m;
    }
    Vec normalized() const {
        double n = norm();
        return n > 0 ? *this * (1.0 / n) : *this;
    }
    bool finite() const {
        for (int i = 0; i < n_; ++i)
            if (!std::isfinite(v_[i])) return false;
        return true;
    }
    double distance(const Vec& o) const { return (*this - o).norm(); }

    // 3-component cross product; 2-vectors are treated as embedded in z=0.
    Vec cross(const Vec& o) const {
        Vec r(v_[1] * o.v_[2] - v_[2] * o.v_[1],
              v_[2] * o.v_[0] - v_[0] * o.v_[2],
              v_[0] * o.v_[1] - v_[1] * o.v_[0]);
        return r;
    }

private:
    std::array<double, 3> v_{};
    int n_ = 0;
};

inline Vec operator*(double s, const Vec& v) { return v * s; }

// Dense n-by-n real matrix, n in {2, 3}.
class Mat {
public:
    Mat() = default;
    explicit Mat(int n) : n_(n) { assert(n == 2 || n == 3); }

    static Mat identity(int n) {
        Mat m(n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
    static Mat zero(int n) { return Mat(n); }

    int size() const { return n_; }
    double operator()(int i, int j) const { return a_[i * 3 + j]; }
    double& operator()(int i, int j) { return a_[i * 3 + j]; }

    Vec row(int i) const {
        Vec r = Vec::zero(n_);
        for (int j = 0; j < n_; ++j) r[j] = (*this)(i, j);
        return r;
    }
    Vec col(int j) const {
        Vec c = Vec::zero(n_);
        for (int i = 0; i < n_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    double trace() const {
        double t = 0;
        for (int i = 0; i < n_; ++i) t += (*this)(i, i);
        return t;
    }
    double det() const {
        if (n_ == 2)
            return (*this)(0, 0) * (*this)(1, 1) - (*this)(0, 1) * (*this)(1, 0);
        const Mat& m = *this;
        return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
               m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
               m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    }
    Mat transpose() const {
        Mat t(n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }
    double frobenius_norm() const {
        double s = 0;
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) s += (*this)(i, j) * (*this)(i, j);
        return std::sqrt(s);
    }
    double max_abs() const {
        double m = 0;
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) m = std::max(m, std::fabs((*this)(i, j)));
        return m;
    }
    bool finite() const {
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                if (!std::isfinite((*this)(i, j))) return false;
        return true;
    }

    Mat operator+(const Mat& o) const {
        Mat r = *this;
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) r(i, j) += o(i, j);
        return r;
    }
    Mat operator-(const Mat& o) const {
        Mat r = *this;
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) r(i, j) -= o(i, j);
        return r;
    }
    Mat operator*(double s) const {
        Mat r = *this;
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) r(i, j) *= s;
        return r;
    }
    Mat operator*(const Mat& o) const {
        Mat r(n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) {
                double s = 0;
                for (int k = 0; k < n_; ++k) s += (*this)(i, k) * o(k, j);
                r(i, j) = s;
            }
        return r;
    }
    Vec apply(const Vec& v) const {
        Vec r = Vec::zero(n_);
        for (int i = 0; i < n_; ++i) {
            double s = 0;
            for (int j = 0; j < n_; ++j) s += (*this)(i, j) * v[j];
            r[i] = s;
        }
        return r;
    }

private:
    std::array<double, 9> a_{};
    int n_ = 0;
};

inline Mat operator*(double s, const Mat& m) { return m * s; }

}  // namespace aportrait
