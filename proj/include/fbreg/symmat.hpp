// Dense symmetric 1x1 / 2x2 matrices with closed-form spectral data.
#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace fbreg {

// Symmetric matrix of dimension 1 or 2. Only the upper triangle is stored;
// for dim == 1 the entries a12 and a22 are ignored.
struct SymMat {
    int dim = 2;
    double a11 = 0.0;
    double a12 = 0.0;
    double a22 = 0.0;

    SymMat() = default;
    SymMat(double m11, double m12, double m22) : dim(2), a11(m11), a12(m12), a22(m22) {}

    static SymMat zero(int d = 2) {
        SymMat m;
        m.dim = check_dim(d);
        return m;
    }

    static SymMat identity(int d = 2) {
        SymMat m = zero(d);
        m.a11 = 1.0;
        if (d == 2) m.a22 = 1.0;
        return m;
    }

    static SymMat diag(double d1, double d2) { return SymMat(d1, 0.0, d2); }

    static SymMat scalar1d(double v) {
        SymMat m = zero(1);
        m.a11 = v;
        return m;
    }

    // e (x) e for a 2-vector e; the caller normalizes e if a unit direction is meant.
    static SymMat outer(double ex, double ey) { return SymMat(ex * ex, ex * ey, ey * ey); }

    double trace() const { return dim == 1 ? a11 : a11 + a22; }

    double frobenius_norm() const {
        if (dim == 1) return std::abs(a11);
        return std::sqrt(a11 * a11 + 2.0 * a12 * a12 + a22 * a22);
    }

    // Closed-form eigenvalues; entry [1] is meaningless for dim == 1.
    std::array<double, 2> eigenvalues() const {
        if (dim == 1) return {a11, 0.0};
        const double mean = (a11 + a22) / 2.0;
        const double dev = std::hypot((a11 - a22) / 2.0, a12);
        return {mean + dev, mean - dev};
    }

    // Angle of the eigenvector belonging to eigenvalues()[0] (dim == 2 only).
    double principal_angle() const {
        if (dim == 1) return 0.0;
        if (a12 == 0.0) return a11 >= a22 ? 0.0 : std::acos(-1.0) / 2.0;
        return 0.5 * std::atan2(2.0 * a12, a11 - a22);
    }

    SymMat operator+(const SymMat& o) const {
        require_same_dim(o);
        SymMat r = *this;
        r.a11 += o.a11;
        r.a12 += o.a12;
        r.a22 += o.a22;
        return r;
    }

    SymMat operator-(const SymMat& o) const {
        require_same_dim(o);
        SymMat r = *this;
        r.a11 -= o.a11;
        r.a12 -= o.a12;
        r.a22 -= o.a22;
        return r;
    }

    SymMat operator-() const {
        SymMat r = *this;
        r.a11 = -r.a11;
        r.a12 = -r.a12;
        r.a22 = -r.a22;
        return r;
    }

    SymMat operator*(double t) const {
        SymMat r = *this;
        r.a11 *= t;
        r.a12 *= t;
        r.a22 *= t;
        return r;
    }

    // trace(this * other) for symmetric arguments.
    double inner(const SymMat& o) const {
        require_same_dim(o);
        if (dim == 1) return a11 * o.a11;
        return a11 * o.a11 + 2.0 * a12 * o.a12 + a22 * o.a22;
    }

    SymMat add_scaled_identity(double t) const {
        SymMat r = *this;
        r.a11 += t;
        if (dim == 2) r.a22 += t;
        return r;
    }

private:
    static int check_dim(int d) {
        if (d != 1 && d != 2) throw std::invalid_argument("SymMat: dim must be 1 or 2");
        return d;
    }
    void require_same_dim(const SymMat& o) const {
        if (dim != o.dim) throw std::invalid_argument("SymMat: dimension mismatch");
    }
};

inline SymMat operator*(double t, const SymMat& m) { return m * t; }

// R(phi) diag(d1, d2) R(phi)^T
inline SymMat rotated_diag(double d1, double d2, double phi) {
    const double c = std::cos(phi), s = std::sin(phi);
    return SymMat(c * c * d1 + s * s * d2, c * s * (d1 - d2), s * s * d1 + c * c * d2);
}

}  // namespace fbreg
