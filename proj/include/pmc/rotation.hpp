#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace pmc {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline Mat3 skew(const Vec3& w) {
    Mat3 s;
    s << 0, -w.z(), w.y(),
         w.z(), 0, -w.x(),
         -w.y(), w.x(), 0;
    return s;
}

/// Axis-angle (unnormalized, |w| = angle in radians) to rotation matrix.
inline Mat3 rodrigues(const Vec3& w) {
    const double t2 = w.squaredNorm();
    const double t = std::sqrt(t2);
    double a, b;  // R = I + a*[w]x + b*[w]x^2
    if (t < 1e-8) {
        a = 1.0 - t2 / 6.0;
        b = 0.5 - t2 / 24.0;
    } else {
        a = std::sin(t) / t;
        b = (1.0 - std::cos(t)) / t2;
    }
    const Mat3 K = skew(w);
    return Mat3::Identity() + a * K + b * K * K;
}

/// Rotation matrix to axis-angle. Handles the angle-pi branch.
inline Vec3 log_rotation(const Mat3& R) {
    const double tr = R.trace();
    const double c = std::max(-1.0, std::min(1.0, (tr - 1.0) * 0.5));
    const double angle = std::acos(c);
    if (angle < 1e-10) {
        // first-order: R ~ I + [w]x
        return Vec3(R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1)) * 0.5;
    }
    if (angle > M_PI - 1e-6) {
        // near pi: axis from the symmetric part
        Mat3 S = 0.5 * (R + Mat3::Identity());
        Vec3 axis(std::sqrt(std::max(0.0, S(0, 0))),
                  std::sqrt(std::max(0.0, S(1, 1))),
                  std::sqrt(std::max(0.0, S(2, 2))));
        // fix signs against the off-diagonals
        int k = 0;
        axis.cwiseAbs().maxCoeff(&k);
        if (axis[k] > 0) {
            if (k == 0) {
                axis.y() = std::copysign(axis.y(), S(0, 1));
                axis.z() = std::copysign(axis.z(), S(0, 2));
            } else if (k == 1) {
                axis.x() = std::copysign(axis.x(), S(0, 1));
                axis.z() = std::copysign(axis.z(), S(1, 2));
            } else {
                axis.x() = std::copysign(axis.x(), S(0, 2));
                axis.y() = std::copysign(axis.y(), S(1, 2));
            }
        }
        axis.normalize();
        return axis * angle;
    }
    Vec3 w(R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1));
    return w * (angle / (2.0 * std::sin(angle)));
}

/// d(rodrigues(w))/dw_i, the Gallego-Yezzi closed form.
inline Mat3 rodrigues_derivative(const Vec3& w, const Mat3& R, int i) {
    const double t2 = w.squaredNorm();
    Vec3 e = Vec3::Zero();
    e[i] = 1.0;
    if (t2 < 1e-14) return skew(e);
    const Vec3 v = w.cross((Mat3::Identity() - R) * e);
    return ((w[i] * skew(w) + skew(v)) / t2) * R;
}

/// Pull an adjoint dL/dR (3x3) back to dL/dw for R = rodrigues(w).
inline Vec3 rodrigues_grad(const Vec3& w, const Mat3& R, const Mat3& dR) {
    Vec3 g;
    for (int i = 0; i < 3; ++i)
        g[i] = (rodrigues_derivative(w, R, i).array() * dR.array()).sum();
    return g;
}

}  // namespace pmc
