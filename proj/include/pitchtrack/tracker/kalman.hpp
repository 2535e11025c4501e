#ifndef PITCHTRACK_TRACKER_KALMAN_HPP
#define PITCHTRACK_TRACKER_KALMAN_HPP

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "../core/error.hpp"
#include "../core/geometry.hpp"

namespace pitchtrack {

using Vector8 = Eigen::Matrix<double, 8, 1>;
using Matrix8 = Eigen::Matrix<double, 8, 8>;
using Vector4 = Eigen::Matrix<double, 4, 1>;
using Matrix4 = Eigen::Matrix<double, 4, 4>;

/**
 * Noise model of the constant-velocity box filter.
 *
 * Position-like standard deviations are proportional to the box height;
 * aspect-ratio terms are absolute. The defaults are the usual
 * SORT/ByteTrack weights (1/20 for position, 1/160 for velocity).
 */
struct KalmanNoise {
    double init_position_weight = 2.0 / 20;
    double init_velocity_weight = 10.0 / 160;
    double init_aspect_std = 1e-2;
    double init_aspect_velocity_std = 1e-5;

    double process_position_weight = 1.0 / 20;
    double process_velocity_weight = 1.0 / 160;
    double process_aspect_std = 1e-2;
    double process_aspect_velocity_std = 1e-5;

    double measurement_position_weight = 1.0 / 20;
    double measurement_aspect_std = 1e-1;

    /// Exact measurements and exact constant-velocity motion; velocity is
    /// still allowed to drift so the innovation covariance stays invertible.
    static KalmanNoise noise_free() {
        KalmanNoise n;
        n.process_position_weight = 0;
        n.process_aspect_std = 0;
        n.measurement_position_weight = 0;
        n.measurement_aspect_std = 0;
        return n;
    }
};

/// Mean is (cx, cy, a, h, vcx, vcy, va, vh) in pixel/frame units.
struct KalmanState {
    Vector8 mean = Vector8::Zero();
    Matrix8 covariance = Matrix8::Identity();

    CenterForm position() const {
        return {mean(0), mean(1), std::max(mean(2), 1e-6), std::max(mean(3), 1e-6)};
    }

    BoundingBox box() const { return to_box(position()); }
};

class KalmanFilter {
public:
    explicit KalmanFilter(KalmanNoise noise = {}) : noise_(noise) {
        motion_.setIdentity();
        for (int i = 0; i < 4; ++i) {
            motion_(i, 4 + i) = 1;
        }
    }

    const KalmanNoise& noise() const { return noise_; }

    KalmanState initiate(const CenterForm& m) const {
        KalmanState s;
        s.mean << m.cx, m.cy, m.a, m.h, 0, 0, 0, 0;
        const double h = m.h;
        Vector8 std;
        std << noise_.init_position_weight * h, noise_.init_position_weight * h, noise_.init_aspect_std,
            noise_.init_position_weight * h, noise_.init_velocity_weight * h, noise_.init_velocity_weight * h,
            noise_.init_aspect_velocity_std, noise_.init_velocity_weight * h;
        s.covariance = std.array().square().matrix().asDiagonal();
        return s;
    }

    KalmanState predict(const KalmanState& s) const {
        const double h = s.mean(3);
        Vector8 std;
        std << noise_.process_position_weight * h, noise_.process_position_weight * h, noise_.process_aspect_std,
            noise_.process_position_weight * h, noise_.process_velocity_weight * h,
            noise_.process_velocity_weight * h, noise_.process_aspect_velocity_std,
            noise_.process_velocity_weight * h;
        KalmanState out;
        out.mean = motion_ * s.mean;
        out.covariance = motion_ * s.covariance * motion_.transpose();
        out.covariance.diagonal() += std.array().square().matrix();
        symmetrize(out.covariance);
        return out;
    }

    /// Measurement-space mean and covariance (including measurement noise).
    std::pair<Vector4, Matrix4> project(const KalmanState& s) const {
        const double h = s.mean(3);
        Vector4 std;
        std << noise_.measurement_position_weight * h, noise_.measurement_position_weight * h,
            noise_.measurement_aspect_std, noise_.measurement_position_weight * h;
        Matrix4 cov = s.covariance.topLeftCorner<4, 4>();
        cov.diagonal() += std.array().square().matrix();
        return {s.mean.head<4>(), cov};
    }

    KalmanState update(const KalmanState& s, const CenterForm& z) const {
        const auto [projected_mean, projected_cov] = project(s);
        Eigen::LLT<Matrix4> chol(projected_cov);
        if (chol.info() != Eigen::Success) {
            throw NumericError("innovation covariance is not positive definite");
        }
        // K = P H^T S^-1; P H^T is the left 8x4 block of P.
        const Eigen::Matrix<double, 8, 4> pht = s.covariance.leftCols<4>();
        const Eigen::Matrix<double, 8, 4> gain = chol.solve(pht.transpose()).transpose();
        Vector4 measurement;
        measurement << z.cx, z.cy, z.a, z.h;
        const Vector4 innovation = measurement - projected_mean;

        KalmanState out;
        out.mean = s.mean + gain * innovation;
        out.covariance = s.covariance - gain * projected_cov * gain.transpose();
        symmetrize(out.covariance);
        if (!out.mean.allFinite() || !out.covariance.allFinite()) {
            throw NumericError("non-finite Kalman state after update");
        }
        out.mean(2) = std::max(out.mean(2), 1e-6);
        out.mean(3) = std::max(out.mean(3), 1e-6);
        return out;
    }

private:
    static void symmetrize(Matrix8& m) { m = 0.5 * (m + m.transpose()).eval(); }

    KalmanNoise noise_;
    Matrix8 motion_;
};

inline KalmanState kf_initiate(const CenterForm& m, const KalmanNoise& noise = {}) {
    return KalmanFilter(noise).initiate(m);
}

inline KalmanState kf_predict(const KalmanState& s, const KalmanNoise& noise = {}) {
    return KalmanFilter(noise).predict(s);
}

inline KalmanState kf_update(const KalmanState& s, const CenterForm& z, const KalmanNoise& noise = {}) {
    return KalmanFilter(noise).update(s, z);
}

} // namespace pitchtrack

#endif
