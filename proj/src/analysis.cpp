// SPDX-License-Identifier: Apache-2.0
#include "scsr/analysis.hpp"

#include <random>
#include <stdexcept>

#include <Eigen/LU>

namespace scsr {

std::pair<Matrix, Matrix> combine_two_layer(const LinearGateConfig& cfg) {
    if (cfg.h == 0.0)
        throw std::invalid_argument("combine_two_layer: gate slope h must be nonzero");
    const Eigen::Index n = cfg.w_next.rows();
    if (cfg.w_next.cols() != n || cfg.ws.size() != n)
        throw std::invalid_argument("combine_two_layer: shape mismatch");

    Eigen::FullPivLU<Matrix> lu(cfg.w_next);
    if (!lu.isInvertible())
        throw std::invalid_argument("combine_two_layer: W_next is singular");
    const Matrix inv = lu.inverse();
    const double cond = cfg.w_next.norm() * inv.norm();
    if (cond > 1e12)
        throw std::invalid_argument(
            "combine_two_layer: W_next ill-conditioned (cond ~ " +
            std::to_string(cond) + ")");

    Matrix mid = cfg.ws.asDiagonal();
    mid.diagonal().array() += cfg.theta_m / cfg.h;
    const Matrix w1 = cfg.w_next * mid * inv;
    return {w1, -cfg.theta_m * w1};
}

double verify_equivalence(const LinearGateConfig& cfg, const Matrix& drive) {
    const auto [w1, w2] = combine_two_layer(cfg);
    const Eigen::Index n = cfg.w_next.rows();
    const Eigen::Index nt = drive.cols();
    if (drive.rows() != n)
        throw std::invalid_argument("verify_equivalence: drive shape mismatch");

    // Two-layer system: the lower layer carries the self-recurrent gate
    // feedback, the upper layer reads it through W_next.
    Vector u_low = Vector::Zero(n);
    Vector u_up = Vector::Zero(n);
    // Combined single-layer recurrence with 1- and 2-step delayed feedback.
    Vector u_b1 = Vector::Zero(n); // u_b[t-1]
    Vector u_b2 = Vector::Zero(n); // u_b[t-2]

    double max_dev = 0.0;
    for (Eigen::Index t = 0; t < nt; ++t) {
        const Vector u_low_next = cfg.theta_m * u_low +
                                  cfg.ws.cwiseProduct(cfg.h * u_low) +
                                  drive.col(t);
        u_up = cfg.theta_m * u_up + cfg.w_next * (cfg.h * u_low_next);
        u_low = u_low_next;

        const Vector u_b = cfg.theta_m * u_b1 + w1 * (cfg.h * u_b1) +
                           w2 * (cfg.h * u_b2) +
                           cfg.h * (cfg.w_next * drive.col(t));
        u_b2 = u_b1;
        u_b1 = u_b;

        max_dev = std::max(max_dev, (u_up - u_b).cwiseAbs().maxCoeff());
    }
    return max_dev;
}

EquivalenceRow run_equivalence_trial(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> size_dist(2, 20);
    std::uniform_int_distribution<int> nt_dist(50, 200);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> h_dist(0.5, 1.5);

    EquivalenceRow row;
    row.seed = seed;
    row.size = size_dist(rng);
    row.timesteps = nt_dist(rng);

    LinearGateConfig cfg;
    cfg.theta_m = 0.9375;
    cfg.h = h_dist(rng);
    // Near-identity perturbation keeps W_next well conditioned; the small
    // self weights keep the lower layer contractive over 200 steps.
    cfg.w_next = Matrix::Identity(row.size, row.size);
    for (Eigen::Index i = 0; i < row.size; ++i)
        for (Eigen::Index j = 0; j < row.size; ++j)
            cfg.w_next(i, j) += 0.3 * unit(rng) / std::sqrt(double(row.size));
    cfg.ws.resize(row.size);
    for (Eigen::Index i = 0; i < row.size; ++i)
        cfg.ws[i] = 0.03 * unit(rng);

    Matrix drive(row.size, row.timesteps);
    for (Eigen::Index i = 0; i < drive.rows(); ++i)
        for (Eigen::Index t = 0; t < drive.cols(); ++t)
            drive(i, t) = 0.1 * unit(rng);

    row.deviation = verify_equivalence(cfg, drive);
    return row;
}

double spiking_mode_deviation(const LinearGateConfig& cfg, const Matrix& drive,
                              double v_th) {
    const auto [w1, w2] = combine_two_layer(cfg);
    const Eigen::Index n = cfg.w_next.rows();
    const Eigen::Index nt = drive.cols();

    auto fire = [v_th](const Vector& u) -> Vector {
        return (u.array() >= v_th).cast<double>();
    };

    Vector u_low = Vector::Zero(n), u_up = Vector::Zero(n);
    Vector s_low = Vector::Zero(n);
    Vector u_b = Vector::Zero(n), s_b1 = Vector::Zero(n), s_b2 = Vector::Zero(n);
    double max_dev = 0.0;
    for (Eigen::Index t = 0; t < nt; ++t) {
        const Vector u_low_next =
            cfg.theta_m * u_low + cfg.ws.cwiseProduct(s_low) + drive.col(t);
        const Vector s_low_next = fire(u_low_next);
        u_low = u_low_next.cwiseProduct(Vector::Ones(n) - s_low_next);
        s_low = s_low_next;
        u_up = cfg.theta_m * u_up + cfg.w_next * s_low_next;

        Vector u_b_next = cfg.theta_m * u_b + w1 * s_b1 + w2 * s_b2 +
                          cfg.w_next * drive.col(t);
        s_b2 = s_b1;
        s_b1 = fire(u_b_next);
        u_b = u_b_next;

        max_dev = std::max(max_dev, (u_up - u_b_next).cwiseAbs().maxCoeff());
    }
    return max_dev;
}

} // namespace scsr
