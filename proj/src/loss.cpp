// SPDX-License-Identifier: Apache-2.0
#include "scsr/loss.hpp"

#include <stdexcept>

namespace scsr {

Matrix vr_filter(const Matrix& train, double kernel_tau) {
    if (kernel_tau < 1.0)
        throw std::invalid_argument("vr_filter: kernel_tau must be >= 1");
    const double lam = 1.0 - 1.0 / kernel_tau;
    Matrix f(train.rows(), train.cols());
    Vector acc = Vector::Zero(train.rows());
    for (Eigen::Index t = 0; t < train.cols(); ++t) {
        acc = lam * acc + train.col(t);
        f.col(t) = acc;
    }
    return f;
}

double vr_loss(const TargetRaster& target, const Matrix& s, double kernel_tau) {
    if (target.d.rows() != s.rows() || target.d.cols() != s.cols())
        throw std::invalid_argument("vr_loss: shape mismatch");
    const Matrix diff = vr_filter(target.d, kernel_tau) - vr_filter(s, kernel_tau);
    double loss = 0.0;
    for (Eigen::Index t = target.warmup; t < diff.cols(); ++t)
        loss += 0.5 * diff.col(t).squaredNorm();
    return loss;
}

Vector output_error(const TargetRaster& target, const Matrix& s,
                    double kernel_tau, Eigen::Index t_k) {
    if (t_k < 0 || t_k >= s.cols())
        throw std::out_of_range("output_error: t_k out of range");
    if (t_k < target.warmup)
        return Vector::Zero(s.rows()); // excluded from the loss
    const Matrix diff = vr_filter(target.d, kernel_tau) - vr_filter(s, kernel_tau);
    return -diff.col(t_k);
}

TargetRaster make_classification_target(int class_count, int label,
                                        Eigen::Index timesteps, int warmup,
                                        int period) {
    if (label < 0 || label >= class_count)
        throw std::invalid_argument("target label out of range");
    TargetRaster target;
    target.warmup = warmup;
    target.d = Matrix::Zero(class_count, timesteps);
    for (Eigen::Index t = warmup; t < timesteps; t += period)
        target.d(label, t) = 1.0;
    return target;
}

} // namespace scsr
