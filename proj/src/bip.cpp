// SPDX-License-Identifier: Apache-2.0
#include "scsr/bip.hpp"

#include <stdexcept>

namespace scsr {

Matrix carried_potentials(const LayerTrace& trace, const LifParams& lif,
                          bool smooth) {
    if (smooth)
        return trace.u;
    Matrix u_post(trace.u.rows(), trace.u.cols());
    for (Eigen::Index t = 0; t < trace.u.cols(); ++t)
        u_post.col(t) =
            post_reset(trace.u.col(t), trace.s.col(t), lif.v_th, lif.reset_mode);
    return u_post;
}

Vector grad_theta(const Matrix& u_post, const Matrix& delta) {
    if (u_post.rows() != delta.rows() || u_post.cols() != delta.cols())
        throw std::invalid_argument("grad_theta: shape mismatch");
    const Eigen::Index nt = delta.cols();
    if (nt < 2)
        return Vector::Zero(delta.rows());
    return u_post.leftCols(nt - 1)
        .cwiseProduct(delta.rightCols(nt - 1))
        .rowwise()
        .sum();
}

Vector apply_theta_update(const Vector& theta, const Vector& step) {
    if (theta.size() != step.size())
        throw std::invalid_argument("apply_theta_update: shape mismatch");
    return (theta - step).cwiseMax(0.01).cwiseMin(0.999);
}

} // namespace scsr
