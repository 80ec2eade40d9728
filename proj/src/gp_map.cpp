#include "saegt/gp_map.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace saegt {

void Hyperparams::validate() const {
    if (!std::isfinite(signal_variance) || !std::isfinite(length_scale) ||
        !std::isfinite(noise_variance) || !std::isfinite(jitter) ||
        !std::isfinite(prior_mean))
        throw std::invalid_argument("hyperparams: values must be finite");
    if (signal_variance < 0.0)
        throw std::invalid_argument("hyperparams: signal_variance must be >= 0");
    if (length_scale <= 0.0)
        throw std::invalid_argument("hyperparams: length_scale must be > 0");
    if (noise_variance < 0.0)
        throw std::invalid_argument("hyperparams: noise_variance must be >= 0");
    if (jitter <= 0.0 && noise_variance <= 0.0)
        throw std::invalid_argument(
            "hyperparams: noise_variance + jitter must be > 0 for a positive "
            "definite Gram matrix");
}

double rbf_kernel(const Vec2& a, const Vec2& b, const Hyperparams& hp) {
    if (!a.finite() || !b.finite())
        throw std::invalid_argument("rbf_kernel: non-finite input point");
    const double d2 = (a - b).squared_norm();
    return hp.signal_variance * std::exp(-d2 / (2.0 * hp.length_scale * hp.length_scale));
}

TraversabilityGp::TraversabilityGp(const Hyperparams& hp) : hp_(hp) {
    hp_.validate();
}

void TraversabilityGp::add_observation(const Vec2& x, double y) {
    if (!x.finite() || !std::isfinite(y))
        throw std::invalid_argument("add_observation: non-finite input");
    data_.positions.push_back(x);
    data_.values.push_back(y);
    refit_();
}

void TraversabilityGp::add_observations(std::span<const Vec2> xs,
                                        std::span<const double> ys) {
    if (xs.size() != ys.size())
        throw std::invalid_argument("add_observations: length mismatch");
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!xs[i].finite() || !std::isfinite(ys[i]))
            throw std::invalid_argument("add_observations: non-finite input");
    }
    if (xs.empty()) return;
    data_.positions.insert(data_.positions.end(), xs.begin(), xs.end());
    data_.values.insert(data_.values.end(), ys.begin(), ys.end());
    refit_();
}

void TraversabilityGp::refit_() {
    const Eigen::Index n = static_cast<Eigen::Index>(data_.size());
    points_.resize(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
        points_(i, 0) = data_.positions[static_cast<std::size_t>(i)].x;
        points_(i, 1) = data_.positions[static_cast<std::size_t>(i)].y;
    }

    // Squared distances come from explicit coordinate differences; the
    // ||a||^2 + ||b||^2 - 2ab expansion cancels catastrophically for
    // nearby points and the error is then amplified by the condition
    // number of the Gram matrix.
    const double inv_two_l2 = 1.0 / (2.0 * hp_.length_scale * hp_.length_scale);
    const Eigen::ArrayXXd dx =
        points_.col(0).replicate(1, n) - points_.col(0).transpose().replicate(n, 1);
    const Eigen::ArrayXXd dy =
        points_.col(1).replicate(1, n) - points_.col(1).transpose().replicate(n, 1);
    Eigen::MatrixXd gram =
        ((dx.square() + dy.square()) * -inv_two_l2).exp().matrix() *
        hp_.signal_variance;

    // Jitter starts at the configured relative value and escalates by x10
    // up to 1e-2 * signal_variance before giving up.
    const double scale = hp_.signal_variance > 0.0 ? hp_.signal_variance : 1.0;
    double rel = hp_.jitter;
    for (;;) {
        Eigen::MatrixXd k = gram;
        k.diagonal().array() += hp_.noise_variance + rel * scale;
        llt_.compute(k);
        if (llt_.info() == Eigen::Success) {
            jitter_used_ = rel * scale;
            break;
        }
        if (rel * 10.0 > 1e-2) {
            std::ostringstream msg;
            msg << "gp: Cholesky factorization failed after jitter escalation"
                << " (n=" << n << ", noise_variance=" << hp_.noise_variance
                << ", last relative jitter=" << rel
                << ", gram diag range=[" << gram.diagonal().minCoeff() << ", "
                << gram.diagonal().maxCoeff() << "])";
            throw NumericalError(msg.str());
        }
        rel = rel > 0.0 ? rel * 10.0 : 1e-8;
    }

    Eigen::VectorXd centered(n);
    for (Eigen::Index i = 0; i < n; ++i)
        centered(i) = data_.values[static_cast<std::size_t>(i)] - hp_.prior_mean;
    alpha_ = llt_.solve(centered);
}

PosteriorField TraversabilityGp::posterior(std::span<const Vec2> queries) const {
    for (const Vec2& q : queries) {
        if (!q.finite())
            throw std::invalid_argument("posterior: non-finite query point");
    }

    PosteriorField out;
    const std::size_t m = queries.size();
    out.means.resize(m);
    out.variances.resize(m);

    const std::size_t n = data_.size();
    if (n == 0) {
        std::fill(out.means.begin(), out.means.end(), hp_.prior_mean);
        std::fill(out.variances.begin(), out.variances.end(), hp_.signal_variance);
        return out;
    }

    const double inv_two_l2 = 1.0 / (2.0 * hp_.length_scale * hp_.length_scale);
    const auto lower = llt_.matrixL();
    const Eigen::Index en = static_cast<Eigen::Index>(n);

    // Fixed-size chunks bound the n x chunk cross-covariance workspace.
    constexpr std::size_t kChunk = 1024;
    for (std::size_t start = 0; start < m; start += kChunk) {
        const std::size_t len = std::min(kChunk, m - start);
        const Eigen::Index elen = static_cast<Eigen::Index>(len);
        Eigen::MatrixX2d q(elen, 2);
        for (std::size_t j = 0; j < len; ++j) {
            q(static_cast<Eigen::Index>(j), 0) = queries[start + j].x;
            q(static_cast<Eigen::Index>(j), 1) = queries[start + j].y;
        }
        const Eigen::ArrayXXd dx =
            points_.col(0).replicate(1, elen) - q.col(0).transpose().replicate(en, 1);
        const Eigen::ArrayXXd dy =
            points_.col(1).replicate(1, elen) - q.col(1).transpose().replicate(en, 1);
        Eigen::MatrixXd kq =
            ((dx.square() + dy.square()) * -inv_two_l2).exp().matrix() *
            hp_.signal_variance;

        const Eigen::VectorXd mu = kq.transpose() * alpha_;
        lower.solveInPlace(kq);
        for (std::size_t j = 0; j < len; ++j) {
            out.means[start + j] = hp_.prior_mean + mu(static_cast<Eigen::Index>(j));
            const double var =
                hp_.signal_variance - kq.col(static_cast<Eigen::Index>(j)).squaredNorm();
            out.variances[start + j] = std::max(0.0, var);
        }
    }
    return out;
}

}  // namespace saegt
