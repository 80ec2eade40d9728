#ifndef SAEGT_GP_MAP_HPP_
#define SAEGT_GP_MAP_HPP_

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "saegt/geom2d.hpp"

namespace saegt {

/// RBF kernel and noise hyperparameters. Fixed per episode; there is no
/// marginal-likelihood fitting.
struct Hyperparams {
    double signal_variance = 1.0;   // prior variance at any point
    double length_scale = 1.0;      // meters
    double noise_variance = 0.0;    // observation noise variance
    double jitter = 1e-8;           // relative diagonal stabilizer
    double prior_mean = 0.0;

    /// Throws std::invalid_argument when the Gram matrix could not be
    /// strictly positive definite (length_scale <= 0, noise + jitter == 0)
    /// or any value is non-finite.
    void validate() const;

    friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

struct MeasurementSet {
    std::vector<Vec2> positions;
    std::vector<double> values;

    std::size_t size() const { return positions.size(); }
};

/// Batched posterior over a set of query points.
struct PosteriorField {
    std::vector<double> means;
    std::vector<double> variances;  // clamped to be non-negative
};

/// Thrown when the Gram factorization fails even after jitter escalation.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// sigma_f^2 * exp(-||a-b||^2 / (2 l^2)). Throws on non-finite input.
double rbf_kernel(const Vec2& a, const Vec2& b, const Hyperparams& hp);

/// Exact Gaussian Process regression over 2D positions. Observations are
/// added one at a time; the Cholesky factor is refreshed on each add so
/// posterior() is a pure read and can be called concurrently on a snapshot.
class TraversabilityGp {
public:
    explicit TraversabilityGp(const Hyperparams& hp);

    /// Appends (x, y) and refits. Throws std::invalid_argument on
    /// non-finite input, NumericalError if factorization fails after
    /// jitter escalation.
    void add_observation(const Vec2& x, double y);

    /// Appends a whole batch with a single refit. Equivalent to adding
    /// the pairs one at a time, just cheaper.
    void add_observations(std::span<const Vec2> xs, std::span<const double> ys);

    /// Posterior mean and variance at each query point. With no
    /// observations this is the prior: mean = prior_mean, variance =
    /// signal_variance.
    PosteriorField posterior(std::span<const Vec2> queries) const;

    const MeasurementSet& measurements() const { return data_; }
    const Hyperparams& hyperparams() const { return hp_; }

    /// Jitter added to the Gram diagonal by the last factorization, in
    /// absolute variance units on top of noise_variance.
    double jitter_used() const { return jitter_used_; }

private:
    void refit_();

    Hyperparams hp_;
    MeasurementSet data_;
    Eigen::MatrixX2d points_;       // data_.positions as a matrix
    Eigen::LLT<Eigen::MatrixXd> llt_;
    Eigen::VectorXd alpha_;         // (K + noise I)^-1 (y - prior_mean)
    double jitter_used_ = 0.0;
};

}  // namespace saegt

#endif  // SAEGT_GP_MAP_HPP_
