#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "saegt/gp_map.hpp"
#include "saegt/rng.hpp"

using namespace saegt;

namespace {

// Independent dense reference: form the full kernel matrix entry by entry
// and run the textbook Cholesky recipe, one query at a time. Mirrors the
// effective diagonal (noise + jitter actually used) so the comparison
// isolates the regression math.
PosteriorField dense_oracle(const MeasurementSet& data, const Hyperparams& hp,
                            double jitter_used, const std::vector<Vec2>& queries) {
    const Eigen::Index n = static_cast<Eigen::Index>(data.size());
    Eigen::MatrixXd K(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            K(i, j) = rbf_kernel(data.positions[i], data.positions[j], hp);
        }
    }
    K.diagonal().array() += hp.noise_variance + jitter_used;
    const Eigen::LLT<Eigen::MatrixXd> chol(K);
    REQUIRE(chol.info() == Eigen::Success);

    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) y(i) = data.values[i] - hp.prior_mean;
    const Eigen::VectorXd alpha = chol.solve(y);

    PosteriorField out;
    out.means.reserve(queries.size());
    out.variances.reserve(queries.size());
    for (const Vec2& q : queries) {
        Eigen::VectorXd k(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            k(i) = rbf_kernel(data.positions[i], q, hp);
        }
        out.means.push_back(hp.prior_mean + k.dot(alpha));
        const Eigen::VectorXd v = chol.matrixL().solve(k);
        out.variances.push_back(std::max(0.0, hp.signal_variance - v.squaredNorm()));
    }
    return out;
}

}  // namespace

TEST_CASE("rbf_kernel hand values") {
    Hyperparams hp;
    hp.signal_variance = 4.0;
    hp.length_scale = 2.0;
    CHECK(rbf_kernel({1, 1}, {1, 1}, hp) == 4.0);
    // distance == length_scale gives sigma_f^2 * exp(-1/2)
    CHECK(rbf_kernel({0, 0}, {2, 0}, hp) == doctest::Approx(4.0 * std::exp(-0.5)));
    CHECK(rbf_kernel({0, 0}, {200, 0}, hp) == doctest::Approx(0.0));
}

TEST_CASE("posterior with no observations is the prior") {
    Hyperparams hp;
    hp.signal_variance = 9.0;
    hp.prior_mean = 1200.0;
    const TraversabilityGp gp{hp};
    const std::vector<Vec2> q = {{0, 0}, {3, -1}};
    const PosteriorField post = gp.posterior(q);
    for (std::size_t i = 0; i < q.size(); ++i) {
        CHECK(post.means[i] == 1200.0);
        CHECK(post.variances[i] == 9.0);
    }
}

TEST_CASE("single noiseless observation is reproduced at its site") {
    Hyperparams hp;
    hp.signal_variance = 4.0;
    hp.length_scale = 1.0;
    hp.noise_variance = 0.0;
    hp.prior_mean = 10.0;
    TraversabilityGp gp{hp};
    gp.add_observation({1.0, 2.0}, 15.0);

    const std::vector<Vec2> q = {{1.0, 2.0}, {100.0, 2.0}};
    const PosteriorField post = gp.posterior(q);
    CHECK(post.means[0] == doctest::Approx(15.0).epsilon(1e-6));
    CHECK(post.variances[0] == doctest::Approx(0.0).scale(4.0));
    // far from the data the prior takes over
    CHECK(post.means[1] == doctest::Approx(10.0));
    CHECK(post.variances[1] == doctest::Approx(4.0));
}

TEST_CASE("posterior matches the dense oracle on random instances") {
    Rng rng{99};
    for (int trial = 0; trial < 5; ++trial) {
        Hyperparams hp;
        hp.signal_variance = rng.uniform(0.5, 20.0);
        hp.length_scale = rng.uniform(0.3, 4.0);
        hp.noise_variance = rng.uniform(0.05, 2.0);
        hp.prior_mean = rng.uniform(-5.0, 5.0);
        TraversabilityGp gp{hp};

        const int n_obs = 40 + trial * 30;
        for (int i = 0; i < n_obs; ++i) {
            gp.add_observation({rng.uniform(-10, 10), rng.uniform(-10, 10)},
                               rng.uniform(-10, 10));
        }
        std::vector<Vec2> queries(200);
        for (auto& q : queries) q = {rng.uniform(-12, 12), rng.uniform(-12, 12)};

        const PosteriorField got = gp.posterior(queries);
        const PosteriorField want =
            dense_oracle(gp.measurements(), hp, gp.jitter_used(), queries);
        for (std::size_t i = 0; i < queries.size(); ++i) {
            CHECK(std::abs(got.means[i] - want.means[i]) < 1e-9);
            CHECK(std::abs(got.variances[i] - want.variances[i]) < 1e-9);
        }
    }
}

TEST_CASE("query batching across the chunk boundary stays consistent") {
    Hyperparams hp;
    hp.signal_variance = 2.0;
    hp.length_scale = 1.5;
    hp.noise_variance = 0.1;
    TraversabilityGp gp{hp};
    Rng rng{5};
    for (int i = 0; i < 30; ++i) {
        gp.add_observation({rng.uniform(0, 20), rng.uniform(0, 20)},
                           rng.uniform(0, 10));
    }
    std::vector<Vec2> queries(1500);
    for (auto& q : queries) q = {rng.uniform(0, 20), rng.uniform(0, 20)};

    const PosteriorField whole = gp.posterior(queries);
    const PosteriorField want =
        dense_oracle(gp.measurements(), hp, gp.jitter_used(), queries);
    REQUIRE(whole.means.size() == queries.size());
    for (std::size_t i = 0; i < queries.size(); ++i) {
        CHECK(std::abs(whole.means[i] - want.means[i]) < 1e-9);
        CHECK(std::abs(whole.variances[i] - want.variances[i]) < 1e-9);
    }
}

TEST_CASE("duplicate noiseless sites stay finite through jitter escalation") {
    Hyperparams hp;
    hp.signal_variance = 1.0;
    hp.length_scale = 1.0;
    hp.noise_variance = 0.0;
    TraversabilityGp gp{hp};
    for (int i = 0; i < 6; ++i) gp.add_observation({1.0, 1.0}, 3.0);

    CHECK(gp.jitter_used() <= 1e-2 * hp.signal_variance);
    const PosteriorField post = gp.posterior(std::vector<Vec2>{{1.0, 1.0}, {4.0, 0.0}});
    CHECK(std::isfinite(post.means[0]));
    CHECK(std::isfinite(post.variances[1]));
    CHECK(post.means[0] == doctest::Approx(3.0).epsilon(1e-3));
}

TEST_CASE("batch adds match one-at-a-time adds exactly") {
    Hyperparams hp;
    hp.signal_variance = 3.0;
    hp.length_scale = 1.2;
    hp.noise_variance = 0.2;
    TraversabilityGp one{hp}, batch{hp};

    Rng rng{31};
    std::vector<Vec2> xs(40);
    std::vector<double> ys(40);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        xs[i] = {rng.uniform(0, 8), rng.uniform(0, 8)};
        ys[i] = rng.uniform(-3, 3);
        one.add_observation(xs[i], ys[i]);
    }
    batch.add_observations(xs, ys);

    std::vector<Vec2> queries(50);
    for (auto& q : queries) q = {rng.uniform(-1, 9), rng.uniform(-1, 9)};
    const PosteriorField a = one.posterior(queries);
    const PosteriorField b = batch.posterior(queries);
    CHECK(a.means == b.means);
    CHECK(a.variances == b.variances);

    CHECK_THROWS_AS(batch.add_observations(xs, std::vector<double>(3)),
                    std::invalid_argument);
}

TEST_CASE("variances are clamped non-negative") {
    Hyperparams hp;
    hp.noise_variance = 1e-12;
    TraversabilityGp gp{hp};
    Rng rng{17};
    for (int i = 0; i < 50; ++i) {
        gp.add_observation({rng.uniform(0, 1), rng.uniform(0, 1)}, rng.uniform(0, 1));
    }
    std::vector<Vec2> queries;
    for (const Vec2& p : gp.measurements().positions) queries.push_back(p);
    for (const double v : gp.posterior(queries).variances) CHECK(v >= 0.0);
}

TEST_CASE("hyperparameter validation rejects nonsense") {
    Hyperparams hp;
    hp.signal_variance = -1.0;
    CHECK_THROWS_AS(hp.validate(), std::invalid_argument);
    hp = {};
    hp.length_scale = 0.0;
    CHECK_THROWS_AS(hp.validate(), std::invalid_argument);
    hp = {};
    hp.noise_variance = -0.5;
    CHECK_THROWS_AS(hp.validate(), std::invalid_argument);
}

TEST_CASE("posterior is deterministic") {
    Hyperparams hp;
    hp.noise_variance = 0.3;
    TraversabilityGp gp{hp};
    Rng rng{3};
    for (int i = 0; i < 25; ++i) {
        gp.add_observation({rng.uniform(0, 5), rng.uniform(0, 5)}, rng.uniform(0, 5));
    }
    const std::vector<Vec2> q = {{1, 1}, {2, 3}, {4.5, 0.2}};
    const PosteriorField a = gp.posterior(q);
    const PosteriorField b = gp.posterior(q);
    CHECK(a.means == b.means);
    CHECK(a.variances == b.variances);
}
