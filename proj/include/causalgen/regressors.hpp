#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <memory>
#include <numeric>
#include <vector>

#include "causalgen/kernel_ridge.hpp"
#include "causalgen/rng.hpp"
#include "causalgen/variable_set.hpp"

namespace causalgen {

class Regressor {
public:
    virtual ~Regressor() = default;
    virtual void fit(const Matrix& x, const Vector& y) = 0;
    virtual Vector predict(const Matrix& x) const = 0;
};

// (a) GP posterior mean via kernel ridge, shared with the discovery side.
class KernelRidgeRegressor final : public Regressor {
public:
    void fit(const Matrix& x, const Vector& y) override {
        model_ = std::make_unique<KernelRidgeModel>(KernelRidgeModel::fit(x, y));
    }
    Vector predict(const Matrix& x) const override { return model_->predict(x); }

private:
    std::unique_ptr<KernelRidgeModel> model_;
};

// (b) SVR stand-in: ridge regression on random Fourier features of an RBF
// kernel (512 features, seeded construction). Ridge is picked by the same
// closed-form LOO used for kernel ridge, here on the 512x512 normal system.
class RandomFourierRidgeRegressor final : public Regressor {
public:
    explicit RandomFourierRidgeRegressor(std::uint64_t seed = 0x5f0e5eedULL) : seed_(seed) {}

    void fit(const Matrix& x, const Vector& y) override {
        const Eigen::Index n = x.rows();
        scaler_ = fit_scaler(x);
        const Matrix xs = scaler_.transform(x);
        double sigma = median_pairwise_distance(pairwise_sq_dists(xs));
        if (sigma <= 0.0) sigma = 1.0;

        Rng rng(seed_);
        weights_.resize(kFeatures, x.cols());
        offsets_.resize(kFeatures);
        for (Eigen::Index f = 0; f < kFeatures; ++f) {
            for (Eigen::Index c = 0; c < x.cols(); ++c)
                weights_(f, c) = rng.normal(0.0, 1.0 / sigma);
            offsets_(f) = rng.uniform(0.0, 2.0 * M_PI);
        }
        const Matrix z = features(xs);
        y_mean_ = y.mean();
        const Vector yc = y.array() - y_mean_;

        const Matrix a = z.transpose() * z;
        Eigen::SelfAdjointEigenSolver<Matrix> es(a);
        if (es.info() != Eigen::Success)
            throw SingularKernelError("random-feature normal equations failed");
        const Vector d = es.eigenvalues();
        const Matrix v = es.eigenvectors();
        const Matrix zv = z * v;
        const Vector zty = v.transpose() * (z.transpose() * yc);

        const double nd = static_cast<double>(n);
        const std::array<double, 8> lambdas = {1e-8 * nd, 1e-7 * nd, 1e-6 * nd, 1e-5 * nd,
                                               1e-4 * nd, 1e-3 * nd, 1e-2 * nd, 1e-1 * nd};
        double best_sse = std::numeric_limits<double>::infinity();
        for (double lambda : lambdas) {
            if ((d.array() + lambda <= 0.0).any()) continue;
            const Vector inv = (d.array() + lambda).inverse();
            const Vector w = v * (zty.array() * inv.array()).matrix();
            const Vector fit_vals = z * w;
            const Vector hat_diag = (zv.array().square().rowwise() *
                                     inv.transpose().array()).rowwise().sum();
            double sse = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                const double denom = 1.0 - hat_diag(i);
                const double e = (yc(i) - fit_vals(i)) / (denom > 1e-12 ? denom : 1e-12);
                sse += e * e;
            }
            if (sse < best_sse) {
                best_sse = sse;
                coef_ = w;
            }
        }
        if (!std::isfinite(best_sse))
            throw SingularKernelError("random-feature ridge is numerically singular");
    }

    Vector predict(const Matrix& x) const override {
        return (features(scaler_.transform(x)) * coef_).array() + y_mean_;
    }

private:
    static constexpr Eigen::Index kFeatures = 512;

    Matrix features(const Matrix& xs) const {
        Matrix z = xs * weights_.transpose();
        z.rowwise() += offsets_.transpose();
        return std::sqrt(2.0 / static_cast<double>(kFeatures)) * z.array().cos();
    }

    std::uint64_t seed_;
    ColumnScaler scaler_;
    Matrix weights_;
    Vector offsets_;
    Vector coef_;
    double y_mean_ = 0.0;
};

// (c) k-nearest-neighbors mean with k=5, Euclidean on standardized inputs.
class KnnRegressor final : public Regressor {
public:
    explicit KnnRegressor(int k = 5) : k_(k) {}

    void fit(const Matrix& x, const Vector& y) override {
        scaler_ = fit_scaler(x);
        train_ = scaler_.transform(x);
        targets_ = y;
    }

    Vector predict(const Matrix& x) const override {
        const Matrix q = scaler_.transform(x);
        const Eigen::Index n_train = train_.rows();
        const int k = std::min<int>(k_, static_cast<int>(n_train));
        Vector out(q.rows());
        std::vector<std::pair<double, Eigen::Index>> dist(static_cast<std::size_t>(n_train));
        for (Eigen::Index i = 0; i < q.rows(); ++i) {
            for (Eigen::Index t = 0; t < n_train; ++t)
                dist[static_cast<std::size_t>(t)] = {(train_.row(t) - q.row(i)).squaredNorm(), t};
            std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
            double sum = 0.0;
            for (int c = 0; c < k; ++c) sum += targets_(dist[static_cast<std::size_t>(c)].second);
            out(i) = sum / k;
        }
        return out;
    }

private:
    int k_;
    ColumnScaler scaler_;
    Matrix train_;
    Vector targets_;
};

// (d) variance-reduction binary regression tree, max depth 8, min leaf 5.
class RegressionTree final : public Regressor {
public:
    explicit RegressionTree(int max_depth = 8, int min_leaf = 5)
        : max_depth_(max_depth), min_leaf_(min_leaf) {}

    void fit(const Matrix& x, const Vector& y) override {
        nodes_.clear();
        std::vector<Eigen::Index> idx(static_cast<std::size_t>(x.rows()));
        std::iota(idx.begin(), idx.end(), 0);
        build(x, y, idx, 0);
    }

    Vector predict(const Matrix& x) const override {
        Vector out(x.rows());
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            std::size_t node = 0;
            while (!nodes_[node].leaf) {
                node = x(i, nodes_[node].feature) <= nodes_[node].threshold
                           ? nodes_[node].left
                           : nodes_[node].right;
            }
            out(i) = nodes_[node].value;
        }
        return out;
    }

private:
    struct Node {
        bool leaf = true;
        double value = 0.0;
        Eigen::Index feature = 0;
        double threshold = 0.0;
        std::size_t left = 0, right = 0;
    };

    std::size_t build(const Matrix& x, const Vector& y, std::vector<Eigen::Index>& idx,
                      int depth) {
        const std::size_t me = nodes_.size();
        nodes_.push_back({});
        double mean = 0.0;
        for (Eigen::Index i : idx) mean += y(i);
        mean /= static_cast<double>(idx.size());
        nodes_[me].value = mean;
        if (depth >= max_depth_ || idx.size() < 2 * static_cast<std::size_t>(min_leaf_))
            return me;

        double parent_sse = 0.0;
        for (Eigen::Index i : idx) parent_sse += (y(i) - mean) * (y(i) - mean);

        double best_gain = 0.0;
        Eigen::Index best_feature = -1;
        double best_threshold = 0.0;
        for (Eigen::Index f = 0; f < x.cols(); ++f) {
            std::vector<Eigen::Index> order = idx;
            std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
                if (x(a, f) != x(b, f)) return x(a, f) < x(b, f);
                return a < b;
            });
            // prefix sums over the sorted order, split between distinct values
            double left_sum = 0.0, left_sq = 0.0;
            double total_sum = 0.0, total_sq = 0.0;
            for (Eigen::Index i : order) {
                total_sum += y(i);
                total_sq += y(i) * y(i);
            }
            for (std::size_t pos = 0; pos + 1 < order.size(); ++pos) {
                const double yv = y(order[pos]);
                left_sum += yv;
                left_sq += yv * yv;
                if (x(order[pos], f) == x(order[pos + 1], f)) continue;
                const std::size_t nl = pos + 1, nr = order.size() - nl;
                if (nl < static_cast<std::size_t>(min_leaf_) ||
                    nr < static_cast<std::size_t>(min_leaf_))
                    continue;
                const double right_sum = total_sum - left_sum;
                const double right_sq = total_sq - left_sq;
                const double sse = (left_sq - left_sum * left_sum / static_cast<double>(nl)) +
                                   (right_sq - right_sum * right_sum / static_cast<double>(nr));
                const double gain = parent_sse - sse;
                if (gain > best_gain + 1e-12) {
                    best_gain = gain;
                    best_feature = f;
                    best_threshold = 0.5 * (x(order[pos], f) + x(order[pos + 1], f));
                }
            }
        }
        if (best_feature < 0) return me;

        std::vector<Eigen::Index> left, right;
        for (Eigen::Index i : idx)
            (x(i, best_feature) <= best_threshold ? left : right).push_back(i);
        if (left.size() < static_cast<std::size_t>(min_leaf_) ||
            right.size() < static_cast<std::size_t>(min_leaf_))
            return me;
        nodes_[me].leaf = false;
        nodes_[me].feature = best_feature;
        nodes_[me].threshold = best_threshold;
        nodes_[me].left = build(x, y, left, depth + 1);
        nodes_[me].right = build(x, y, right, depth + 1);
        return me;
    }

    int max_depth_;
    int min_leaf_;
    std::vector<Node> nodes_;
};

// Four diverse regressors trained on the same data; the ensemble prediction
// is the plain arithmetic mean of the members.
struct RegressorEnsemble {
    std::vector<std::unique_ptr<Regressor>> members;
    VariableSet input_features;
    Eigen::Index train_cols = 0;
};

inline RegressorEnsemble train_ensemble(const Matrix& parents_data, const Vector& target,
                                        std::uint64_t rff_seed = 0x5f0e5eedULL) {
    if (parents_data.rows() < 30)
        throw SampleTooSmallError("ensemble training requires at least 30 rows");
    if (parents_data.cols() < 1) throw ShapeError("ensemble needs at least one parent column");
    RegressorEnsemble ens;
    ens.train_cols = parents_data.cols();
    ens.members.push_back(std::make_unique<KernelRidgeRegressor>());
    ens.members.push_back(std::make_unique<RandomFourierRidgeRegressor>(rff_seed));
    ens.members.push_back(std::make_unique<KnnRegressor>(5));
    ens.members.push_back(std::make_unique<RegressionTree>(8, 5));
    for (auto& m : ens.members) m->fit(parents_data, target);
    return ens;
}

inline Vector predict_ensemble(const RegressorEnsemble& ens, const Matrix& parents_data) {
    if (parents_data.cols() != ens.train_cols)
        throw ShapeError("prediction column count does not match ensemble training data");
    Vector sum = Vector::Zero(parents_data.rows());
    for (const auto& m : ens.members) sum += m->predict(parents_data);
    return sum / static_cast<double>(ens.members.size());
}

// Injection point for generation: tests substitute stub ensembles.
using EnsembleFactory =
    std::function<RegressorEnsemble(const Matrix&, const Vector&, std::uint64_t)>;

inline EnsembleFactory default_ensemble_factory() {
    return [](const Matrix& x, const Vector& y, std::uint64_t seed) {
        return train_ensemble(x, y, seed);
    };
}

}  // namespace causalgen
