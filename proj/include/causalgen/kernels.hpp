#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "causalgen/dataset.hpp"
#include "causalgen/errors.hpp"

namespace causalgen {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline Matrix to_matrix(const Dataset& data, const VariableSet& vars) {
    Matrix out(static_cast<Eigen::Index>(data.n_rows()), static_cast<Eigen::Index>(vars.size()));
    for (std::size_t c = 0; c < vars.size(); ++c) {
        const auto& col = data.col(static_cast<std::size_t>(vars.indices[c]));
        for (std::size_t i = 0; i < col.size(); ++i)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = col[i];
    }
    return out;
}

inline Matrix to_matrix(const Dataset& data) {
    std::vector<int> all(data.n_cols());
    for (std::size_t j = 0; j < all.size(); ++j) all[j] = static_cast<int>(j);
    return to_matrix(data, VariableSet(all));
}

struct ColumnScaler {
    Vector mean;
    Vector std;

    Matrix transform(const Matrix& x) const {
        Matrix out = x.rowwise() - mean.transpose();
        for (Eigen::Index c = 0; c < out.cols(); ++c)
            if (std(c) > 0.0) out.col(c) /= std(c);
        return out;
    }
};

// zero mean, unit variance per column; zero-variance columns stay centered
inline ColumnScaler fit_scaler(const Matrix& x) {
    ColumnScaler s;
    s.mean = x.colwise().mean();
    s.std = ((x.rowwise() - s.mean.transpose()).array().square().colwise().mean()).sqrt();
    return s;
}

inline Matrix pairwise_sq_dists(const Matrix& x) {
    const Vector sq = x.rowwise().squaredNorm();
    Matrix d = sq.replicate(1, x.rows());
    d += sq.transpose().replicate(x.rows(), 1);
    d.noalias() -= 2.0 * x * x.transpose();
    return d.cwiseMax(0.0);
}

// median of the pairwise Euclidean distances (upper triangle, i < j)
inline double median_pairwise_distance(const Matrix& sq_dists) {
    const Eigen::Index n = sq_dists.rows();
    std::vector<double> d;
    d.reserve(static_cast<std::size_t>(n) * (static_cast<std::size_t>(n) - 1) / 2);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) d.push_back(sq_dists(i, j));
    if (d.empty()) return 0.0;
    auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
    std::nth_element(d.begin(), mid, d.end());
    double med_sq = *mid;
    if (d.size() % 2 == 0) {
        auto lower = std::max_element(d.begin(), mid);
        med_sq = 0.5 * (med_sq + *lower);
    }
    return std::sqrt(med_sq);
}

// exp(-d^2 / (2 sigma^2))
inline Matrix rbf_gram(const Matrix& sq_dists, double sigma) {
    return (-sq_dists / (2.0 * sigma * sigma)).array().exp();
}

// cross-kernel between query rows and training rows
inline Matrix rbf_cross(const Matrix& query, const Matrix& train, double sigma) {
    Matrix d = query.rowwise().squaredNorm().replicate(1, train.rows());
    d += train.rowwise().squaredNorm().transpose().replicate(query.rows(), 1);
    d.noalias() -= 2.0 * query * train.transpose();
    return (-d.cwiseMax(0.0) / (2.0 * sigma * sigma)).array().exp();
}

}  // namespace causalgen
