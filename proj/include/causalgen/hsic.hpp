#pragma once

#include <cmath>

#include "causalgen/kernels.hpp"
#include "causalgen/special_functions.hpp"

namespace causalgen {

struct HsicResult {
    double statistic = 0.0;       // biased HSIC estimate
    double p_value = 1.0;
    double threshold_alpha = 0.0;

    bool independent() const { return p_value > threshold_alpha; }
};

// Gaussian Gram matrix of one variable block. Bandwidth is the median
// pairwise distance, with 1.0 as fallback when the median is zero; a fully
// constant block (all rows identical) has no usable kernel and is rejected.
inline Matrix hsic_gram(const Matrix& block) {
    if (!block.allFinite()) throw DegenerateInputError("non-finite values in HSIC input");
    const Matrix sq = pairwise_sq_dists(block);
    if (sq.maxCoeff() <= 0.0)
        throw DegenerateInputError("constant block: kernel matrix is all-ones");
    double sigma = median_pairwise_distance(sq);
    if (sigma <= 0.0) sigma = 1.0;
    return rbf_gram(sq, sigma);
}

// Biased HSIC statistic with a gamma approximation to the null distribution.
// The first two moments of n*HSIC_b under independence are matched following
// Gretton et al.'s construction; the p-value is the gamma upper tail at the
// observed n*HSIC_b.
inline HsicResult hsic_from_grams(const Matrix& K, const Matrix& L, double alpha) {
    const Eigen::Index n = K.rows();
    if (n < 20) throw SampleTooSmallError("HSIC requires at least 20 samples");
    if (L.rows() != n) throw ShapeError("HSIC blocks disagree on row count");
    const double nd = static_cast<double>(n);

    const Vector k_mean = K.rowwise().mean();
    const Vector l_mean = L.rowwise().mean();
    const double k_grand = k_mean.mean();
    const double l_grand = l_mean.mean();

    Matrix kc = K;
    kc.colwise() -= k_mean;
    kc.rowwise() -= k_mean.transpose();
    kc.array() += k_grand;
    Matrix lc = L;
    lc.colwise() -= l_mean;
    lc.rowwise() -= l_mean.transpose();
    lc.array() += l_grand;

    const Matrix prod = kc.cwiseProduct(lc);
    const double test_stat = prod.sum() / nd;  // n * HSIC_b

    // variance of n*HSIC_b under the null
    const Matrix var_terms = (prod / 6.0).array().square();
    double var_hsic = (var_terms.sum() - var_terms.trace()) / (nd * (nd - 1.0));
    var_hsic *= 72.0 * (nd - 4.0) * (nd - 5.0) / (nd * (nd - 1.0) * (nd - 2.0) * (nd - 3.0));

    // mean of n*HSIC_b under the null, from the diagonal-free Gram sums
    const double mu_x = (K.sum() - K.trace()) / (nd * (nd - 1.0));
    const double mu_y = (L.sum() - L.trace()) / (nd * (nd - 1.0));
    const double m_hsic = (1.0 + mu_x * mu_y - mu_x - mu_y) / nd;

    HsicResult res;
    res.statistic = test_stat / nd;
    res.threshold_alpha = alpha;
    if (m_hsic <= 0.0 || var_hsic <= 0.0)
        throw DegenerateInputError("degenerate HSIC null moments");
    const double shape = m_hsic * m_hsic / var_hsic;
    const double scale = var_hsic * nd / m_hsic;
    res.p_value = test_stat <= 0.0 ? 1.0 : gamma_q(shape, test_stat / scale);
    return res;
}

inline HsicResult hsic_test(const Matrix& x, const Matrix& y, double alpha) {
    if (x.rows() != y.rows()) throw ShapeError("HSIC inputs disagree on row count");
    if (x.rows() < 20) throw SampleTooSmallError("HSIC requires at least 20 samples");
    return hsic_from_grams(hsic_gram(x), hsic_gram(y), alpha);
}

inline HsicResult hsic_test(const std::vector<double>& x, const std::vector<double>& y,
                            double alpha) {
    Matrix mx(static_cast<Eigen::Index>(x.size()), 1);
    Matrix my(static_cast<Eigen::Index>(y.size()), 1);
    for (std::size_t i = 0; i < x.size(); ++i) mx(static_cast<Eigen::Index>(i), 0) = x[i];
    for (std::size_t i = 0; i < y.size(); ++i) my(static_cast<Eigen::Index>(i), 0) = y[i];
    return hsic_test(mx, my, alpha);
}

}  // namespace causalgen
