#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "causalgen/errors.hpp"
#include "causalgen/rng.hpp"
#include "causalgen/special_functions.hpp"

namespace causalgen {

enum class DistFamily {
    Uniform,
    Normal,
    Exponential,
    LogNormal,
    Gamma,
    Beta,
    Laplace,
    ChiSquared,
    PowerLaw,
};

inline const std::vector<DistFamily>& default_families() {
    static const std::vector<DistFamily> fams = {
        DistFamily::Uniform, DistFamily::Normal,  DistFamily::Exponential,
        DistFamily::LogNormal, DistFamily::Gamma, DistFamily::Beta,
        DistFamily::Laplace, DistFamily::ChiSquared, DistFamily::PowerLaw};
    return fams;
}

inline const char* to_string(DistFamily f) {
    switch (f) {
        case DistFamily::Uniform: return "uniform";
        case DistFamily::Normal: return "normal";
        case DistFamily::Exponential: return "exponential";
        case DistFamily::LogNormal: return "lognormal";
        case DistFamily::Gamma: return "gamma";
        case DistFamily::Beta: return "beta";
        case DistFamily::Laplace: return "laplace";
        case DistFamily::ChiSquared: return "chi-squared";
        case DistFamily::PowerLaw: return "powerlaw";
    }
    return "?";
}

// Fitted parametric distribution. Parameter layout per family:
//   uniform      {a, b}
//   normal       {mu, sigma}
//   exponential  {loc, scale}
//   lognormal    {mu_log, sigma_log}
//   gamma        {shape, scale, loc}
//   beta         {alpha, beta, loc, scale}
//   laplace      {mu, b}
//   chi-squared  {df, loc, scale}
//   powerlaw     {a, loc, scale}
struct DistributionFit {
    DistFamily family = DistFamily::Normal;
    std::vector<double> params;
    double sse_score = 0.0;
    double ks_statistic = 0.0;
};

namespace detail {

struct Moments {
    double mean = 0.0;
    double var = 0.0;   // population variance
    double min = 0.0;
    double max = 0.0;
};

inline Moments moments_of(const std::vector<double>& x) {
    Moments m;
    m.min = m.max = x.front();
    for (double v : x) {
        m.mean += v;
        m.min = std::min(m.min, v);
        m.max = std::max(m.max, v);
    }
    m.mean /= static_cast<double>(x.size());
    for (double v : x) m.var += (v - m.mean) * (v - m.mean);
    m.var /= static_cast<double>(x.size());
    return m;
}

constexpr double kEdgeMargin = 1e-6;  // relative range pad for interior-support families

}  // namespace detail

// Closed-form estimator per family (maximum likelihood where it exists in
// closed form, method of moments otherwise). Throws FitFailureError when the
// family cannot represent the data.
inline DistributionFit estimate_family(DistFamily family, const std::vector<double>& x) {
    const auto m = detail::moments_of(x);
    const double n = static_cast<double>(x.size());
    const double range = m.max - m.min;
    DistributionFit fit;
    fit.family = family;
    switch (family) {
        case DistFamily::Uniform: {
            if (range <= 0.0) throw FitFailureError("uniform: zero range");
            fit.params = {m.min, m.max};
            break;
        }
        case DistFamily::Normal: {
            const double sigma = std::sqrt(m.var);
            if (sigma <= 0.0) throw FitFailureError("normal: zero variance");
            fit.params = {m.mean, sigma};
            break;
        }
        case DistFamily::Exponential: {
            const double scale = m.mean - m.min;
            if (scale <= 0.0) throw FitFailureError("exponential: zero scale");
            fit.params = {m.min, scale};
            break;
        }
        case DistFamily::LogNormal: {
            if (m.min <= 0.0) throw FitFailureError("lognormal: non-positive data");
            double mu = 0.0, var = 0.0;
            for (double v : x) mu += std::log(v);
            mu /= n;
            for (double v : x) var += (std::log(v) - mu) * (std::log(v) - mu);
            var /= n;
            if (var <= 0.0) throw FitFailureError("lognormal: zero log variance");
            fit.params = {mu, std::sqrt(var)};
            break;
        }
        case DistFamily::Gamma: {
            if (range <= 0.0) throw FitFailureError("gamma: zero range");
            const double loc = m.min - detail::kEdgeMargin * range;
            double mean_log = 0.0;
            for (double v : x) mean_log += std::log(v - loc);
            mean_log /= n;
            const double s = std::log(m.mean - loc) - mean_log;
            if (s <= 0.0) throw FitFailureError("gamma: degenerate spread");
            const double shape = (3.0 - s + std::sqrt((s - 3.0) * (s - 3.0) + 24.0 * s)) / (12.0 * s);
            const double scale = (m.mean - loc) / shape;
            if (shape <= 0.0 || scale <= 0.0) throw FitFailureError("gamma: invalid estimate");
            fit.params = {shape, scale, loc};
            break;
        }
        case DistFamily::Beta: {
            if (range <= 0.0) throw FitFailureError("beta: zero range");
            const double loc = m.min - detail::kEdgeMargin * range;
            const double scale = m.max + detail::kEdgeMargin * range - loc;
            const double ym = (m.mean - loc) / scale;
            const double yv = m.var / (scale * scale);
            if (yv <= 0.0 || yv >= ym * (1.0 - ym))
                throw FitFailureError("beta: moment condition violated");
            const double c = ym * (1.0 - ym) / yv - 1.0;
            const double a = ym * c;
            const double b = (1.0 - ym) * c;
            if (a <= 0.0 || b <= 0.0) throw FitFailureError("beta: invalid estimate");
            fit.params = {a, b, loc, scale};
            break;
        }
        case DistFamily::Laplace: {
            std::vector<double> sorted = x;
            std::sort(sorted.begin(), sorted.end());
            const std::size_t half = sorted.size() / 2;
            const double mu = sorted.size() % 2 ? sorted[half]
                                                : 0.5 * (sorted[half - 1] + sorted[half]);
            double b = 0.0;
            for (double v : x) b += std::fabs(v - mu);
            b /= n;
            if (b <= 0.0) throw FitFailureError("laplace: zero scale");
            fit.params = {mu, b};
            break;
        }
        case DistFamily::ChiSquared: {
            if (range <= 0.0 || m.var <= 0.0) throw FitFailureError("chi-squared: zero spread");
            const double loc = m.min - detail::kEdgeMargin * range;
            const double mean_s = m.mean - loc;
            const double scale = m.var / (2.0 * mean_s);
            const double df = 2.0 * mean_s * mean_s / m.var;
            if (scale <= 0.0 || df <= 0.0) throw FitFailureError("chi-squared: invalid estimate");
            fit.params = {df, loc, scale};
            break;
        }
        case DistFamily::PowerLaw: {
            if (range <= 0.0) throw FitFailureError("powerlaw: zero range");
            const double loc = m.min - detail::kEdgeMargin * range;
            const double scale = m.max + detail::kEdgeMargin * range - loc;
            double sum_log = 0.0;
            for (double v : x) sum_log += std::log((v - loc) / scale);
            if (sum_log >= 0.0) throw FitFailureError("powerlaw: invalid support");
            fit.params = {-n / sum_log, loc, scale};
            break;
        }
    }
    return fit;
}

inline double dist_pdf(const DistributionFit& f, double x) {
    const auto& p = f.params;
    switch (f.family) {
        case DistFamily::Uniform:
            return (x >= p[0] && x <= p[1]) ? 1.0 / (p[1] - p[0]) : 0.0;
        case DistFamily::Normal: {
            const double z = (x - p[0]) / p[1];
            return std::exp(-0.5 * z * z) / (p[1] * std::sqrt(2.0 * M_PI));
        }
        case DistFamily::Exponential:
            return x < p[0] ? 0.0 : std::exp(-(x - p[0]) / p[1]) / p[1];
        case DistFamily::LogNormal: {
            if (x <= 0.0) return 0.0;
            const double z = (std::log(x) - p[0]) / p[1];
            return std::exp(-0.5 * z * z) / (x * p[1] * std::sqrt(2.0 * M_PI));
        }
        case DistFamily::Gamma: {
            const double y = x - p[2];
            if (y <= 0.0) return 0.0;
            return std::exp((p[0] - 1.0) * std::log(y) - y / p[1] - std::lgamma(p[0]) -
                            p[0] * std::log(p[1]));
        }
        case DistFamily::Beta: {
            const double y = (x - p[2]) / p[3];
            if (y <= 0.0 || y >= 1.0) return 0.0;
            const double ln_b = std::lgamma(p[0]) + std::lgamma(p[1]) - std::lgamma(p[0] + p[1]);
            return std::exp((p[0] - 1.0) * std::log(y) + (p[1] - 1.0) * std::log1p(-y) - ln_b) /
                   p[3];
        }
        case DistFamily::Laplace:
            return std::exp(-std::fabs(x - p[0]) / p[1]) / (2.0 * p[1]);
        case DistFamily::ChiSquared: {
            const double y = x - p[1];
            if (y <= 0.0) return 0.0;
            const double shape = 0.5 * p[0], scale = 2.0 * p[2];
            return std::exp((shape - 1.0) * std::log(y) - y / scale - std::lgamma(shape) -
                            shape * std::log(scale));
        }
        case DistFamily::PowerLaw: {
            const double y = (x - p[1]) / p[2];
            if (y <= 0.0 || y > 1.0) return 0.0;
            return p[0] * std::pow(y, p[0] - 1.0) / p[2];
        }
    }
    return 0.0;
}

inline double dist_cdf(const DistributionFit& f, double x) {
    const auto& p = f.params;
    switch (f.family) {
        case DistFamily::Uniform:
            if (x <= p[0]) return 0.0;
            if (x >= p[1]) return 1.0;
            return (x - p[0]) / (p[1] - p[0]);
        case DistFamily::Normal:
            return normal_cdf((x - p[0]) / p[1]);
        case DistFamily::Exponential:
            return x <= p[0] ? 0.0 : 1.0 - std::exp(-(x - p[0]) / p[1]);
        case DistFamily::LogNormal:
            return x <= 0.0 ? 0.0 : normal_cdf((std::log(x) - p[0]) / p[1]);
        case DistFamily::Gamma:
            return x <= p[2] ? 0.0 : gamma_cdf(x - p[2], p[0], p[1]);
        case DistFamily::Beta: {
            const double y = (x - p[2]) / p[3];
            if (y <= 0.0) return 0.0;
            if (y >= 1.0) return 1.0;
            return beta_inc(p[0], p[1], y);
        }
        case DistFamily::Laplace: {
            const double z = (x - p[0]) / p[1];
            return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
        }
        case DistFamily::ChiSquared:
            return x <= p[1] ? 0.0 : gamma_cdf(x - p[1], 0.5 * p[0], 2.0 * p[2]);
        case DistFamily::PowerLaw: {
            const double y = (x - p[1]) / p[2];
            if (y <= 0.0) return 0.0;
            if (y >= 1.0) return 1.0;
            return std::pow(y, p[0]);
        }
    }
    return 0.0;
}

inline double dist_sample(const DistributionFit& f, Rng& rng) {
    const auto& p = f.params;
    switch (f.family) {
        case DistFamily::Uniform: return rng.uniform(p[0], p[1]);
        case DistFamily::Normal: return rng.normal(p[0], p[1]);
        case DistFamily::Exponential: return p[0] + rng.exponential(p[1]);
        case DistFamily::LogNormal: return rng.lognormal(p[0], p[1]);
        case DistFamily::Gamma: return p[2] + rng.gamma_dist(p[0], p[1]);
        case DistFamily::Beta: return p[2] + p[3] * rng.beta_dist(p[0], p[1]);
        case DistFamily::Laplace: return rng.laplace(p[0], p[1]);
        case DistFamily::ChiSquared: return p[1] + p[2] * rng.chi_squared(p[0]);
        case DistFamily::PowerLaw: return rng.powerlaw(p[0], p[1], p[2]);
    }
    return 0.0;
}

// Kolmogorov-Smirnov statistic of the sample against the fitted CDF.
inline double ks_statistic(const DistributionFit& f, const std::vector<double>& x) {
    std::vector<double> sorted = x;
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double c = dist_cdf(f, sorted[i]);
        d = std::max(d, std::fabs(c - static_cast<double>(i) / n));
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - c));
    }
    return d;
}

// SSE between the fitted PDF and a 50-bin histogram density of the data,
// evaluated at bin centers.
inline double histogram_sse(const DistributionFit& f, const std::vector<double>& x) {
    constexpr int kBins = 50;
    const auto m = detail::moments_of(x);
    const double width = (m.max - m.min) / kBins;
    if (width <= 0.0) throw DegenerateInputError("constant column in histogram SSE");
    std::vector<double> counts(kBins, 0.0);
    for (double v : x) {
        int b = static_cast<int>((v - m.min) / width);
        b = std::clamp(b, 0, kBins - 1);
        counts[static_cast<std::size_t>(b)] += 1.0;
    }
    double sse = 0.0;
    for (int b = 0; b < kBins; ++b) {
        const double center = m.min + (b + 0.5) * width;
        const double density = counts[static_cast<std::size_t>(b)] /
                               (static_cast<double>(x.size()) * width);
        const double diff = dist_pdf(f, center) - density;
        sse += diff * diff;
    }
    return sse;
}

// Fit every requested family and keep the one with the smallest SSE against
// the histogram density; the KS statistic of the winner is recorded for
// diagnostics. Families that cannot represent the data are skipped; if all
// fail the error propagates.
inline DistributionFit fit_distribution(const std::vector<double>& column,
                                        const std::vector<DistFamily>& families) {
    if (column.size() < 30)
        throw SampleTooSmallError("distribution fitting requires at least 30 values");
    if (families.empty()) throw ConfigError("no candidate families");
    bool any = false;
    DistributionFit best;
    std::string failures;
    for (DistFamily fam : families) {
        try {
            DistributionFit fit = estimate_family(fam, column);
            fit.sse_score = histogram_sse(fit, column);
            if (!any || fit.sse_score < best.sse_score) {
                best = fit;
                any = true;
            }
        } catch (const FitFailureError& e) {
            if (!failures.empty()) failures += "; ";
            failures += e.what();
        }
    }
    if (!any) throw FitFailureError("all families failed: " + failures);
    best.ks_statistic = ks_statistic(best, column);
    return best;
}

inline std::vector<double> sample_distribution(const DistributionFit& fit, std::size_t n,
                                               Rng& rng) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = dist_sample(fit, rng);
    return out;
}

}  // namespace causalgen
