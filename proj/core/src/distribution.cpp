#include "acaf/distribution.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace acaf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log-sum-exp of two values, tolerant of -inf inputs.
double log_add(double a, double b) {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    const double hi = std::max(a, b);
    const double lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace

void AFParams::validate() const {
    if (!std::isfinite(mu)) throw std::invalid_argument("AFParams: mu must be finite");
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("AFParams: sigma must be positive");
    if (!(alpha1 > 0.0) || !std::isfinite(alpha1))
        throw std::invalid_argument("AFParams: alpha1 must be positive");
    if (!(alpha2 > 0.0) || !std::isfinite(alpha2))
        throw std::invalid_argument("AFParams: alpha2 must be positive");
}

double af_log_cdf(double q, const AFParams& p) {
    p.validate();
    if (!(q > p.mu)) return -kInf;
    // sigma^a (q-mu)^-a = exp(a * (log sigma - log(q-mu)))
    const double lr = std::log(p.sigma) - std::log(q - p.mu);
    return -(std::exp(p.alpha1 * lr) + std::exp(p.alpha2 * lr));
}

double af_log_pdf(double q, const AFParams& p) {
    p.validate();
    if (!(q > p.mu)) return -kInf;
    const double lqm = std::log(q - p.mu);
    const double lr = std::log(p.sigma) - lqm;
    const double a1 = p.alpha1 * lr;
    const double a2 = p.alpha2 * lr;
    const double mix = log_add(std::log(p.alpha1) + a1, std::log(p.alpha2) + a2) - lqm;
    return mix - (std::exp(a1) + std::exp(a2));
}

double af_quantile(double prob, const AFParams& p) {
    p.validate();
    if (!(prob > 0.0) || !(prob < 1.0))
        throw std::invalid_argument("af_quantile: prob must lie strictly in (0,1)");

    const double target = std::log(prob);
    const double lsig = std::log(p.sigma);

    // F in terms of s = log(q - mu): logF(s) = -(e^{a1 (lsig-s)} + e^{a2 (lsig-s)}),
    // strictly increasing in s. At s = lsig both terms are 1.
    auto log_cdf_s = [&](double s) {
        const double lr = lsig - s;
        return -(std::exp(p.alpha1 * lr) + std::exp(p.alpha2 * lr));
    };

    double lo = lsig, hi = lsig;
    if (log_cdf_s(lsig) < target) {
        double step = 1.0;
        while (log_cdf_s(hi) < target) {
            lo = hi;
            hi += step;
            step *= 2.0;
        }
    } else {
        double step = 1.0;
        while (log_cdf_s(lo) >= target) {
            hi = lo;
            lo -= step;
            step *= 2.0;
        }
    }

    for (int it = 0; it < 200 && (hi - lo) > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (log_cdf_s(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return p.mu + std::exp(0.5 * (lo + hi));
}

double sample_unit_frechet(double u) {
    if (!(u > 0.0) || !(u < 1.0))
        throw std::invalid_argument("sample_unit_frechet: u must lie strictly in (0,1)");
    return -1.0 / std::log(u);
}

double af_sample(const AFParams& p, double u1, double u2) {
    p.validate();
    const double ly1 = std::log(sample_unit_frechet(u1));
    const double ly2 = std::log(sample_unit_frechet(u2));
    const double m = std::max(ly1 / p.alpha1, ly2 / p.alpha2);
    return p.mu + p.sigma * std::exp(m);
}

double frechet_log_cdf(double q, double mu, double sigma, double alpha) {
    if (!(q > mu)) return -kInf;
    return -std::exp(alpha * (std::log(sigma) - std::log(q - mu)));
}

double frechet_log_pdf(double q, double mu, double sigma, double alpha) {
    if (!(q > mu)) return -kInf;
    const double lqm = std::log(q - mu);
    const double a = alpha * (std::log(sigma) - lqm);
    return std::log(alpha) + a - lqm - std::exp(a);
}

double frechet_quantile(double prob, double mu, double sigma, double alpha) {
    if (!(prob > 0.0) || !(prob < 1.0))
        throw std::invalid_argument("frechet_quantile: prob must lie strictly in (0,1)");
    return mu + sigma * std::pow(-std::log(prob), -1.0 / alpha);
}

}  // namespace acaf
