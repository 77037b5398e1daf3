#include "acaf/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace acaf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBadObsPenalty = 1e10;  // per observation, keeps nll finite and ordered

double log_add(double a, double b) {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

double logit(double p) {
    p = std::clamp(p, 1e-12, 1.0 - 1e-12);
    return std::log(p / (1.0 - p));
}

// clamped so that the inverse transform of ANY finite z satisfies the
// parameter invariants even where exp/logistic saturate in doubles
double logistic(double z) {
    return std::min(1.0 / (1.0 + std::exp(-z)), 1.0 - 1e-12);
}

double positive_exp(double z) {
    return std::max(std::exp(z), std::numeric_limits<double>::min());
}

enum class Map { Identity, Log, Logit, Mu };

Map map_for_index(int i) {
    switch (i) {
        case 0: case 4: case 8: return Map::Identity;
        case 1: case 5: case 9: return Map::Logit;
        case 12: return Map::Mu;
        default: return Map::Log;
    }
}

// Core evaluation shared by per_obs_loglik and nll so that the two are
// bit-identical where both are defined. Works on log states throughout; the
// recursions are linear in them.
double accumulate_loglik(const ParamVector& th, const MaximaSeries& series,
                         const LatentState& init, ModelVariant v,
                         std::vector<double>* out, bool penalize_nonfinite) {
    const bool two_branch = (v != ModelVariant::Acf);
    double lsig = std::log(init.sigma);
    double la1 = std::log(init.alpha1);
    double la2 = std::log(init.alpha2);

    double total = 0.0;
    const std::size_t n = series.size();
    if (out) out->resize(n);

    for (std::size_t t = 0; t < n; ++t) {
        const double q = series.values[t];
        double lt;
        if (!(q > th.mu)) {
            lt = -kInf;
        } else {
            const double lqm = std::log(q - th.mu);
            const double lr = lsig - lqm;
            if (two_branch) {
                const double a1 = std::exp(la1) * lr;
                const double a2 = std::exp(la2) * lr;
                const double mix = log_add(la1 + a1, la2 + a2) - lqm;
                lt = mix - (std::exp(a1) + std::exp(a2));
            } else {
                const double a = std::exp(la1) * lr;
                lt = la1 + a - lqm - std::exp(a);
            }
        }
        if (penalize_nonfinite && !std::isfinite(lt)) lt = -kBadObsPenalty;
        if (out) (*out)[t] = lt;
        total += lt;

        lsig = th.beta0 + th.beta1 * lsig - th.beta2 * std::exp(-th.beta3 * q);
        la1 = th.gamma0 + th.gamma1 * la1 + th.gamma2 * std::exp(-th.gamma3 * q);
        la2 = th.delta0 + th.delta1 * la2 + th.delta2 * std::exp(-th.delta3 * q);
    }
    return total;
}

bool theta_sane(const ParamVector& th) {
    for (double x : th.to_array())
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace

std::vector<double> to_unconstrained(const ParamVector& theta, double q_min, ModelVariant v) {
    theta.validate(v);
    if (!(theta.mu < q_min))
        throw std::invalid_argument("to_unconstrained: mu must lie below the series minimum");
    const auto a = theta.to_array();
    std::vector<double> z;
    for (int i : free_param_indices(v)) {
        const double x = a[static_cast<std::size_t>(i)];
        switch (map_for_index(i)) {
            case Map::Identity: z.push_back(x); break;
            case Map::Log: z.push_back(std::log(x)); break;
            case Map::Logit: z.push_back(logit(x)); break;
            case Map::Mu: z.push_back(std::log(q_min - x)); break;
        }
    }
    return z;
}

ParamVector from_unconstrained(const std::vector<double>& z, double q_min, ModelVariant v) {
    const auto free = free_param_indices(v);
    if (z.size() != free.size())
        throw std::invalid_argument("from_unconstrained: wrong dimension for variant");

    // Variant-fixed entries: inert values consistent with is_valid().
    ParamVector th;
    if (v == ModelVariant::AcafStaticAlpha1) {
        th.gamma1 = 0.0;
        th.gamma2 = 0.0;
        th.gamma3 = 1.0;
    } else if (v == ModelVariant::Acf) {
        th.delta0 = 0.0;
        th.delta1 = 0.0;
        th.delta2 = 1.0;
        th.delta3 = 1.0;
    }

    auto a = th.to_array();
    for (std::size_t k = 0; k < free.size(); ++k) {
        const int i = free[k];
        const double zk = z[k];
        double x = 0.0;
        switch (map_for_index(i)) {
            case Map::Identity: x = zk; break;
            case Map::Log: x = positive_exp(zk); break;
            case Map::Logit: x = logistic(zk); break;
            case Map::Mu: x = q_min - std::min(std::exp(zk), 1e300); break;
        }
        a[static_cast<std::size_t>(i)] = x;
    }
    return ParamVector::from_array(a);
}

std::vector<double> per_obs_loglik(const ParamVector& theta, const MaximaSeries& series,
                                   const LatentState& init, ModelVariant v) {
    series.validate();
    theta.validate(v);
    std::vector<double> out;
    accumulate_loglik(theta, series, init, v, &out, /*penalize_nonfinite=*/false);
    return out;
}

double nll_at(const ParamVector& theta, const MaximaSeries& series, ModelVariant v,
              const LatentState* init) {
    if (!theta_sane(theta))
        return kBadObsPenalty * static_cast<double>(series.size());
    const LatentState s0 = init ? *init : init_state(theta);
    return -accumulate_loglik(theta, series, s0, v, nullptr, /*penalize_nonfinite=*/true);
}

double nll(const std::vector<double>& z, const MaximaSeries& series, ModelVariant v,
           const LatentState* init) {
    series.validate();
    for (double x : z)
        if (!std::isfinite(x))
            throw std::invalid_argument("nll: non-finite unconstrained coordinate");
    return nll_at(from_unconstrained(z, series.min(), v), series, v, init);
}

Matrix score_matrix(const ParamVector& theta, const MaximaSeries& series, ModelVariant v,
                    const LatentState* init) {
    series.validate();
    theta.validate(v);
    const double q_min = series.min();
    if (!(theta.mu < q_min))
        throw std::invalid_argument("score_matrix: mu must lie strictly below the series minimum");

    const auto free = free_param_indices(v);
    const std::size_t n = series.size();
    Matrix scores(n, free.size());

    auto base = theta.to_array();
    std::vector<double> lo_vals, hi_vals;
    for (std::size_t k = 0; k < free.size(); ++k) {
        const int i = free[k];
        const double x = base[static_cast<std::size_t>(i)];
        double h = 1e-5 * std::max(1.0, std::fabs(x));

        // shrink the step so both perturbed points stay strictly feasible
        switch (map_for_index(i)) {
            case Map::Log: h = std::min(h, 0.5 * x); break;
            case Map::Logit: h = std::min({h, x > 0.0 ? 0.5 * x : h, 0.5 * (1.0 - x)}); break;
            case Map::Mu: h = std::min(h, 0.5 * (q_min - x)); break;
            case Map::Identity: break;
        }
        if (!(h > 0.0)) h = 1e-12;

        auto th_hi = base, th_lo = base;
        th_hi[static_cast<std::size_t>(i)] = x + h;
        th_lo[static_cast<std::size_t>(i)] = x - h;
        const ParamVector phi = ParamVector::from_array(th_hi);
        const ParamVector plo = ParamVector::from_array(th_lo);

        accumulate_loglik(phi, series, init ? *init : init_state(phi), v, &hi_vals, false);
        accumulate_loglik(plo, series, init ? *init : init_state(plo), v, &lo_vals, false);
        const double inv2h = 1.0 / (2.0 * h);
        for (std::size_t t = 0; t < n; ++t) scores(t, k) = (hi_vals[t] - lo_vals[t]) * inv2h;
    }
    return scores;
}

}  // namespace acaf
