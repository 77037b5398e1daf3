#include "acaf/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "acaf/distribution.hpp"
#include "acaf/rng.hpp"

namespace acaf {

std::string to_string(ModelVariant v) {
    switch (v) {
        case ModelVariant::AcafFull: return "acaf";
        case ModelVariant::AcafStaticAlpha1: return "acaf-static-a1";
        case ModelVariant::Acf: return "acf";
    }
    return "acaf";
}

ModelVariant model_variant_from_string(const std::string& name) {
    if (name == "acaf") return ModelVariant::AcafFull;
    if (name == "acaf-static-a1") return ModelVariant::AcafStaticAlpha1;
    if (name == "acf") return ModelVariant::Acf;
    throw std::invalid_argument("unknown model variant: " + name);
}

std::array<double, kNumParams> ParamVector::to_array() const {
    return {beta0, beta1, beta2, beta3, gamma0, gamma1, gamma2, gamma3,
            delta0, delta1, delta2, delta3, mu};
}

ParamVector ParamVector::from_array(const std::array<double, kNumParams>& a) {
    ParamVector p;
    p.beta0 = a[0]; p.beta1 = a[1]; p.beta2 = a[2]; p.beta3 = a[3];
    p.gamma0 = a[4]; p.gamma1 = a[5]; p.gamma2 = a[6]; p.gamma3 = a[7];
    p.delta0 = a[8]; p.delta1 = a[9]; p.delta2 = a[10]; p.delta3 = a[11];
    p.mu = a[12];
    return p;
}

ParamVector ParamVector::swapped_blocks() const {
    ParamVector p = *this;
    std::swap(p.gamma0, p.delta0);
    std::swap(p.gamma1, p.delta1);
    std::swap(p.gamma2, p.delta2);
    std::swap(p.gamma3, p.delta3);
    return p;
}

namespace {

bool finite(double x) { return std::isfinite(x); }

bool block_valid(double a0, double a1, double a2, double a3) {
    return finite(a0) && a1 >= 0.0 && a1 < 1.0 && a2 > 0.0 && finite(a2) && a3 > 0.0 &&
           finite(a3);
}

}  // namespace

bool ParamVector::is_valid(ModelVariant v) const {
    if (!finite(mu)) return false;
    if (!block_valid(beta0, beta1, beta2, beta3)) return false;
    switch (v) {
        case ModelVariant::AcafFull:
            return block_valid(gamma0, gamma1, gamma2, gamma3) &&
                   block_valid(delta0, delta1, delta2, delta3);
        case ModelVariant::AcafStaticAlpha1:
            // log alpha_1t == gamma0; the rest of the gamma block is fixed out.
            return finite(gamma0) && gamma1 == 0.0 && gamma2 == 0.0 &&
                   block_valid(delta0, delta1, delta2, delta3);
        case ModelVariant::Acf:
            return block_valid(gamma0, gamma1, gamma2, gamma3);
    }
    return false;
}

void ParamVector::validate(ModelVariant v) const {
    if (!is_valid(v))
        throw std::invalid_argument("ParamVector: invariants violated for variant " +
                                    to_string(v));
}

const std::array<std::string, kNumParams>& param_names() {
    static const std::array<std::string, kNumParams> names = {
        "beta0", "beta1", "beta2", "beta3", "gamma0", "gamma1", "gamma2",
        "gamma3", "delta0", "delta1", "delta2", "delta3", "mu"};
    return names;
}

std::vector<int> free_param_indices(ModelVariant v) {
    switch (v) {
        case ModelVariant::AcafFull:
            return {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
        case ModelVariant::AcafStaticAlpha1:
            return {0, 1, 2, 3, 4, 8, 9, 10, 11, 12};
        case ModelVariant::Acf:
            return {0, 1, 2, 3, 4, 5, 6, 7, 12};
    }
    return {};
}

LatentState init_state(const ParamVector& theta) {
    if (theta.beta1 >= 1.0 || theta.gamma1 >= 1.0 || theta.delta1 >= 1.0)
        throw std::invalid_argument("init_state: persistence must be below 1");
    return {std::exp(theta.beta0 / (1.0 - theta.beta1)),
            std::exp(theta.gamma0 / (1.0 - theta.gamma1)),
            std::exp(theta.delta0 / (1.0 - theta.delta1))};
}

LatentState step_state(const ParamVector& theta, const LatentState& prev, double q_prev) {
    if (!std::isfinite(q_prev))
        throw std::invalid_argument("step_state: non-finite observation");
    LatentState next;
    next.sigma = std::exp(theta.beta0 + theta.beta1 * std::log(prev.sigma) -
                          theta.beta2 * std::exp(-theta.beta3 * q_prev));
    next.alpha1 = std::exp(theta.gamma0 + theta.gamma1 * std::log(prev.alpha1) +
                           theta.gamma2 * std::exp(-theta.gamma3 * q_prev));
    next.alpha2 = std::exp(theta.delta0 + theta.delta1 * std::log(prev.alpha2) +
                           theta.delta2 * std::exp(-theta.delta3 * q_prev));
    return next;
}

std::vector<LatentState> filter_path(const ParamVector& theta, const MaximaSeries& series,
                                     const LatentState& init) {
    series.validate();
    std::vector<LatentState> states(series.size());
    states[0] = init;
    for (std::size_t t = 1; t < series.size(); ++t)
        states[t] = step_state(theta, states[t - 1], series.values[t - 1]);
    return states;
}

SimulatedPath simulate(const ParamVector& theta, ModelVariant variant, std::size_t n,
                       std::size_t burn_in, std::uint64_t seed) {
    theta.validate(variant);
    if (n == 0) throw std::invalid_argument("simulate: n must be at least 1");

    const CounterRng rng(seed);
    const std::size_t total = n + burn_in;

    SimulatedPath path;
    path.seed = seed;
    path.series.values.reserve(n);
    path.states.reserve(n);
    path.noise.reserve(n);

    LatentState state = init_state(theta);
    for (std::size_t t = 0; t < total; ++t) {
        const double u1 = rng.uniform(2 * t);
        const double u2 = rng.uniform(2 * t + 1);
        const double y1 = sample_unit_frechet(u1);
        const double y2 = sample_unit_frechet(u2);

        double q;
        if (variant == ModelVariant::Acf) {
            q = theta.mu + state.sigma * std::exp(std::log(y1) / state.alpha1);
        } else {
            q = af_sample({theta.mu, state.sigma, state.alpha1, state.alpha2}, u1, u2);
        }

        if (t >= burn_in) {
            path.series.values.push_back(q);
            path.states.push_back(state);
            path.noise.emplace_back(y1, y2);
        }
        state = step_state(theta, state, q);
    }
    return path;
}

namespace {

// Mean and batch-means standard error of a (possibly autocorrelated) slice.
std::pair<double, double> batch_mean_se(const std::vector<double>& x, std::size_t lo,
                                        std::size_t hi, std::size_t n_batches) {
    const std::size_t len = hi - lo;
    const std::size_t b = std::max<std::size_t>(1, len / n_batches);
    const std::size_t used = n_batches * b;
    double mean = 0.0;
    for (std::size_t i = lo; i < lo + used; ++i) mean += x[i];
    mean /= static_cast<double>(used);

    double var_bm = 0.0;
    for (std::size_t k = 0; k < n_batches; ++k) {
        double bm = 0.0;
        for (std::size_t i = lo + k * b; i < lo + (k + 1) * b; ++i) bm += x[i];
        bm /= static_cast<double>(b);
        var_bm += (bm - mean) * (bm - mean);
    }
    var_bm /= static_cast<double>(n_batches - 1);
    return {mean, std::sqrt(var_bm / static_cast<double>(n_batches))};
}

double half_sample_z(const std::vector<double>& x) {
    const std::size_t n = x.size() / 2;
    auto [m1, s1] = batch_mean_se(x, 0, n, 30);
    auto [m2, s2] = batch_mean_se(x, n, 2 * n, 30);
    return (m1 - m2) / std::sqrt(s1 * s1 + s2 * s2);
}

}  // namespace

double StationarityProbe::max_abs_z() const {
    return std::max({std::fabs(z_log_sigma), std::fabs(z_log_alpha1), std::fabs(z_log_alpha2)});
}

StationarityProbe stationarity_probe(const ParamVector& theta, std::size_t n,
                                     std::uint64_t seed) {
    if (n < 60) throw std::invalid_argument("stationarity_probe: n too small");
    const SimulatedPath path = simulate(theta, ModelVariant::AcafFull, 2 * n, 0, seed);
    std::vector<double> ls(2 * n), la1(2 * n), la2(2 * n);
    for (std::size_t t = 0; t < 2 * n; ++t) {
        ls[t] = std::log(path.states[t].sigma);
        la1[t] = std::log(path.states[t].alpha1);
        la2[t] = std::log(path.states[t].alpha2);
    }
    return {half_sample_z(ls), half_sample_z(la1), half_sample_z(la2)};
}

}  // namespace acaf
