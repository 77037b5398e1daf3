#include "acaf/factor_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "acaf/parallel.hpp"
#include "acaf/rng.hpp"

namespace acaf {

namespace {

// Marsaglia-Tsang gamma(shape, 1) for shape >= 1.
double sample_gamma(SequentialRng& rng, double shape) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    while (true) {
        double x, v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform();
        if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
    }
}

double sample_law(SequentialRng& rng, const TailLaw& law) {
    if (law.kind == TailLaw::Kind::Pareto) {
        return law.x_m * std::pow(rng.uniform(), -1.0 / law.alpha);
    }
    // t(nu) = Z / sqrt(chi2_nu / nu); chi2_nu = 2 * gamma(nu/2, 1). nu >= 2 in
    // the supported configurations keeps the gamma shape at or above 1.
    const double z = rng.normal();
    const double chi2 = 2.0 * sample_gamma(rng, 0.5 * law.df);
    return z / std::sqrt(chi2 / law.df);
}

double sample_vol(SequentialRng& rng, const VolMixture& m) {
    if (rng.uniform() < 0.5) return m.lo1 + (m.hi1 - m.lo1) * rng.uniform();
    return m.lo2 + (m.hi2 - m.lo2) * rng.uniform();
}

}  // namespace

double TailLaw::tail_constant() const {
    if (kind == Kind::Pareto) return std::pow(x_m, alpha);
    // 1 - F_t(nu)(x) ~ K x^-nu with
    // K = Gamma((nu+1)/2) nu^{(nu-1)/2} / (Gamma(nu/2) sqrt(nu pi)).
    const double nu = df;
    const double log_k = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                         0.5 * std::log(nu * 3.141592653589793) +
                         0.5 * (nu - 1.0) * std::log(nu);
    return std::exp(log_k);
}

std::string TailLaw::describe() const {
    if (kind == Kind::Pareto)
        return "pareto(" + std::to_string(x_m) + "," + std::to_string(alpha) + ")";
    return "t(" + std::to_string(df) + ")";
}

void FactorLabConfig::validate() const {
    if (p_grid.empty()) throw std::invalid_argument("FactorLabConfig: empty p grid");
    for (long p : p_grid)
        if (p < 1) throw std::invalid_argument("FactorLabConfig: panel sizes must be >= 1");
    if (reps < 1) throw std::invalid_argument("FactorLabConfig: reps must be >= 1");
    if (!(noise1.tail_index() > 0.0) || !(noise2.tail_index() > 0.0))
        throw std::invalid_argument("FactorLabConfig: tail indices must be positive");
    if (noise1.kind == TailLaw::Kind::StudentT && noise1.df < 2.0)
        throw std::invalid_argument("FactorLabConfig: t noise requires df >= 2");
    if (noise2.kind == TailLaw::Kind::StudentT && noise2.df < 2.0)
        throw std::invalid_argument("FactorLabConfig: t noise requires df >= 2");
    if (coeff_range < 0.0 || factor_vol < 0.0)
        throw std::invalid_argument("FactorLabConfig: negative factor parameters");
}

LimitCase classify_limit(const TailLaw& noise1, const TailLaw& noise2) {
    const double a1 = noise1.tail_index();
    const double a2 = noise2.tail_index();
    LimitCase c;
    if (a1 < a2) {
        c.kind = LimitCase::Kind::Alpha1Less;
        c.alpha = a1;
        c.tail_constant = noise1.tail_constant();
    } else if (a1 > a2) {
        c.kind = LimitCase::Kind::Alpha1Greater;
        c.alpha = a2;
        c.tail_constant = noise2.tail_constant();
    } else {
        c.kind = LimitCase::Kind::Equal;
        c.alpha = a1;
        c.tail_constant = 0.5 * (noise1.tail_constant() + noise2.tail_constant());
    }
    return c;
}

double norming_constant(const std::vector<double>& vols, double alpha) {
    if (vols.empty()) throw std::invalid_argument("norming_constant: empty volatilities");
    if (!(alpha > 0.0)) throw std::invalid_argument("norming_constant: alpha must be positive");
    double max_log = -std::numeric_limits<double>::infinity();
    for (double v : vols) {
        if (!(v > 0.0)) throw std::invalid_argument("norming_constant: volatilities must be positive");
        max_log = std::max(max_log, std::log(v));
    }
    double sum = 0.0;
    for (double v : vols) sum += std::exp(alpha * (std::log(v) - max_log));
    return std::exp(max_log + std::log(sum) / alpha);
}

double limit_cdf(const LimitCase& c, double x) {
    if (!(x > 0.0)) return 0.0;
    const double lam = std::pow(x, -c.alpha);
    return c.kind == LimitCase::Kind::Equal ? std::exp(-2.0 * lam) : std::exp(-lam);
}

double simulate_factor_maxima(const FactorLabConfig& config, long p, std::uint64_t rep_seed) {
    config.validate();
    SequentialRng rng(rep_seed);
    const LimitCase lim = classify_limit(config.noise1, config.noise2);

    const double z = config.factor_vol > 0.0 ? config.factor_vol * rng.normal() : 0.0;

    double q = -std::numeric_limits<double>::infinity();
    double sum_pow = 0.0;  // sum sigma_i^alpha, accumulated directly
    for (long i = 0; i < p; ++i) {
        const double beta =
            config.coeff_range > 0.0
                ? config.coeff_range * (2.0 * rng.uniform() - 1.0)
                : 0.0;
        const double sigma = sample_vol(rng, config.vol_law);
        const double e1 = sample_law(rng, config.noise1);
        const double e2 = sample_law(rng, config.noise2);
        q = std::max(q, beta * z + sigma * std::max(e1, e2));
        sum_pow += std::pow(sigma, lim.alpha);
    }
    const double a_p = std::pow(lim.tail_constant * sum_pow, 1.0 / lim.alpha);
    return q / a_p;
}

double ks_distance(std::vector<double> sample, const LimitCase& c) {
    std::sort(sample.begin(), sample.end());
    const std::size_t n = sample.size();
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = limit_cdf(c, sample[i]);
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / static_cast<double>(n) - f));
        d = std::max(d, std::fabs(static_cast<double>(i) / static_cast<double>(n) - f));
    }
    return d;
}

std::vector<ConvergenceRow> convergence_experiment(
    const FactorLabConfig& config, int threads,
    std::vector<std::vector<double>>* samples_out) {
    config.validate();
    const LimitCase lim = classify_limit(config.noise1, config.noise2);

    std::vector<ConvergenceRow> table;
    if (samples_out) samples_out->clear();
    for (std::size_t pi = 0; pi < config.p_grid.size(); ++pi) {
        const long p = config.p_grid[pi];
        std::vector<double> sample(static_cast<std::size_t>(config.reps));
        parallel_for(sample.size(), threads, [&](std::size_t r) {
            const std::uint64_t rep_seed = derive_seed(config.seed, pi, r);
            sample[r] = simulate_factor_maxima(config, p, rep_seed);
        });
        if (samples_out) samples_out->push_back(sample);
        table.push_back({p, ks_distance(std::move(sample), lim)});
    }
    return table;
}

}  // namespace acaf
