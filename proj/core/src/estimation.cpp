#include "acaf/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "acaf/distribution.hpp"
#include "acaf/likelihood.hpp"
#include "acaf/nelder_mead.hpp"
#include "acaf/parallel.hpp"
#include "acaf/rng.hpp"

namespace acaf {

namespace {

constexpr double kEulerGamma = 0.57721566490153286;

double quantile_of_sorted(const std::vector<double>& sorted, double p) {
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double w = pos - static_cast<double>(lo);
    return (1.0 - w) * sorted[lo] + w * sorted[hi];
}

// Deterministic data-driven first start. mu0 = q_min - 0.1*IQR; scale and the
// two tail-index levels come from a static accelerated-Frechet fit at mu0
// (3-parameter simplex, itself seeded by unit-Frechet log-moments of
// log(Q - mu0): mean Euler-gamma / alpha, variance pi^2 / (6 alpha^2)).
// Persistence starts high (0.85) to match the regime these series live in;
// shock decay starts at the reciprocal central 80% span of Q.
ParamVector moment_start(const MaximaSeries& series, ModelVariant v) {
    std::vector<double> sorted = series.values;
    std::sort(sorted.begin(), sorted.end());
    const double q_min = sorted.front();
    double iqr = quantile_of_sorted(sorted, 0.75) - quantile_of_sorted(sorted, 0.25);
    if (!(iqr > 0.0)) iqr = std::max(1e-6, 1e-3 * std::fabs(q_min));
    const double mu0 = q_min - 0.1 * iqr;

    double mean_w = 0.0, var_w = 0.0;
    for (double q : series.values) mean_w += std::log(q - mu0);
    mean_w /= static_cast<double>(series.size());
    for (double q : series.values) {
        const double d = std::log(q - mu0) - mean_w;
        var_w += d * d;
    }
    var_w /= static_cast<double>(series.size());

    double alpha_m = 3.141592653589793 / std::sqrt(6.0 * std::max(var_w, 1e-12));
    alpha_m = std::clamp(alpha_m, 0.1, 100.0);
    const double lsig_m = mean_w - kEulerGamma / alpha_m;

    // static accelerated-Frechet fit over (log sigma, log alpha1, log alpha2)
    auto static_nll = [&](const std::vector<double>& z) {
        const AFParams p{mu0, std::exp(z[0]), std::exp(z[1]), std::exp(z[2])};
        if (!(p.sigma > 0.0) || !(p.alpha1 > 0.0) || !(p.alpha2 > 0.0)) return 1e12;
        double total = 0.0;
        for (double q : series.values) {
            const double lt = af_log_pdf(q, p);
            total += std::isfinite(lt) ? lt : -1e10;
        }
        return -total;
    };
    NelderMeadOptions static_opts;
    static_opts.max_iters = 800;
    static_opts.restarts = 1;
    const NelderMeadResult st = nelder_mead(
        static_nll, {lsig_m, std::log(0.75 * alpha_m), std::log(1.5 * alpha_m)}, static_opts);
    const double lsig_s = st.x[0];
    double la1_s = std::min(st.x[1], st.x[2]);
    double la2_s = std::max(st.x[1], st.x[2]);
    if (la2_s - la1_s < 0.2) {  // keep the branches distinguishable
        const double mid = 0.5 * (la1_s + la2_s);
        la1_s = mid - 0.1;
        la2_s = mid + 0.1;
    }

    double span = quantile_of_sorted(sorted, 0.9) - quantile_of_sorted(sorted, 0.1);
    if (!(span > 0.0)) span = iqr;
    const double decay = 1.0 / span;
    const double persistence = 0.85;
    const double shock = 0.3;

    ParamVector th;
    th.beta1 = persistence;
    th.beta0 = (1.0 - persistence) * lsig_s;
    th.beta2 = shock;
    th.beta3 = decay;
    th.gamma1 = persistence;
    th.gamma0 = (1.0 - persistence) * la1_s;
    th.gamma2 = shock;
    th.gamma3 = decay;
    th.delta1 = persistence;
    th.delta0 = (1.0 - persistence) * la2_s;
    th.delta2 = shock;
    th.delta3 = decay;
    th.mu = mu0;

    if (v == ModelVariant::AcafStaticAlpha1) {
        th.gamma0 = la1_s;
        th.gamma1 = 0.0;
        th.gamma2 = 0.0;
        th.gamma3 = 1.0;
    } else if (v == ModelVariant::Acf) {
        th.gamma0 = (1.0 - persistence) * std::log(alpha_m);
        th.delta0 = 0.0;
        th.delta1 = 0.0;
        th.delta2 = 1.0;
        th.delta3 = 1.0;
    }
    return th;
}

double sample_variance(const std::vector<double>& x) {
    if (x.size() < 2) return 0.0;
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return ss / static_cast<double>(x.size() - 1);
}

}  // namespace

void FitConfig::validate() const {
    if (n_starts < 1) throw std::invalid_argument("FitConfig: n_starts must be >= 1");
    if (!(f_tol > 0.0) || !(x_tol > 0.0))
        throw std::invalid_argument("FitConfig: tolerances must be positive");
    if (max_iters < 1) throw std::invalid_argument("FitConfig: max_iters must be >= 1");
    if (init_override) {
        const LatentState& s = *init_override;
        if (!(s.sigma > 0.0) || !(s.alpha1 > 0.0) || !(s.alpha2 > 0.0))
            throw std::invalid_argument("FitConfig: init_override must be strictly positive");
    }
}

IdentifiabilityResult enforce_identifiability(const ParamVector& theta_hat,
                                              const MaximaSeries& series) {
    series.validate();
    std::vector<double> sg(series.size()), sd(series.size());
    for (std::size_t t = 0; t < series.size(); ++t) {
        sg[t] = theta_hat.gamma2 * std::exp(-theta_hat.gamma3 * series.values[t]);
        sd[t] = theta_hat.delta2 * std::exp(-theta_hat.delta3 * series.values[t]);
    }
    IdentifiabilityResult res;
    res.var_gamma = sample_variance(sg);
    res.var_delta = sample_variance(sd);
    res.tie = (res.var_gamma == res.var_delta);
    if (res.var_gamma < res.var_delta) {
        res.theta = theta_hat.swapped_blocks();
        res.swapped = true;
        std::swap(res.var_gamma, res.var_delta);
    } else {
        res.theta = theta_hat;
    }
    return res;
}

StdErrorResult standard_errors(const ParamVector& theta_hat, const MaximaSeries& series,
                               ModelVariant v, const LatentState* init) {
    const Matrix scores = score_matrix(theta_hat, series, v, init);
    const std::size_t n = scores.rows();
    const std::size_t k = scores.cols();

    std::vector<double> mean(k, 0.0);
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t j = 0; j < k; ++j) mean[j] += scores(t, j);
    for (std::size_t j = 0; j < k; ++j) mean[j] /= static_cast<double>(n);

    StdErrorResult res;
    res.info_matrix = Matrix(k, k);
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t i = 0; i < k; ++i) {
            const double si = scores(t, i) - mean[i];
            for (std::size_t j = i; j < k; ++j)
                res.info_matrix(i, j) += si * (scores(t, j) - mean[j]);
        }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i; j < k; ++j) {
            res.info_matrix(i, j) /= static_cast<double>(n);
            res.info_matrix(j, i) = res.info_matrix(i, j);
        }

    Matrix inv;
    if (!spd_inverse(res.info_matrix, inv)) {
        double trace = 0.0;
        for (std::size_t i = 0; i < k; ++i) trace += res.info_matrix(i, i);
        Matrix ridged = res.info_matrix;
        const double ridge = 1e-10 * trace / static_cast<double>(k);
        for (std::size_t i = 0; i < k; ++i) ridged(i, i) += ridge;
        res.ridged = true;
        if (!spd_inverse(ridged, inv)) {
            res.std_errors.assign(k, std::numeric_limits<double>::quiet_NaN());
            res.note = "score covariance singular after ridge; standard errors undefined";
            return res;
        }
        res.note = "ridge fallback applied when inverting the score covariance";
    }

    res.std_errors.resize(k);
    for (std::size_t i = 0; i < k; ++i)
        res.std_errors[i] = std::sqrt(inv(i, i) / static_cast<double>(n));
    res.defined = true;
    return res;
}

FitResult fit_variant(const MaximaSeries& series, ModelVariant variant,
                      const FitConfig& config_in) {
    FitConfig config = config_in;
    config.model = variant;
    config.validate();
    series.validate();

    const double q_min = series.min();
    const LatentState* init_ptr =
        config.init_override ? &config.init_override.value() : nullptr;

    const ParamVector start0 = moment_start(series, variant);
    const std::vector<double> z0 = to_unconstrained(start0, q_min, variant);
    const std::size_t dim = z0.size();

    // Start points are fixed up front so that growing n_starts only appends
    // (nested seeds: start k depends on (seed, k) alone).
    std::vector<std::vector<double>> starts_z(static_cast<std::size_t>(config.n_starts), z0);
    for (int k = 1; k < config.n_starts; ++k) {
        SequentialRng rng(derive_seed(config.seed, 0x5741u, static_cast<std::uint64_t>(k)));
        for (std::size_t j = 0; j < dim; ++j)
            starts_z[static_cast<std::size_t>(k)][j] += 0.5 * rng.normal();
    }

    NelderMeadOptions nm;
    nm.max_iters = config.max_iters;
    nm.f_tol = config.f_tol;
    nm.x_tol = config.x_tol;

    std::vector<NelderMeadResult> results(starts_z.size());
    std::vector<StartDiagnostics> diag(starts_z.size());
    parallel_for(starts_z.size(), config.threads, [&](std::size_t k) {
        auto objective = [&](const std::vector<double>& z) {
            return nll(z, series, variant, init_ptr);
        };
        try {
            results[k] = nelder_mead(objective, starts_z[k], nm);
        } catch (const std::exception&) {
            results[k] = NelderMeadResult{};   // never converged
            results[k].f = std::numeric_limits<double>::infinity();
        }
        diag[k] = {static_cast<int>(k), results[k].converged, results[k].f,
                   results[k].iterations, results[k].evaluations};
    });

    int best = -1;
    for (std::size_t k = 0; k < results.size(); ++k) {
        if (!results[k].converged) continue;
        if (best < 0 || results[k].f < results[static_cast<std::size_t>(best)].f)
            best = static_cast<int>(k);
    }
    if (best < 0)
        throw FitError("fit: no optimizer start converged", diag);

    FitResult out;
    out.model = variant;
    out.starts = diag;
    out.nll_opt = results[static_cast<std::size_t>(best)].f;
    out.theta_hat =
        from_unconstrained(results[static_cast<std::size_t>(best)].x, q_min, variant);

    if (variant == ModelVariant::AcafFull) {
        const IdentifiabilityResult ident = enforce_identifiability(out.theta_hat, series);
        out.theta_hat = ident.theta;
        out.swapped = ident.swapped;
        out.shock_variance_tie = ident.tie;
        out.shock_var_gamma = ident.var_gamma;
        out.shock_var_delta = ident.var_delta;
    }

    const StdErrorResult se = standard_errors(out.theta_hat, series, variant, init_ptr);
    out.std_errors = se.std_errors;
    out.info_matrix = se.info_matrix;
    out.se_defined = se.defined;
    out.se_ridged = se.ridged;
    out.se_note = se.note;

    out.latent_path = filter_path(out.theta_hat, series,
                                  init_ptr ? *init_ptr : init_state(out.theta_hat));
    return out;
}

FitResult fit(const MaximaSeries& series, const FitConfig& config) {
    return fit_variant(series, config.model, config);
}

std::vector<double> conditional_var(const FitResult& fitted, const MaximaSeries& series,
                                    double level) {
    if (!(level > 0.0) || !(level < 1.0))
        throw std::invalid_argument("conditional_var: level must lie strictly in (0,1)");
    if (fitted.latent_path.size() != series.size())
        throw std::invalid_argument("conditional_var: fit does not match the series length");

    std::vector<double> var(series.size());
    for (std::size_t t = 0; t < series.size(); ++t) {
        const LatentState& s = fitted.latent_path[t];
        if (fitted.model == ModelVariant::Acf) {
            var[t] = frechet_quantile(level, fitted.theta_hat.mu, s.sigma, s.alpha1);
        } else {
            var[t] = af_quantile(level, {fitted.theta_hat.mu, s.sigma, s.alpha1, s.alpha2});
        }
    }
    return var;
}

}  // namespace acaf
