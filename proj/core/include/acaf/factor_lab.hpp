#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace acaf {

/// A heavy-tailed noise law in the Frechet domain of attraction. The tail
/// index of t(nu) is nu; Pareto(x_m, a) has tail index a. tail_constant() is
/// the limit K of the slowly-varying prefactor, 1 - F(x) ~ K x^{-alpha}.
struct TailLaw {
    enum class Kind { StudentT, Pareto };
    Kind kind = Kind::StudentT;
    double df = 3.0;        // StudentT
    double x_m = 1.0;       // Pareto scale
    double alpha = 3.0;     // Pareto index

    static TailLaw student_t(double df) { return {Kind::StudentT, df, 1.0, df}; }
    static TailLaw pareto(double x_m, double alpha) {
        return {Kind::Pareto, alpha, x_m, alpha};
    }

    double tail_index() const { return kind == Kind::StudentT ? df : alpha; }
    double tail_constant() const;
    std::string describe() const;
};

/// Half-half uniform mixture for the idiosyncratic volatilities sigma_i.
struct VolMixture {
    double lo1 = 0.0, hi1 = 0.09;
    double lo2 = 0.01, hi2 = 0.08;
};

struct FactorLabConfig {
    std::vector<long> p_grid = {100, 1000, 10000};
    int reps = 1000;
    TailLaw noise1 = TailLaw::student_t(3);
    TailLaw noise2 = TailLaw::student_t(5);
    double coeff_range = 2.0;   // loadings beta_i ~ U(-coeff_range, coeff_range)
    /// Scale of the common factor Z ~ N(0, factor_vol^2). The factor term is
    /// asymptotically irrelevant for the maxima; keeping it commensurate with
    /// the idiosyncratic volatilities makes the finite-p convergence visible
    /// at panel sizes that are actually simulable.
    double factor_vol = 0.01;
    VolMixture vol_law;
    std::uint64_t seed = 1;

    void validate() const;
};

/// Which Corollary-1 regime a noise pairing falls in, together with the
/// norming index (the heavier tail always wins) and the effective tail
/// constant folded into the scale.
struct LimitCase {
    enum class Kind { Alpha1Less, Equal, Alpha1Greater };
    Kind kind = Kind::Equal;
    double alpha = 3.0;          // norming index = min(alpha1, alpha2)
    double tail_constant = 1.0;  // K of the dominant law (mean of both when equal)
};

LimitCase classify_limit(const TailLaw& noise1, const TailLaw& noise2);

/// (sum_i vols_i^alpha)^(1/alpha), via log-sum-exp so large indices do not
/// overflow; tends to max(vols) as alpha grows.
double norming_constant(const std::vector<double>& vols, double alpha);

/// Limiting CDF of the normalized maxima: Psi_alpha(x) for the dominant-index
/// cases, Psi_alpha(x)^2 in the equal-index case (equal norming constants).
double limit_cdf(const LimitCase& c, double x);

/// One panel draw: Q = max_i (beta_i Z + sigma_i max(e1_i, e2_i)), returned
/// as (Q - b_p)/a_p with b_p = 0 and a_p the Corollary-1 norming constant of
/// the dominant index (tail constant folded into the scale).
double simulate_factor_maxima(const FactorLabConfig& config, long p, std::uint64_t rep_seed);

struct ConvergenceRow {
    long p = 0;
    double ks = 0.0;
};

/// KS distance between `reps` normalized maxima and the limit law, for each
/// panel size in the grid. Replications run concurrently with per-replication
/// seeds; results are deterministic for a fixed config.
std::vector<ConvergenceRow> convergence_experiment(
    const FactorLabConfig& config, int threads = 0,
    std::vector<std::vector<double>>* samples_out = nullptr);

/// Two-sided KS distance of a sample against a CDF evaluated pointwise.
double ks_distance(std::vector<double> sample, const LimitCase& c);

}  // namespace acaf
