#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "acaf/series.hpp"

namespace acaf {

/// Which nested model the dynamics describe.
///  - AcafFull:         two competing tail indices, all three recursions live.
///  - AcafStaticAlpha1: log alpha_1t == gamma0 (gamma1..gamma3 fixed out).
///  - Acf:              single tail index, second branch absent entirely.
enum class ModelVariant { AcafFull, AcafStaticAlpha1, Acf };

std::string to_string(ModelVariant v);
ModelVariant model_variant_from_string(const std::string& name);

constexpr int kNumParams = 13;

/// The full parameter vector theta. Layout (indices 0..12):
///   beta0..beta3   scale dynamics        log s_t   = b0 + b1 log s_{t-1} - b2 exp(-b3 Q_{t-1})
///   gamma0..gamma3 endopathic dynamics   log a_1t  = g0 + g1 log a_1,t-1 + g2 exp(-g3 Q_{t-1})
///   delta0..delta3 exopathic dynamics    log a_2t  = d0 + d1 log a_2,t-1 + d2 exp(-d3 Q_{t-1})
///   mu             location
/// Note the sign convention: the shock enters the scale negatively and both
/// tail indices positively.
struct ParamVector {
    double beta0 = 0, beta1 = 0, beta2 = 1, beta3 = 1;
    double gamma0 = 0, gamma1 = 0, gamma2 = 1, gamma3 = 1;
    double delta0 = 0, delta1 = 0, delta2 = 1, delta3 = 1;
    double mu = 0;

    std::array<double, kNumParams> to_array() const;
    static ParamVector from_array(const std::array<double, kNumParams>& a);

    double operator[](int i) const { return to_array()[static_cast<std::size_t>(i)]; }

    /// Exchanges the gamma and delta blocks (the likelihood is invariant).
    ParamVector swapped_blocks() const;

    /// Checks the invariants required for the given variant. Coefficients a
    /// variant fixes out (gamma block for static alpha1, delta block for AcF)
    /// are exempt from the positivity requirements.
    bool is_valid(ModelVariant v = ModelVariant::AcafFull) const;
    void validate(ModelVariant v = ModelVariant::AcafFull) const;
};

/// Canonical parameter names, index-aligned with ParamVector::to_array.
const std::array<std::string, kNumParams>& param_names();

/// Indices of the parameters a variant actually estimates.
std::vector<int> free_param_indices(ModelVariant v);

/// One time step of the latent triple (sigma_t, alpha_1t, alpha_2t).
struct LatentState {
    double sigma;
    double alpha1;
    double alpha2;
};

/// A simulated trajectory: observations, aligned latent states, and the unit
/// Frechet noise pair consumed at each step. Regenerating with the same seed
/// reproduces the path bit-exactly.
struct SimulatedPath {
    MaximaSeries series;
    std::vector<LatentState> states;
    std::vector<std::pair<double, double>> noise;
    std::uint64_t seed = 0;
};

/// Shock-free fixed points of the three recursions:
/// sigma = exp(beta0/(1-beta1)), alpha1 = exp(gamma0/(1-gamma1)),
/// alpha2 = exp(delta0/(1-delta1)).
LatentState init_state(const ParamVector& theta);

/// Applies the three recursions exactly once.
LatentState step_state(const ParamVector& theta, const LatentState& prev, double q_prev);

/// Deterministic reconstruction of the latent path from observations:
/// states[0] = init, states[t] = step(states[t-1], series[t-1]).
std::vector<LatentState> filter_path(const ParamVector& theta, const MaximaSeries& series,
                                     const LatentState& init);

/// Simulates n observations after discarding burn_in, starting from
/// init_state(theta). For ModelVariant::Acf only the first branch is drawn.
/// One uniform pair is consumed per step from a counter-based stream keyed by
/// seed, so paths are reproducible and replications can run concurrently.
SimulatedPath simulate(const ParamVector& theta, ModelVariant variant, std::size_t n,
                       std::size_t burn_in, std::uint64_t seed);

/// Empirical stationarity diagnostic: simulates 2n points and compares
/// half-sample means of the three log latent series, standardized with
/// batch-means standard errors (the series are strongly autocorrelated).
struct StationarityProbe {
    double z_log_sigma;
    double z_log_alpha1;
    double z_log_alpha2;
    double max_abs_z() const;
};

StationarityProbe stationarity_probe(const ParamVector& theta, std::size_t n,
                                     std::uint64_t seed);

}  // namespace acaf
