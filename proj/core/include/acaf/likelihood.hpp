#pragma once

#include <vector>

#include "acaf/dynamics.hpp"
#include "acaf/linalg.hpp"
#include "acaf/series.hpp"

namespace acaf {

/// Bijection between the constrained parameter space and the unconstrained
/// coordinates the optimizer works in:
///   identity  for beta0, gamma0, delta0
///   log       for the six positive shock coefficients
///   logit     for the three persistence parameters, into (0,1)
///   mu        = q_min - exp(z_mu), so every iterate keeps mu strictly below
///              the sample minimum and the likelihood stays finite.
/// Only the variant's free parameters appear in the z vector.
std::vector<double> to_unconstrained(const ParamVector& theta, double q_min,
                                     ModelVariant v = ModelVariant::AcafFull);
ParamVector from_unconstrained(const std::vector<double>& z, double q_min,
                               ModelVariant v = ModelVariant::AcafFull);

/// Per-observation conditional log densities l_t(theta) along the filtered
/// latent path started at `init`. Observations at or below mu yield -inf.
std::vector<double> per_obs_loglik(const ParamVector& theta, const MaximaSeries& series,
                                   const LatentState& init,
                                   ModelVariant v = ModelVariant::AcafFull);

/// Negative total log-likelihood -sum_t l_t at theta(z), with the filter
/// started from init_state(theta) (or `init` when supplied). Finite for every
/// finite z: the mu transform keeps the support constraint satisfied, and
/// pathological iterates (overflowed states) are mapped to large finite
/// penalties rather than infinities so the simplex can always rank them.
double nll(const std::vector<double>& z, const MaximaSeries& series,
           ModelVariant v = ModelVariant::AcafFull,
           const LatentState* init = nullptr);

/// Same objective evaluated at a natural-parameter point.
double nll_at(const ParamVector& theta, const MaximaSeries& series,
              ModelVariant v = ModelVariant::AcafFull,
              const LatentState* init = nullptr);

/// n x k matrix of per-observation score vectors d l_t / d theta_i over the
/// variant's free parameters, by central finite differences with step
/// h_i = 1e-5 * max(1, |theta_i|). The latent path is re-filtered for every
/// perturbed theta; steps that would cross a constraint boundary (mu against
/// the sample minimum, persistence against 1, positivity against 0) shrink
/// adaptively.
Matrix score_matrix(const ParamVector& theta, const MaximaSeries& series,
                    ModelVariant v = ModelVariant::AcafFull,
                    const LatentState* init = nullptr);

}  // namespace acaf
