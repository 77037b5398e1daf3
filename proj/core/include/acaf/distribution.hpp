#pragma once

#include <cmath>

namespace acaf {

/// Parameters of the accelerated Frechet one-step law
///   F(q) = exp{ -sigma^a1 (q-mu)^-a1 - sigma^a2 (q-mu)^-a2 },  q > mu.
/// alpha1 is the endopathic tail index, alpha2 the exopathic one; the law is
/// symmetric in the two indices.
struct AFParams {
    double mu;
    double sigma;
    double alpha1;
    double alpha2;

    void validate() const;
};

/// log F(q). Returns -inf for q <= mu; never positive.
double af_log_cdf(double q, const AFParams& p);

/// log f(q), with the two mixture terms combined in log space so that large
/// tail indices (alpha up to a few hundred in real fits) do not overflow.
double af_log_pdf(double q, const AFParams& p);

/// Inverse CDF. Bracketed bisection in log(q - mu), deterministic; the
/// bracket is tightened below 1e-12 relative in (q - mu), which keeps the
/// round-trip |log F(quantile(p)) - log p| under 1e-9 for tail indices in
/// the ranges seen in practice.
double af_quantile(double prob, const AFParams& p);

/// Inverse-CDF transform of a uniform(0,1) variate to the unit Frechet law
/// F(y) = exp(-1/y). Rejects u at the endpoints.
double sample_unit_frechet(double u);

/// One draw Q = mu + sigma * max(Y1^{1/alpha1}, Y2^{1/alpha2}) from a pair of
/// uniforms. Always returns a value strictly above mu.
double af_sample(const AFParams& p, double u1, double u2);

// Single-index Frechet Psi_alpha((q-mu)/sigma), the alpha2-degenerate special
// case; also the one-step law of the nested AcF model.
double frechet_log_cdf(double q, double mu, double sigma, double alpha);
double frechet_log_pdf(double q, double mu, double sigma, double alpha);
double frechet_quantile(double prob, double mu, double sigma, double alpha);

}  // namespace acaf
