#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "acaf/dynamics.hpp"
#include "acaf/linalg.hpp"
#include "acaf/series.hpp"

namespace acaf {

struct FitConfig {
    int n_starts = 20;
    int max_iters = 20000;    // simplex iteration cap per start
    double f_tol = 1e-8;
    double x_tol = 1e-8;
    std::uint64_t seed = 1;
    ModelVariant model = ModelVariant::AcafFull;
    int threads = 0;          // 0 = hardware concurrency (starts run concurrently)
    /// Filter initialization override; default is the shock-free fixed point
    /// init_state(theta). The choice is asymptotically immaterial.
    std::optional<LatentState> init_override;

    void validate() const;
};

struct StartDiagnostics {
    int index = 0;
    bool converged = false;
    double nll = 0.0;
    int iterations = 0;
    int evaluations = 0;
};

struct FitResult {
    ParamVector theta_hat;
    ModelVariant model = ModelVariant::AcafFull;
    std::vector<double> std_errors;        // aligned with free_param_indices(model)
    double nll_opt = 0.0;
    Matrix info_matrix;                    // estimated M0 (score covariance)
    std::vector<LatentState> latent_path;  // filtered under theta_hat
    bool swapped = false;                  // identifiability relabeling applied
    bool shock_variance_tie = false;
    double shock_var_gamma = 0.0;          // var of gamma2 exp(-gamma3 Q_t)
    double shock_var_delta = 0.0;          // var of delta2 exp(-delta3 Q_t)
    std::vector<StartDiagnostics> starts;
    bool se_defined = false;
    bool se_ridged = false;                // ridge fallback used when inverting M0
    std::string se_note;
};

/// Raised when no optimizer start converges; carries the per-start table.
class FitError : public std::runtime_error {
public:
    FitError(const std::string& what, std::vector<StartDiagnostics> diag)
        : std::runtime_error(what), starts(std::move(diag)) {}
    std::vector<StartDiagnostics> starts;
};

/// Conditional maximum likelihood fit: multi-start Nelder-Mead over the
/// unconstrained parameterization. The first start is a deterministic
/// moment-based guess (mu0 = q_min - 0.1*IQR; scale and tail level from a
/// static Frechet moment fit of log(Q - mu0)); the remaining starts jitter it
/// in z-space with Gaussian scale 0.5. Best converged start wins, ties broken
/// by lowest start index. Identifiability relabeling (full model only) and
/// standard errors are applied to the winner.
FitResult fit(const MaximaSeries& series, const FitConfig& config);

/// Same as fit() with the variant overriding config.model.
FitResult fit_variant(const MaximaSeries& series, ModelVariant variant,
                      const FitConfig& config);

/// Standard errors per Theorem-3 plug-in: M0_hat is the sample covariance of
/// the per-observation score rows, SE_i = sqrt((M0_hat^{-1})_{ii} / n). A
/// single ridge (1e-10 * trace/dim * I) is added if the factorization fails;
/// still-singular matrices yield NaN errors plus a diagnostic note.
struct StdErrorResult {
    std::vector<double> std_errors;
    Matrix info_matrix;
    bool defined = false;
    bool ridged = false;
    std::string note;
};

StdErrorResult standard_errors(const ParamVector& theta_hat, const MaximaSeries& series,
                               ModelVariant v = ModelVariant::AcafFull,
                               const LatentState* init = nullptr);

/// Remark-2 relabeling: endopathic (gamma) shocks must have the larger sample
/// variance. Computes var(gamma2 exp(-gamma3 Q_t)) and var(delta2 exp(-delta3 Q_t))
/// over the observed series; swaps the two blocks when the ordering is
/// violated. Exact ties do not swap and are flagged.
struct IdentifiabilityResult {
    ParamVector theta;
    bool swapped = false;
    bool tie = false;
    double var_gamma = 0.0;
    double var_delta = 0.0;
};

IdentifiabilityResult enforce_identifiability(const ParamVector& theta_hat,
                                              const MaximaSeries& series);

/// Conditional value-at-risk path: for each t, the `level` quantile of the
/// one-step conditional law under the fitted state.
std::vector<double> conditional_var(const FitResult& fitted, const MaximaSeries& series,
                                    double level);

}  // namespace acaf
