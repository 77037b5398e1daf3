#pragma once

#include <functional>
#include <vector>

namespace acaf {

struct NelderMeadOptions {
    int max_iters = 20000;     // iteration cap (restarts count against it)
    double f_tol = 1e-8;       // relative spread of simplex objective values
    double x_tol = 1e-8;       // simplex diameter in the search space
    double initial_step = 0.25;
    int restarts = 3;          // re-seeded simplexes around the incumbent
};

struct NelderMeadResult {
    std::vector<double> x;
    double f = 0.0;
    bool converged = false;
    int iterations = 0;
    int evaluations = 0;
};

/// Downhill simplex minimization with dimension-adaptive coefficients
/// (reflection 1, expansion 1+2/n, contraction 0.75-1/2n, shrink 1-1/n).
/// After each convergence the simplex is rebuilt around the incumbent with a
/// smaller step until the restart budget is exhausted or the objective stops
/// improving; this guards against premature collapse in higher dimensions.
/// Deterministic for fixed inputs.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const NelderMeadOptions& opts);

}  // namespace acaf
