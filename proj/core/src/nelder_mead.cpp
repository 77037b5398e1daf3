#include "acaf/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace acaf {

namespace {

struct Simplex {
    std::vector<std::vector<double>> x;
    std::vector<double> f;

    std::size_t dim() const { return x.empty() ? 0 : x[0].size(); }

    void order() {
        std::vector<std::size_t> idx(x.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
        std::vector<std::vector<double>> xs(x.size());
        std::vector<double> fs(f.size());
        for (std::size_t k = 0; k < idx.size(); ++k) {
            xs[k] = std::move(x[idx[k]]);
            fs[k] = f[idx[k]];
        }
        x = std::move(xs);
        f = std::move(fs);
    }

    double f_spread() const {
        return std::fabs(f.back() - f.front()) /
               (std::fabs(f.front()) + std::fabs(f.back()) + 1e-300);
    }

    double diameter() const {
        double d = 0.0;
        for (std::size_t v = 1; v < x.size(); ++v)
            for (std::size_t j = 0; j < dim(); ++j)
                d = std::max(d, std::fabs(x[v][j] - x[0][j]));
        return d;
    }
};

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& fn,
                             std::vector<double> x0, const NelderMeadOptions& opts) {
    const std::size_t n = x0.size();
    NelderMeadResult res;
    res.x = x0;
    res.f = fn(x0);
    res.evaluations = 1;

    // dimension-adaptive coefficients (Gao & Han); they markedly improve
    // convergence beyond a handful of dimensions
    const double nd = static_cast<double>(n);
    const double c_expand = 1.0 + 2.0 / nd;
    const double c_contract = 0.75 - 0.5 / nd;
    const double c_shrink = 1.0 - 1.0 / nd;

    double step = opts.initial_step;
    for (int round = 0; round <= opts.restarts; ++round) {
        Simplex s;
        s.x.assign(n + 1, res.x);
        s.f.assign(n + 1, 0.0);
        for (std::size_t j = 0; j < n; ++j) s.x[j + 1][j] += step;
        s.f[0] = res.f;
        for (std::size_t v = 1; v <= n; ++v) {
            s.f[v] = fn(s.x[v]);
            ++res.evaluations;
        }
        s.order();

        bool converged = false;
        std::vector<double> centroid(n), xr(n), xe(n), xc(n);
        while (res.iterations < opts.max_iters) {
            ++res.iterations;

            for (std::size_t j = 0; j < n; ++j) {
                double c = 0.0;
                for (std::size_t v = 0; v < n; ++v) c += s.x[v][j];
                centroid[j] = c / static_cast<double>(n);
            }

            for (std::size_t j = 0; j < n; ++j) xr[j] = centroid[j] + (centroid[j] - s.x[n][j]);
            const double fr = fn(xr);
            ++res.evaluations;

            if (fr < s.f[0]) {
                for (std::size_t j = 0; j < n; ++j)
                    xe[j] = centroid[j] + c_expand * (centroid[j] - s.x[n][j]);
                const double fe = fn(xe);
                ++res.evaluations;
                if (fe < fr) {
                    s.x[n] = xe;
                    s.f[n] = fe;
                } else {
                    s.x[n] = xr;
                    s.f[n] = fr;
                }
            } else if (fr < s.f[n - 1]) {
                s.x[n] = xr;
                s.f[n] = fr;
            } else {
                const bool outside = fr < s.f[n];
                const std::vector<double>& worst = outside ? xr : s.x[n];
                for (std::size_t j = 0; j < n; ++j)
                    xc[j] = centroid[j] + c_contract * (worst[j] - centroid[j]);
                const double fc = fn(xc);
                ++res.evaluations;
                if (fc < (outside ? fr : s.f[n])) {
                    s.x[n] = xc;
                    s.f[n] = fc;
                } else {
                    for (std::size_t v = 1; v <= n; ++v) {
                        for (std::size_t j = 0; j < n; ++j)
                            s.x[v][j] = s.x[0][j] + c_shrink * (s.x[v][j] - s.x[0][j]);
                        s.f[v] = fn(s.x[v]);
                        ++res.evaluations;
                    }
                }
            }
            s.order();

            if (s.f_spread() <= opts.f_tol || s.diameter() <= opts.x_tol) {
                converged = true;
                break;
            }
        }

        const double prev_best = res.f;
        if (s.f[0] < res.f) {
            res.f = s.f[0];
            res.x = s.x[0];
        }
        res.converged = converged;
        if (!converged) break;                       // iteration budget exhausted
        if (round > 0 && prev_best - res.f <= opts.f_tol * (std::fabs(res.f) + 1.0)) break;
        step *= 0.1;
    }
    return res;
}

}  // namespace acaf
