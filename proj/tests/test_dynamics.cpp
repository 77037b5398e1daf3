#include <doctest.h>

#include <cmath>
#include <random>

#include "acaf/distribution.hpp"
#include "acaf/dynamics.hpp"
#include "acaf/rng.hpp"
#include "support/test_oracles.hpp"

using namespace acaf;
namespace oracle = acaf::testing;

TEST_CASE("init_state returns the shock-free fixed points") {
    ParamVector th;
    th.beta0 = 0.0;
    th.beta1 = 0.5;
    CHECK(init_state(th).sigma == doctest::Approx(1.0).epsilon(1e-15));

    const ParamVector t9 = oracle::table9_theta();
    const LatentState s = init_state(t9);
    CHECK(s.sigma == doctest::Approx(std::exp(-0.237 / 0.215)).epsilon(1e-13));
    CHECK(s.alpha1 == doctest::Approx(std::exp(0.224 / 0.242)).epsilon(1e-13));
    // -0.038 / 0.09 = -0.4222...; exp of it to 8 digits
    CHECK(s.alpha2 == doctest::Approx(0.65558834).epsilon(1e-7));

    ParamVector bad = t9;
    bad.delta1 = 1.0;
    CHECK_THROWS_AS(init_state(bad), std::invalid_argument);
}

TEST_CASE("step_state single-step arithmetic") {
    ParamVector th;
    th.beta0 = 0.0; th.beta1 = 0.5; th.beta2 = 0.3; th.beta3 = 1.0;
    th.gamma0 = 0.0; th.gamma1 = 0.5; th.gamma2 = 0.4; th.gamma3 = 1.0;
    th.delta0 = 0.0; th.delta1 = 0.5; th.delta2 = 0.2; th.delta3 = 1.0;

    // shock term vanishes for a huge previous observation
    const LatentState s1 = step_state(th, {1.0, 1.0, 1.0}, 1e6);
    CHECK(s1.sigma == doctest::Approx(1.0).epsilon(1e-14));

    const LatentState s2 = step_state(th, {1.0, 1.0, 1.0}, 0.0);
    CHECK(s2.alpha1 == doctest::Approx(std::exp(0.4)).epsilon(1e-14));
    CHECK(s2.alpha1 == doctest::Approx(1.49182).epsilon(1e-5));

    CHECK_THROWS_AS(step_state(th, {1.0, 1.0, 1.0}, std::nan("")), std::invalid_argument);
}

TEST_CASE("larger previous loss raises the scale and lowers both indices") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        ParamVector th;
        th.beta0 = unif(gen) - 0.5; th.beta1 = 0.9 * unif(gen); th.beta2 = 0.1 + unif(gen);
        th.beta3 = 0.5 + 5.0 * unif(gen);
        th.gamma0 = unif(gen) - 0.5; th.gamma1 = 0.9 * unif(gen); th.gamma2 = 0.1 + unif(gen);
        th.gamma3 = 0.5 + 5.0 * unif(gen);
        th.delta0 = unif(gen) - 0.5; th.delta1 = 0.9 * unif(gen); th.delta2 = 0.1 + unif(gen);
        th.delta3 = 0.5 + 5.0 * unif(gen);
        const LatentState prev{0.2 + unif(gen), 0.5 + 3.0 * unif(gen), 0.5 + 3.0 * unif(gen)};
        const double q_lo = unif(gen) - 0.5;
        const double q_hi = q_lo + 0.1 + unif(gen);
        const LatentState lo = step_state(th, prev, q_lo);
        const LatentState hi = step_state(th, prev, q_hi);
        CHECK(hi.sigma > lo.sigma);
        CHECK(hi.alpha1 < lo.alpha1);
        CHECK(hi.alpha2 < lo.alpha2);
        CHECK(lo.sigma > 0.0);
        CHECK(lo.alpha1 > 0.0);
        CHECK(lo.alpha2 > 0.0);
    }
}

TEST_CASE("filter on a constant series contracts to a fixed point") {
    const ParamVector t9 = oracle::table9_theta();
    MaximaSeries series;
    series.values.assign(400, 0.03);
    const auto states = filter_path(t9, series, init_state(t9));

    auto dist = [&](std::size_t t) {
        return std::max({std::fabs(std::log(states[t + 1].sigma) - std::log(states[t].sigma)),
                         std::fabs(std::log(states[t + 1].alpha1) - std::log(states[t].alpha1)),
                         std::fabs(std::log(states[t + 1].alpha2) - std::log(states[t].alpha2))});
    };
    // slowest persistence is delta1 = 0.91: consecutive distances shrink
    // geometrically and first cross 1e-10 near t ~ 240
    CHECK(dist(300) < 1e-10);
    CHECK(dist(350) < dist(300));
    // realized contraction rate of the alpha2 component matches delta1
    const double r = (std::log(states[301].alpha2) - std::log(states[300].alpha2)) /
                     (std::log(states[300].alpha2) - std::log(states[299].alpha2));
    CHECK(r == doctest::Approx(0.91).epsilon(1e-3));
}

TEST_CASE("filter of a length-1 series returns the initial state") {
    const ParamVector t9 = oracle::table9_theta();
    MaximaSeries series;
    series.values = {0.1};
    const auto states = filter_path(t9, series, {1.0, 2.0, 3.0});
    REQUIRE(states.size() == 1);
    CHECK(states[0].sigma == 1.0);
    CHECK(states[0].alpha1 == 2.0);
    CHECK(states[0].alpha2 == 3.0);

    MaximaSeries empty;
    CHECK_THROWS_AS(filter_path(t9, empty, {1.0, 1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("filter replay is bit-identical") {
    const ParamVector t9 = oracle::table9_theta();
    const SimulatedPath path = simulate(t9, ModelVariant::AcafFull, 500, 100, 99);
    const auto s1 = filter_path(t9, path.series, path.states.front());
    const auto s2 = filter_path(t9, path.series, path.states.front());
    for (std::size_t t = 0; t < s1.size(); ++t) {
        CHECK(s1[t].sigma == s2[t].sigma);
        CHECK(s1[t].alpha1 == s2[t].alpha1);
        CHECK(s1[t].alpha2 == s2[t].alpha2);
    }
}

TEST_CASE("one-step simulation composes init_state and af_sample") {
    const ParamVector t9 = oracle::table9_theta();
    const SimulatedPath path = simulate(t9, ModelVariant::AcafFull, 1, 0, 4242);

    const CounterRng rng(4242);
    const LatentState s0 = init_state(t9);
    const double expected =
        af_sample({t9.mu, s0.sigma, s0.alpha1, s0.alpha2}, rng.uniform(0), rng.uniform(1));
    REQUIRE(path.series.size() == 1);
    CHECK(path.series.values[0] == expected);
    CHECK(path.states[0].sigma == s0.sigma);
}

TEST_CASE("simulate at the S&P-calibrated truth stays in the published bands") {
    const ParamVector t9 = oracle::table9_theta();
    const SimulatedPath path = simulate(t9, ModelVariant::AcafFull, 5000, 500, 2);
    double a1_lo = 1e300, a1_hi = 0, a2_lo = 1e300, a2_hi = 0, s_lo = 1e300, s_hi = 0;
    for (const auto& s : path.states) {
        a1_lo = std::min(a1_lo, s.alpha1); a1_hi = std::max(a1_hi, s.alpha1);
        a2_lo = std::min(a2_lo, s.alpha2); a2_hi = std::max(a2_hi, s.alpha2);
        s_lo = std::min(s_lo, s.sigma); s_hi = std::max(s_hi, s.sigma);
    }
    // published typical ranges widened 20% at the endpoints
    CHECK(a1_lo >= 3.33 * 0.8);
    CHECK(a1_hi <= 10.51 * 1.2);
    CHECK(a2_lo >= 2.78 * 0.8);
    CHECK(a2_hi <= 28.53 * 1.2);
    CHECK(s_lo >= 0.26 * 0.8);
    CHECK(s_hi <= 0.32 * 1.2);
}

TEST_CASE("probability integral transform of a simulated path is uniform") {
    const ParamVector t9 = oracle::table9_theta();
    const SimulatedPath path = simulate(t9, ModelVariant::AcafFull, 5000, 500, 11);
    std::vector<double> pit(path.series.size());
    for (std::size_t t = 0; t < pit.size(); ++t) {
        const LatentState& s = path.states[t];
        pit[t] = std::exp(
            af_log_cdf(path.series.values[t], {t9.mu, s.sigma, s.alpha1, s.alpha2}));
    }
    const double ks = oracle::ks_statistic(pit, [](double u) { return std::clamp(u, 0.0, 1.0); });
    CHECK(oracle::ks_p_value(ks, pit.size()) > 0.01);
}

TEST_CASE("seed reproducibility and burn-in accounting") {
    const ParamVector t9 = oracle::table9_theta();
    const SimulatedPath a = simulate(t9, ModelVariant::AcafFull, 300, 50, 1234);
    const SimulatedPath b = simulate(t9, ModelVariant::AcafFull, 300, 50, 1234);
    REQUIRE(a.series.size() == 300);
    for (std::size_t t = 0; t < 300; ++t) {
        CHECK(a.series.values[t] == b.series.values[t]);
        CHECK(a.noise[t].first == b.noise[t].first);
        CHECK(a.noise[t].second == b.noise[t].second);
    }
    CHECK(a.states.size() == a.series.size());
    CHECK(a.noise.size() == a.series.size());
}

TEST_CASE("filtering a simulated series reproduces its latent path bit-exactly") {
    const ParamVector t9 = oracle::table9_theta();
    const SimulatedPath path = simulate(t9, ModelVariant::AcafFull, 2000, 300, 77);
    const auto filtered = filter_path(t9, path.series, path.states.front());
    REQUIRE(filtered.size() == path.states.size());
    for (std::size_t t = 0; t < filtered.size(); ++t) {
        CHECK(filtered[t].sigma == path.states[t].sigma);
        CHECK(filtered[t].alpha1 == path.states[t].alpha1);
        CHECK(filtered[t].alpha2 == path.states[t].alpha2);
    }
}

TEST_CASE("shock-free stepping contracts log states at the persistence rate") {
    ParamVector th = oracle::table9_theta();
    th.beta2 = 1e-300;
    th.gamma2 = 1e-300;
    th.delta2 = 1e-300;
    const LatentState fixed = init_state(th);
    LatentState s{fixed.sigma * 3.0, fixed.alpha1 * 2.0, fixed.alpha2 * 0.25};
    std::vector<double> gap;
    for (int t = 0; t < 30; ++t) {
        gap.push_back(std::fabs(std::log(s.sigma) - std::log(fixed.sigma)));
        s = step_state(th, s, 1e9);
    }
    // slope of log-gap decay equals log(beta1) within 1%
    const double slope = (std::log(gap[25]) - std::log(gap[5])) / 20.0;
    CHECK(slope == doctest::Approx(std::log(th.beta1)).epsilon(0.01));
}

TEST_CASE("AcF one-step conditional law is the single-index Frechet") {
    ParamVector th = oracle::table9_theta();
    const SimulatedPath path = simulate(th, ModelVariant::Acf, 5000, 500, 21);
    std::vector<double> pit(path.series.size());
    for (std::size_t t = 0; t < pit.size(); ++t) {
        const LatentState& s = path.states[t];
        pit[t] = std::exp(frechet_log_cdf(path.series.values[t], th.mu, s.sigma, s.alpha1));
    }
    const double ks = oracle::ks_statistic(pit, [](double u) { return std::clamp(u, 0.0, 1.0); });
    CHECK(oracle::ks_p_value(ks, pit.size()) > 0.01);
}

TEST_CASE("stationarity probe: half-sample balance at the truth, slow mixing near unit root") {
    const ParamVector t9 = oracle::table9_theta();
    const StationarityProbe probe = stationarity_probe(t9, 20000, 6);
    CHECK(std::fabs(probe.z_log_sigma) < 3.0);
    CHECK(std::fabs(probe.z_log_alpha1) < 3.0);
    CHECK(std::fabs(probe.z_log_alpha2) < 3.0);

    // deterministic under a fixed seed
    const StationarityProbe again = stationarity_probe(t9, 20000, 6);
    CHECK(probe.z_log_sigma == again.z_log_sigma);

    // near-unit-root scale dynamics mix much more slowly
    ParamVector slow = t9;
    const double fixed_point = t9.beta0 / (1.0 - t9.beta1);
    slow.beta1 = 0.999;
    slow.beta0 = fixed_point * (1.0 - slow.beta1);
    double max_raw_slow = 0.0, max_raw_fast = 0.0;
    ParamVector fast = slow;
    fast.beta1 = 0.5;
    fast.beta0 = fixed_point * (1.0 - fast.beta1);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const SimulatedPath ps = simulate(slow, ModelVariant::AcafFull, 8000, 0, seed);
        const SimulatedPath pf = simulate(fast, ModelVariant::AcafFull, 8000, 0, seed);
        auto raw_diff = [](const SimulatedPath& p) {
            double m1 = 0.0, m2 = 0.0;
            const std::size_t h = p.states.size() / 2;
            for (std::size_t t = 0; t < h; ++t) m1 += std::log(p.states[t].sigma);
            for (std::size_t t = h; t < 2 * h; ++t) m2 += std::log(p.states[t].sigma);
            return std::fabs(m1 - m2) / static_cast<double>(h);
        };
        max_raw_slow += raw_diff(ps);
        max_raw_fast += raw_diff(pf);
    }
    CHECK(max_raw_slow > 2.0 * max_raw_fast);
}
