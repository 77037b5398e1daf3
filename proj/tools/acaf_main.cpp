// acaf command-line front end: simulation, fitting, filtering, risk
// extraction, price-data ingestion, and factor-model convergence experiments.
// Every run writes a manifest with the fully resolved configuration; running
// the same subcommand against a manifest reproduces the outputs bit-exactly.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "acaf/distribution.hpp"
#include "acaf/dynamics.hpp"
#include "acaf/estimation.hpp"
#include "acaf/factor_lab.hpp"
#include "acaf/ingestion.hpp"
#include "acaf/likelihood.hpp"
#include "acaf/table_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitConvergenceFailure = 2;
constexpr int kExitInternalError = 3;

json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    json j;
    in >> j;
    return j;
}

acaf::ParamVector theta_from_json(const json& j) {
    acaf::ParamVector th;
    auto a = th.to_array();
    const auto& names = acaf::param_names();
    for (int i = 0; i < acaf::kNumParams; ++i) {
        const std::string& name = names[static_cast<std::size_t>(i)];
        if (!j.contains(name)) throw std::invalid_argument("theta missing field: " + name);
        a[static_cast<std::size_t>(i)] = j.at(name).get<double>();
    }
    return acaf::ParamVector::from_array(a);
}

json theta_to_json(const acaf::ParamVector& th) {
    json j;
    const auto a = th.to_array();
    const auto& names = acaf::param_names();
    for (int i = 0; i < acaf::kNumParams; ++i)
        j[names[static_cast<std::size_t>(i)]] = a[static_cast<std::size_t>(i)];
    return j;
}

// Reads a theta block either inline ("theta") or from a params file that
// carries one (a previous fit.json works).
acaf::ParamVector resolve_theta(const json& cfg) {
    if (cfg.contains("theta")) return theta_from_json(cfg.at("theta"));
    if (cfg.contains("params")) {
        const json doc = load_config_file(cfg.at("params").get<std::string>());
        if (doc.contains("theta")) return theta_from_json(doc.at("theta"));
        throw std::invalid_argument("params file carries no theta block");
    }
    throw std::invalid_argument("no parameters given (use \"theta\" or \"params\")");
}

acaf::TailLaw tail_law_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "t") return acaf::TailLaw::student_t(j.at("df").get<double>());
    if (kind == "pareto")
        return acaf::TailLaw::pareto(j.at("xm").get<double>(), j.at("alpha").get<double>());
    throw std::invalid_argument("unknown noise kind: " + kind);
}

json tail_law_to_json(const acaf::TailLaw& law) {
    json j;
    if (law.kind == acaf::TailLaw::Kind::Pareto) {
        j["kind"] = "pareto";
        j["xm"] = law.x_m;
        j["alpha"] = law.alpha;
    } else {
        j["kind"] = "t";
        j["df"] = law.df;
    }
    return j;
}

void write_manifest(const fs::path& out_dir, const json& resolved) {
    std::ofstream out(out_dir / "manifest.json");
    if (!out) throw std::runtime_error("cannot write manifest");
    out << resolved.dump(2) << '\n';
}

fs::path prepare_out_dir(const json& cfg) {
    const fs::path dir = cfg.value("out", std::string("."));
    fs::create_directories(dir);
    return dir;
}

bool chatty(const json& cfg) { return cfg.value("verbosity", 1) > 0; }

acaf::MaximaSeries load_series(const json& cfg) {
    if (!cfg.contains("input")) throw std::invalid_argument("missing \"input\" series path");
    return acaf::read_observations(cfg.at("input").get<std::string>());
}

acaf::FitConfig fit_config_from_json(const json& cfg) {
    acaf::FitConfig fc;
    fc.seed = cfg.value("seed", 1ULL);
    fc.model = acaf::model_variant_from_string(cfg.value("model", std::string("acaf")));
    if (cfg.contains("fit")) {
        const json& f = cfg.at("fit");
        fc.n_starts = f.value("n_starts", fc.n_starts);
        fc.max_iters = f.value("max_iters", fc.max_iters);
        fc.f_tol = f.value("f_tol", fc.f_tol);
        fc.x_tol = f.value("x_tol", fc.x_tol);
        fc.threads = f.value("threads", fc.threads);
    }
    return fc;
}

json fit_config_to_json(const acaf::FitConfig& fc) {
    return {{"n_starts", fc.n_starts}, {"max_iters", fc.max_iters},
            {"f_tol", fc.f_tol},       {"x_tol", fc.x_tol},
            {"threads", fc.threads}};
}

// ---------------------------------------------------------------------------

int cmd_simulate(const json& cfg) {
    const fs::path out_dir = prepare_out_dir(cfg);
    const acaf::ParamVector theta = resolve_theta(cfg);
    const auto variant = acaf::model_variant_from_string(cfg.value("model", std::string("acaf")));
    const std::size_t n = cfg.value("n", 1000ULL);
    const std::size_t burn_in = cfg.value("burn_in", 500ULL);
    const std::uint64_t seed = cfg.value("seed", 1ULL);

    const acaf::SimulatedPath path = acaf::simulate(theta, variant, n, burn_in, seed);
    acaf::write_observations(out_dir / "observations.csv", path.series);
    acaf::write_latent(out_dir / "latent.csv", path.states);

    json manifest = {{"command", "simulate"}, {"model", acaf::to_string(variant)},
                     {"n", n},                {"burn_in", burn_in},
                     {"seed", seed},          {"theta", theta_to_json(theta)},
                     {"out", out_dir.string()}};
    write_manifest(out_dir, manifest);
    if (chatty(cfg))
        std::cout << "simulate: wrote " << n << " observations to " << out_dir << '\n';
    return kExitOk;
}

int cmd_fit(const json& cfg) {
    const fs::path out_dir = prepare_out_dir(cfg);
    const acaf::MaximaSeries series = load_series(cfg);
    const acaf::FitConfig fc = fit_config_from_json(cfg);
    if (series.size() < 100)
        std::cerr << "warning: series has fewer than 100 observations; "
                     "estimates will be unstable\n";

    const acaf::FitResult res = acaf::fit(series, fc);

    json fit_doc;
    fit_doc["model"] = acaf::to_string(res.model);
    fit_doc["theta"] = theta_to_json(res.theta_hat);
    fit_doc["nll"] = res.nll_opt;
    fit_doc["swapped"] = res.swapped;
    fit_doc["shock_variances"] = {{"gamma", res.shock_var_gamma},
                                  {"delta", res.shock_var_delta},
                                  {"tie", res.shock_variance_tie}};
    const auto free = acaf::free_param_indices(res.model);
    json se = json::object();
    for (std::size_t k = 0; k < free.size(); ++k)
        se[acaf::param_names()[static_cast<std::size_t>(free[k])]] =
            res.se_defined ? json(res.std_errors[k]) : json();
    fit_doc["std_errors"] = se;
    fit_doc["se_defined"] = res.se_defined;
    fit_doc["se_ridged"] = res.se_ridged;
    if (!res.se_note.empty()) fit_doc["se_note"] = res.se_note;
    json info = json::array();
    for (std::size_t i = 0; i < res.info_matrix.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < res.info_matrix.cols(); ++j)
            row.push_back(res.info_matrix(i, j));
        info.push_back(row);
    }
    fit_doc["info_matrix"] = info;
    json starts = json::array();
    for (const auto& s : res.starts)
        starts.push_back({{"index", s.index},
                          {"converged", s.converged},
                          {"nll", s.nll},
                          {"iterations", s.iterations},
                          {"evaluations", s.evaluations}});
    fit_doc["starts"] = starts;

    std::ofstream fout(out_dir / "fit.json");
    fout << fit_doc.dump(2) << '\n';
    acaf::write_latent(out_dir / "latent.csv", res.latent_path);

    json manifest = {{"command", "fit"},
                     {"model", acaf::to_string(fc.model)},
                     {"input", cfg.at("input").get<std::string>()},
                     {"seed", fc.seed},
                     {"fit", fit_config_to_json(fc)},
                     {"out", out_dir.string()}};
    write_manifest(out_dir, manifest);
    if (chatty(cfg))
        std::cout << "fit: nll " << res.nll_opt << (res.swapped ? " (blocks swapped)" : "")
                  << ", results in " << out_dir << '\n';
    return kExitOk;
}

int cmd_filter(const json& cfg) {
    const fs::path out_dir = prepare_out_dir(cfg);
    const acaf::MaximaSeries series = load_series(cfg);
    const acaf::ParamVector theta = resolve_theta(cfg);
    const auto variant = acaf::model_variant_from_string(cfg.value("model", std::string("acaf")));
    theta.validate(variant);

    const auto states = acaf::filter_path(theta, series, acaf::init_state(theta));
    acaf::write_latent(out_dir / "latent.csv", states);

    json manifest = {{"command", "filter"},
                     {"model", acaf::to_string(variant)},
                     {"input", cfg.at("input").get<std::string>()},
                     {"theta", theta_to_json(theta)},
                     {"out", out_dir.string()}};
    write_manifest(out_dir, manifest);
    if (chatty(cfg))
        std::cout << "filter: wrote latent path for " << series.size() << " observations\n";
    return kExitOk;
}

int cmd_var(const json& cfg) {
    const fs::path out_dir = prepare_out_dir(cfg);
    const acaf::MaximaSeries series = load_series(cfg);
    const acaf::ParamVector theta = resolve_theta(cfg);
    const auto variant = acaf::model_variant_from_string(cfg.value("model", std::string("acaf")));
    const double level = cfg.value("level", 0.99);
    theta.validate(variant);

    acaf::FitResult shim;
    shim.theta_hat = theta;
    shim.model = variant;
    shim.latent_path = acaf::filter_path(theta, series, acaf::init_state(theta));
    const std::vector<double> var = acaf::conditional_var(shim, series, level);

    std::vector<double> t(series.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(i + 1);
    acaf::write_table((out_dir / "var.csv").string(), {"t", "var"}, {t, var});

    json manifest = {{"command", "var"},
                     {"model", acaf::to_string(variant)},
                     {"input", cfg.at("input").get<std::string>()},
                     {"level", level},
                     {"theta", theta_to_json(theta)},
                     {"out", out_dir.string()}};
    write_manifest(out_dir, manifest);
    if (chatty(cfg))
        std::cout << "var: wrote " << var.size() << " conditional quantiles at level "
                  << level << '\n';
    return kExitOk;
}

int cmd_ingest(const json& cfg) {
    const fs::path out_dir = prepare_out_dir(cfg);
    if (!cfg.contains("input")) throw std::invalid_argument("missing \"input\" file");
    const std::string input = cfg.at("input").get<std::string>();
    const std::string mode = cfg.value("mode", std::string("panel"));

    acaf::CsvOptions opts;
    if (cfg.contains("ingest")) {
        const json& g = cfg.at("ingest");
        const std::string d = g.value("delimiter", std::string(","));
        if (d.size() != 1) throw std::invalid_argument("delimiter must be one character");
        opts.delimiter = d[0];
        opts.date_column = g.value("date_column", opts.date_column);
        opts.price_column = g.value("price_column", opts.price_column);
        if (g.contains("na_markers"))
            opts.na_markers = g.at("na_markers").get<std::vector<std::string>>();
    }

    json report;
    acaf::MaximaSeries series;
    if (mode == "panel") {
        const acaf::PricePanel panel = acaf::load_price_panel(input, opts);
        const acaf::PanelMaximaResult r = acaf::cross_sectional_maxima(panel);
        series = r.series;
        report["rows_in"] = panel.dates.size();
        report["rows_out"] = r.series.size();
        report["dropped_dates"] = r.dropped;
        report["contributors"] = r.contributors;
    } else if (mode == "intraday") {
        const int interval = cfg.value("interval_min", 5);
        const acaf::TickSeries ticks = acaf::load_tick_series(input, opts);
        const acaf::IntradayMaximaResult r = acaf::intraday_maxima(ticks, interval);
        series = r.series;
        report["ticks_in"] = ticks.prices.size();
        report["days_out"] = r.series.size();
        report["dropped_days"] = r.dropped;
        report["grid_points"] = r.grid_points;
        report["interval_min"] = interval;
    } else {
        throw std::invalid_argument("unknown ingest mode: " + mode);
    }

    acaf::write_observations(out_dir / "maxima.csv", series);

    json manifest = {{"command", "ingest"}, {"mode", mode},
                     {"input", input},      {"out", out_dir.string()},
                     {"report", report}};
    if (cfg.contains("ingest")) manifest["ingest"] = cfg.at("ingest");
    if (cfg.contains("interval_min")) manifest["interval_min"] = cfg.at("interval_min");
    write_manifest(out_dir, manifest);
    if (chatty(cfg))
        std::cout << "ingest: " << series.size() << " maxima written, "
                  << report.value("dropped_dates", json::array()).size() +
                         report.value("dropped_days", json::array()).size()
                  << " rows dropped\n";
    return kExitOk;
}

int cmd_factorlab(const json& cfg) {
    const fs::path out_dir = prepare_out_dir(cfg);

    acaf::FactorLabConfig lab;
    lab.seed = cfg.value("seed", 1ULL);
    int threads = 0;
    bool dump_samples = false;
    if (cfg.contains("factorlab")) {
        const json& f = cfg.at("factorlab");
        if (f.contains("p_grid")) lab.p_grid = f.at("p_grid").get<std::vector<long>>();
        lab.reps = f.value("reps", lab.reps);
        if (f.contains("noise1")) lab.noise1 = tail_law_from_json(f.at("noise1"));
        if (f.contains("noise2")) lab.noise2 = tail_law_from_json(f.at("noise2"));
        lab.coeff_range = f.value("coeff_range", lab.coeff_range);
        lab.factor_vol = f.value("factor_vol", lab.factor_vol);
        if (f.contains("vol_mixture")) {
            const auto v = f.at("vol_mixture").get<std::vector<double>>();
            if (v.size() != 4) throw std::invalid_argument("vol_mixture needs 4 numbers");
            lab.vol_law = {v[0], v[1], v[2], v[3]};
        }
        threads = f.value("threads", 0);
        dump_samples = f.value("dump_samples", false);
    }

    std::vector<std::vector<double>> samples;
    const auto table =
        acaf::convergence_experiment(lab, threads, dump_samples ? &samples : nullptr);
    const acaf::LimitCase lim = acaf::classify_limit(lab.noise1, lab.noise2);
    const std::string case_name =
        lim.kind == acaf::LimitCase::Kind::Alpha1Less    ? "alpha1_less"
        : lim.kind == acaf::LimitCase::Kind::Alpha1Greater ? "alpha1_greater"
                                                           : "equal";

    std::ofstream out(out_dir / "ks.csv");
    out << "p,case,reps,ks,pass\n";
    for (const auto& row : table)
        out << row.p << ',' << case_name << ',' << lab.reps << ','
            << acaf::format_g15(row.ks) << ',' << (row.ks < 0.05 ? "pass" : "fail") << '\n';

    if (dump_samples) {
        for (std::size_t pi = 0; pi < table.size(); ++pi) {
            std::vector<double> rep_idx(samples[pi].size());
            for (std::size_t r = 0; r < rep_idx.size(); ++r)
                rep_idx[r] = static_cast<double>(r + 1);
            acaf::write_table(
                (out_dir / ("samples_p" + std::to_string(table[pi].p) + ".csv")).string(),
                {"rep", "normalized_max"}, {rep_idx, samples[pi]});
        }
    }

    json manifest = {{"command", "factorlab"},
                     {"seed", lab.seed},
                     {"out", out_dir.string()},
                     {"factorlab",
                      {{"p_grid", lab.p_grid},
                       {"reps", lab.reps},
                       {"noise1", tail_law_to_json(lab.noise1)},
                       {"noise2", tail_law_to_json(lab.noise2)},
                       {"coeff_range", lab.coeff_range},
                       {"factor_vol", lab.factor_vol},
                       {"vol_mixture",
                        {lab.vol_law.lo1, lab.vol_law.hi1, lab.vol_law.lo2, lab.vol_law.hi2}},
                       {"threads", threads},
                       {"dump_samples", dump_samples}}}};
    write_manifest(out_dir, manifest);
    if (chatty(cfg))
        for (const auto& row : table)
            std::cout << "factorlab: p=" << row.p << " case=" << case_name
                      << " KS=" << acaf::format_g15(row.ks) << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"autoregressive conditional accelerated Frechet modeling toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_dir, model, input, params, mode;
    std::uint64_t seed = 0;
    bool seed_set = false, out_set = false, model_set = false;
    long long n = -1, burn_in = -1;
    double level = -1.0;
    int interval_min = -1, n_starts = -1, threads = -1, verbosity = -1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file (flags override)");
        sub->add_option("--seed", seed, "random seed")->each([&](const std::string&) {
            seed_set = true;
        });
        sub->add_option("--out", out_dir, "output directory")->each([&](const std::string&) {
            out_set = true;
        });
        sub->add_option("--model", model, "model variant: acaf | acaf-static-a1 | acf")
            ->each([&](const std::string&) { model_set = true; });
        sub->add_option("--input", input, "input series/file path");
        sub->add_option("--params", params, "JSON file carrying a theta block (e.g. fit.json)");
        sub->add_option("--verbosity", verbosity, "0 = data files only, 1 = progress summary");
    };

    CLI::App* c_sim = app.add_subcommand("simulate", "simulate a path from given parameters");
    add_common(c_sim);
    c_sim->add_option("--n", n, "observations to keep");
    c_sim->add_option("--burn-in", burn_in, "burn-in length to discard");

    CLI::App* c_fit = app.add_subcommand("fit", "conditional MLE on an observations table");
    add_common(c_fit);
    c_fit->add_option("--starts", n_starts, "number of optimizer starts");
    c_fit->add_option("--threads", threads, "worker threads (0 = hardware)");

    CLI::App* c_filter = app.add_subcommand("filter", "latent path under given parameters");
    add_common(c_filter);

    CLI::App* c_var = app.add_subcommand("var", "conditional value-at-risk path");
    add_common(c_var);
    c_var->add_option("--level", level, "quantile level in (0,1)");

    CLI::App* c_ingest = app.add_subcommand("ingest", "build maxima series from price data");
    add_common(c_ingest);
    c_ingest->add_option("--mode", mode, "panel | intraday");
    c_ingest->add_option("--interval-min", interval_min, "intraday sampling interval (minutes)");

    CLI::App* c_lab = app.add_subcommand("factorlab", "factor-model convergence experiment");
    add_common(c_lab);

    CLI11_PARSE(app, argc, argv);

    try {
        json cfg = config_path.empty() ? json::object() : load_config_file(config_path);

        // flags win over the config file
        if (seed_set) cfg["seed"] = seed;
        if (out_set) cfg["out"] = out_dir;
        if (model_set) cfg["model"] = model;
        if (!input.empty()) cfg["input"] = input;
        if (!params.empty()) cfg["params"] = params;
        if (n >= 0) cfg["n"] = static_cast<std::uint64_t>(n);
        if (burn_in >= 0) cfg["burn_in"] = static_cast<std::uint64_t>(burn_in);
        if (level > 0.0) cfg["level"] = level;
        if (!mode.empty()) cfg["mode"] = mode;
        if (interval_min > 0) cfg["interval_min"] = interval_min;
        if (n_starts > 0) cfg["fit"]["n_starts"] = n_starts;
        if (threads >= 0) cfg["fit"]["threads"] = threads;
        if (verbosity >= 0) cfg["verbosity"] = verbosity;

        const std::string command = app.get_subcommands().front()->get_name();
        if (cfg.contains("command") && cfg.at("command").get<std::string>() != command)
            throw std::invalid_argument("config was written for command '" +
                                        cfg.at("command").get<std::string>() +
                                        "', invoked as '" + command + "'");

        if (command == "simulate") return cmd_simulate(cfg);
        if (command == "fit") return cmd_fit(cfg);
        if (command == "filter") return cmd_filter(cfg);
        if (command == "var") return cmd_var(cfg);
        if (command == "ingest") return cmd_ingest(cfg);
        if (command == "factorlab") return cmd_factorlab(cfg);
        std::cerr << "error: unknown command " << command << '\n';
        return kExitInputError;
    } catch (const acaf::FitError& e) {
        std::cerr << "error: " << e.what() << '\n';
        for (const auto& s : e.starts)
            std::cerr << "  start " << s.index << ": converged=" << s.converged
                      << " nll=" << s.nll << " iters=" << s.iterations << '\n';
        return kExitConvergenceFailure;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternalError;
    }
}
