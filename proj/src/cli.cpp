#include "vqt/cli.hpp"

#include "vqt/errors.hpp"
#include "vqt/io.hpp"
#include "vqt/model.hpp"
#include "vqt/plot.hpp"
#include "vqt/vqt.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <ostream>
#include <sstream>

namespace vqt::cli {

namespace {

std::string tag(const char* prefix, double v) { return prefix + io::format_number(v); }

const std::vector<std::string> kBasisLabels{"00", "01", "10", "11"};

std::string quantity_axis(thermo::Quantity q) {
    switch (q) {
        case thermo::Quantity::chi_reduced_times_T:
            return "reduced chi T (triplet population)";
        case thermo::Quantity::entropy:
            return "S / k_B";
        case thermo::Quantity::specific_heat:
            return "c / k_B";
        case thermo::Quantity::internal_energy:
            return "U / k_B (K)";
    }
    return "";
}

VqtProblem make_problem(const RunConfig& cfg, double j, double t) {
    VqtProblem p;
    p.model = model::DimerModel{j, cfg.g_factor};
    p.temperature = t;
    p.mode = cfg.mode;
    p.shots.shots_per_term = cfg.shots;
    p.shots.seed = cfg.seed;
    p.layers = cfg.depth;
    p.optimizer.method = cfg.method;
    p.optimizer.max_iterations = cfg.max_iterations;
    p.optimizer.restarts = cfg.restarts;
    p.optimizer.polish_passes = cfg.polish_passes;
    p.optimizer.seed = cfg.seed;
    return p;
}

void write_curve_file(const RunConfig& cfg, const std::string& stem, const thermo::PropertyCurve& c) {
    if (cfg.format == Format::csv) {
        std::ostringstream s;
        io::write_curve(s, c);
        io::write_text(cfg.out_dir / (stem + ".csv"), s.str());
        return;
    }
    io::Json pts = io::Json::array();
    for (const auto& p : c.points) {
        pts.push_back(io::Json{{"T_K", std::strtod(io::format_number(p.temperature).c_str(), nullptr)},
                               {"value", std::strtod(io::format_number(p.value).c_str(), nullptr)}});
    }
    io::Json j{{"quantity", std::string(thermo::quantity_name(c.quantity))},
               {"provenance", std::string(thermo::provenance_name(c.provenance))},
               {"points", std::move(pts)}};
    io::write_text(cfg.out_dir / (stem + ".json"), io::dump_json(j));
}

double single_j(const RunConfig& cfg) {
    if (cfg.j_over_kb.size() != 1) {
        throw ConfigError(cfg.command + " takes exactly one --j-over-kb value");
    }
    return cfg.j_over_kb.front();
}

}  // namespace

std::vector<double> parse_temperatures(const std::string& spec) {
    auto number = [&](const std::string& s) {
        try {
            return io::parse_number(s);
        } catch (const InputError&) {
            throw ConfigError("bad temperature spec '" + spec + "'");
        }
    };
    std::vector<double> out;
    if (spec.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(spec);
        std::string part;
        while (std::getline(ss, part, ':')) {
            parts.push_back(part);
        }
        if (parts.size() < 3 || parts.size() > 4) {
            throw ConfigError("temperature range must be start:stop:n[:log|lin], got '" + spec + "'");
        }
        const double lo = number(parts[0]);
        const double hi = number(parts[1]);
        const double nd = number(parts[2]);
        const bool log = parts.size() == 3 || parts[3] == "log";
        if (parts.size() == 4 && parts[3] != "log" && parts[3] != "lin") {
            throw ConfigError("temperature spacing must be 'log' or 'lin', got '" + parts[3] + "'");
        }
        if (!(nd >= 1.0) || nd != std::floor(nd)) {
            throw ConfigError("temperature count must be a positive integer in '" + spec + "'");
        }
        const auto n = static_cast<std::size_t>(nd);
        if (n == 1) {
            out = {lo};
        } else if (log) {
            out = thermo::log_grid(lo, hi, n);
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
            }
        }
    } else {
        std::stringstream ss(spec);
        std::string part;
        while (std::getline(ss, part, ',')) {
            out.push_back(number(part));
        }
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!(out[i] > 0.0) || !std::isfinite(out[i])) {
            throw ConfigError("temperatures must be positive, got '" + spec + "'");
        }
        if (i > 0 && !(out[i] > out[i - 1])) {
            throw ConfigError("temperatures must strictly increase, got '" + spec + "'");
        }
    }
    if (out.empty()) {
        throw ConfigError("empty temperature spec");
    }
    return out;
}

std::vector<double> default_temperatures() { return thermo::log_grid(5e-4, 350.0, 40); }

void cmd_gibbs(const RunConfig& cfg, std::ostream& log) {
    const double j = single_j(cfg);
    const model::DimerModel m{j, cfg.g_factor};
    const auto temps = cfg.temperatures.empty() ? std::vector<double>{5e-4, 10.0, 20.0, 300.0} : cfg.temperatures;

    const auto h = model::build_hamiltonian(m);
    io::Json hj{{"j_over_kb", j}, {"units", "K"}, {"hamiltonian", io::matrix_json(h.matrix())}};
    io::write_text(cfg.out_dir / "hamiltonian.json", io::dump_json(hj));
    io::write_text(cfg.out_dir / "hamiltonian.svg",
                   plot::heatmap(h.matrix(), "Hamiltonian, J = " + io::format_number(j) + " K", kBasisLabels));

    for (double t : temps) {
        const auto rho = model::gibbs_state(m, t);
        io::Json gj{{"j_over_kb", j},
                    {"temperature", t},
                    {"partition_function", model::partition_function(m, t)},
                    {"log_partition_function", model::log_partition_function(m, t)},
                    {"state", io::matrix_json(rho.matrix())}};
        const std::string stem = "gibbs_" + tag("T", t);
        io::write_text(cfg.out_dir / (stem + ".json"), io::dump_json(gj));
        io::write_text(cfg.out_dir / (stem + ".svg"),
                       plot::heatmap(rho.matrix(),
                                     "Gibbs state, J = " + io::format_number(j) + " K, T = " + io::format_number(t) +
                                         " K",
                                     kBasisLabels));
        log << "T = " << io::format_number(t) << " K  chi~ = " << io::format_number(model::chi_reduced(m, t).value)
            << "  -> " << (cfg.out_dir / (stem + ".json")).string() << '\n';
    }
}

void cmd_thermalize(const RunConfig& cfg, std::ostream& log) {
    const double j = single_j(cfg);
    if (cfg.temperatures.size() > 1) {
        throw ConfigError("thermalize takes a single temperature (--temp)");
    }
    const double t = cfg.temperatures.empty() ? 10.0 : cfg.temperatures.front();
    const VqtProblem prob = make_problem(cfg, j, t);
    const VqtResult r = run_vqt(prob);

    io::write_text(cfg.out_dir / "result.json", io::dump_json(io::vqt_result_json(r, prob)));
    if (cfg.format == Format::csv) {
        std::ostringstream s;
        io::write_trace(s, r.trace);
        io::write_text(cfg.out_dir / "trace.csv", s.str());
    } else {
        io::Json recs = io::Json::array();
        for (const auto& rec : r.trace.records) {
            recs.push_back(io::Json{{"iteration", rec.iteration},
                                    {"cost", std::strtod(io::format_number(rec.cost).c_str(), nullptr)},
                                    {"best_cost", std::strtod(io::format_number(rec.best_cost).c_str(), nullptr)}});
        }
        io::write_text(cfg.out_dir / "trace.json", io::dump_json(io::Json{{"records", std::move(recs)}}));
    }

    plot::Series best{.label = "best cost"};
    plot::Series cost{.label = "cost"};
    cost.markers = true;
    cost.line = false;
    for (const auto& rec : r.trace.records) {
        best.x.push_back(static_cast<double>(rec.iteration));
        best.y.push_back(rec.best_cost);
        // Clip wild exploratory evaluations so the converged region stays visible.
        if (rec.cost <= r.trace.records.front().cost) {
            cost.x.push_back(static_cast<double>(rec.iteration));
            cost.y.push_back(rec.cost);
        }
    }
    plot::Series bound{.label = "-ln Z",
                       .x = {1.0, static_cast<double>(r.trace.records.size())},
                       .y = {-r.log_partition, -r.log_partition}};
    bound.dashed = true;
    plot::Figure fig{.title = "Free-energy cost, J = " + io::format_number(j) + " K, T = " + io::format_number(t) + " K", .x_label = "evaluation", .y_label = "cost", .log_x = false};
    fig.series = {cost, best, bound};
    io::write_text(cfg.out_dir / "cost.svg", plot::render(fig));

    log << "cost = " << io::format_number(r.exact_cost) << "  -ln Z = " << io::format_number(-r.log_partition)
        << "  fidelity = " << io::format_number(r.fidelity_vs_gibbs) << "  evaluations = " << r.trace.evaluations
        << '\n';
}

void cmd_sweep(const RunConfig& cfg, std::ostream& log) {
    if (cfg.j_over_kb.empty()) {
        throw ConfigError("sweep needs at least one --j-over-kb value");
    }
    const auto temps = cfg.temperatures.empty() ? default_temperatures() : cfg.temperatures;
    if (temps.size() < 3) {
        throw ConfigError("sweep needs at least three temperatures");
    }
    const auto dense = thermo::log_grid(temps.front(), temps.back(), 300);
    const thermo::Provenance prov = thermo::provenance_for(cfg.mode);
    const thermo::Quantity quantities[] = {thermo::Quantity::chi_reduced_times_T, thermo::Quantity::entropy,
                                           thermo::Quantity::specific_heat, thermo::Quantity::internal_energy};

    std::vector<plot::Figure> figs;
    for (auto q : quantities) {
        plot::Figure f{.title = std::string(thermo::quantity_name(q)) + " vs temperature", .x_label = "T (K)", .y_label = quantity_axis(q), .log_x = true};
        figs.push_back(f);
    }

    io::Json summary = io::Json::array();
    std::size_t failures = 0;
    for (std::size_t k = 0; k < cfg.j_over_kb.size(); ++k) {
        const double j = cfg.j_over_kb[k];
        const model::DimerModel m{j, cfg.g_factor};
        SweepOptions options;
        options.warm_start = cfg.warm_start;
        const auto sweep = temperature_sweep(m, temps, make_problem(cfg, j, temps.front()), options);

        io::Json points = io::Json::array();
        for (const auto& p : sweep) {
            io::Json pj{{"temperature", std::strtod(io::format_number(p.temperature).c_str(), nullptr)}};
            if (p.result) {
                pj["exact_cost"] = std::strtod(io::format_number(p.result->exact_cost).c_str(), nullptr);
                pj["cost_gap"] =
                    std::strtod(io::format_number(p.result->exact_cost + p.result->log_partition).c_str(), nullptr);
                pj["fidelity_vs_gibbs"] = std::strtod(io::format_number(p.result->fidelity_vs_gibbs).c_str(), nullptr);
            } else {
                pj["error"] = p.error;
                ++failures;
                log << "warning: J = " << io::format_number(j) << " K, T = " << io::format_number(p.temperature)
                    << " K failed: " << p.error << '\n';
            }
            points.push_back(std::move(pj));
        }
        summary.push_back(io::Json{{"j_over_kb", j}, {"points", std::move(points)}});

        const std::string colour = plot::palette(k);
        for (std::size_t qi = 0; qi < std::size(quantities); ++qi) {
            const auto q = quantities[qi];
            const auto curve = thermo::curve_from_sweep(sweep, m, q, prov);
            write_curve_file(cfg, std::string(thermo::quantity_name(q)) + "_" + tag("J", j), curve);

            plot::Series vqt_series{.label = "J = " + io::format_number(j) + " K (" + std::string(thermo::provenance_name(prov)) + ")"};
            vqt_series.markers = true;
            vqt_series.line = false;
            vqt_series.colour = colour;
            for (const auto& p : curve.points) {
                vqt_series.x.push_back(p.temperature);
                vqt_series.y.push_back(p.value);
            }
            const auto exact = thermo::analytic_curve(m, q, dense);
            plot::Series analytic{.label = "J = " + io::format_number(j) + " K analytic"};
            analytic.dashed = true;
            analytic.colour = colour;
            for (const auto& p : exact.points) {
                analytic.x.push_back(p.temperature);
                analytic.y.push_back(p.value);
            }
            figs[qi].series.push_back(std::move(vqt_series));
            figs[qi].series.push_back(std::move(analytic));
        }
        log << "J = " << io::format_number(j) << " K: " << sweep.size() << " points\n";
    }
    for (std::size_t qi = 0; qi < std::size(quantities); ++qi) {
        io::write_text(cfg.out_dir / (std::string(thermo::quantity_name(quantities[qi])) + ".svg"),
                       plot::render(figs[qi]));
    }
    io::write_text(cfg.out_dir / "sweep.json",
                   io::dump_json(io::Json{{"mode", std::string(estimator::mode_name(cfg.mode))},
                                          {"seed", cfg.seed},
                                          {"failures", failures},
                                          {"couplings", std::move(summary)}}));
}

void cmd_fit(const RunConfig& cfg, std::ostream& log) {
    if (cfg.dataset.empty()) {
        throw ConfigError("fit needs --data <csv>");
    }
    const auto data = io::read_dataset_file(cfg.dataset);
    thermo::FitConfig fc;
    fc.j_min = cfg.j_min;
    fc.j_max = cfg.j_max;
    fc.scan_points = cfg.scan_points;
    fc.g_factor = cfg.g_factor;
    fc.vqt = make_problem(cfg, 1.0, 1.0);
    const auto r = thermo::fit_coupling(data, cfg.engine, fc);

    io::write_text(cfg.out_dir / "fit.json", io::dump_json(io::fit_result_json(r, data)));

    plot::Series pts{.label = "data"};
    pts.markers = true;
    pts.line = false;
    for (const auto& rec : data.records) {
        pts.x.push_back(rec.temperature);
        pts.y.push_back(rec.value);
    }
    const auto dense = thermo::log_grid(data.records.front().temperature, data.records.back().temperature, 300);
    const auto best = thermo::analytic_curve(model::DimerModel{r.j_over_kb, cfg.g_factor}, data.quantity, dense);
    plot::Series analytic{.label = "analytic, J = " + io::format_number(r.j_over_kb) + " K"};
    analytic.dashed = true;
    for (const auto& p : best.points) {
        analytic.x.push_back(p.temperature);
        analytic.y.push_back(p.value);
    }
    plot::Figure fig{.title = "Fit (" + std::string(thermo::engine_name(r.engine)) + " engine)", .x_label = "T (K)", .y_label = quantity_axis(data.quantity), .log_x = true};
    fig.series = {pts, analytic};
    if (r.engine == thermo::FitEngine::vqt) {
        plot::Series model_pts{.label = "VQT model"};
        for (const auto& p : r.curve.points) {
            model_pts.x.push_back(p.temperature);
            model_pts.y.push_back(p.value);
        }
        fig.series.push_back(std::move(model_pts));
    }
    io::write_text(cfg.out_dir / "fit.svg", plot::render(fig));

    log << "J = " << io::format_number(r.j_over_kb) << " K  residual = " << io::format_number(r.residual) << "  ("
        << data.records.size() << " records, engine " << thermo::engine_name(r.engine) << ")\n";
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Variational quantum thermalizer for the Heisenberg spin-1/2 dimer"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML/INI config file; command-line flags take precedence");

    RunConfig cfg;
    std::optional<double> temp;
    std::string temps_spec;
    std::string mode = "exact";
    std::string method = "linear_approx";
    std::string format = "csv";
    std::string engine = "analytic";
    std::string out_dir = "out";
    std::string dataset;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--j-over-kb", cfg.j_over_kb, "Exchange coupling J/k_B in K")->delimiter(',');
        sub->add_option("--g-factor", cfg.g_factor, "Lande g factor");
        auto* t1 = sub->add_option("--temp", temp, "Single temperature in K");
        auto* t2 = sub->add_option("--temps", temps_spec, "start:stop:n[:log|lin] or comma list");
        t1->excludes(t2);
        sub->add_option("--out", out_dir, "Output directory");
        sub->add_option("--format", format, "Tabular output format")->check(CLI::IsMember({"csv", "json"}));
    };
    auto add_vqt = [&](CLI::App* sub) {
        sub->add_option("--mode", mode, "Energy estimator")->check(CLI::IsMember({"exact", "shots", "noisy"}));
        sub->add_option("--shots", cfg.shots, "Shots per Pauli term")->check(CLI::PositiveNumber);
        sub->add_option("--seed", cfg.seed, "Random seed")->envname("VQT_SEED");
        sub->add_option("--depth", cfg.depth, "Circuit layers")->check(CLI::PositiveNumber);
        sub->add_option("--max-iter", cfg.max_iterations, "Objective evaluations per start")
            ->check(CLI::PositiveNumber);
        sub->add_option("--restarts", cfg.restarts, "Random starts")->check(CLI::PositiveNumber);
        sub->add_option("--polish", cfg.polish_passes, "Simplex passes from the incumbent");
        sub->add_option("--optimizer", method, "linear_approx (cobyla) or simplex (nelder_mead)");
    };

    auto* gibbs = app.add_subcommand("gibbs", "Exact Gibbs state and Hamiltonian matrices");
    add_common(gibbs);
    auto* thermalize = app.add_subcommand("thermalize", "One VQT optimization at a single (J, T)");
    add_common(thermalize);
    add_vqt(thermalize);
    auto* sweep = app.add_subcommand("sweep", "VQT property curves over a temperature grid");
    add_common(sweep);
    add_vqt(sweep);
    sweep->add_flag("--warm-start", cfg.warm_start, "Seed each temperature from the previous optimum");
    auto* fit = app.add_subcommand("fit", "Fit J to a dataset");
    add_common(fit);
    add_vqt(fit);
    fit->add_option("--data", dataset, "Dataset CSV (T_K,value[,sigma])")->required();
    fit->add_option("--engine", engine, "Model engine")->check(CLI::IsMember({"analytic", "vqt"}));
    fit->add_option("--j-min", cfg.j_min, "Lower end of the J scan (K)");
    fit->add_option("--j-max", cfg.j_max, "Upper end of the J scan (K)");
    fit->add_option("--scan-points", cfg.scan_points, "Points in the bracketing scan");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        cfg.command = app.get_subcommands().front()->get_name();
        const CLI::App* sub = app.get_subcommands().front();
        cfg.mode = estimator::parse_mode(mode);
        cfg.method = opt::parse_method(method);
        cfg.format = format == "json" ? Format::json : Format::csv;
        cfg.engine = thermo::parse_engine(engine);
        cfg.out_dir = out_dir;
        cfg.dataset = dataset;
        if (temp) {
            cfg.temperatures = {*temp};
            if (!(*temp > 0.0)) {
                throw ConfigError("--temp must be positive");
            }
        } else if (!temps_spec.empty()) {
            cfg.temperatures = parse_temperatures(temps_spec);
        }
        if (cfg.mode == estimator::Mode::exact && sub->get_option_no_throw("--shots") != nullptr &&
            sub->count("--shots") > 0) {
            throw ConfigError("--shots only applies to --mode shots or noisy");
        }
        if (cfg.command == "thermalize" && !temps_spec.empty()) {
            throw ConfigError("thermalize takes --temp, not --temps");
        }
    } catch (const std::exception& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (cfg.command == "gibbs") {
            cmd_gibbs(cfg, out);
        } else if (cfg.command == "thermalize") {
            cmd_thermalize(cfg, out);
        } else if (cfg.command == "sweep") {
            cmd_sweep(cfg, out);
        } else {
            cmd_fit(cfg, out);
        }
    } catch (const ConfigError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace vqt::cli
