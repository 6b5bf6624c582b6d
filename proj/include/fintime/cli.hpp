#pragma once

// Command-line front end: simulation, certification, differentiation and
// table reproduction. Exit codes: 0 ok, 2 usage, 3 numerical blow-up,
// 4 infeasible design, 5 failed table gate.

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fintime/bench.hpp"
#include "fintime/errors.hpp"
#include "fintime/estimate.hpp"
#include "fintime/laws.hpp"
#include "fintime/report.hpp"
#include "fintime/signal.hpp"
#include "fintime/simulate.hpp"
#include "fintime/svg.hpp"
#include "fintime/version.hpp"

namespace fintime::cli {

namespace detail {

inline Vec split_doubles(const std::string& text, const std::string& what) {
    Vec out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ValidationError(what + ": cannot parse '" + item + "' as a number");
        }
    }
    if (out.empty()) throw ValidationError(what + ": empty list");
    return out;
}

inline Signal parse_signal(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw ValidationError("--signal: expected poly:c0,c1,... | sin:amp,omega[,phase] | const:c");
    const std::string kind = text.substr(0, colon);
    const std::string rest = text.substr(colon + 1);
    if (kind == "poly") return Signal::polynomial(split_doubles(rest, "--signal poly"));
    if (kind == "sin") {
        const Vec v = split_doubles(rest, "--signal sin");
        if (v.size() < 2 || v.size() > 3)
            throw ValidationError("--signal sin: expected amp,omega[,phase]");
        return Signal::sinusoid(v[0], v[1], v.size() == 3 ? v[2] : 0.0);
    }
    if (kind == "const") {
        const Vec v = split_doubles(rest, "--signal const");
        if (v.size() != 1) throw ValidationError("--signal const: expected a single value");
        return Signal::constant(v[0]);
    }
    throw ValidationError("--signal: unknown kind '" + kind + "'");
}

inline Method parse_method(const std::string& name) {
    if (name == "rk4") return Method::rk4;
    if (name == "euler") return Method::euler;
    throw ValidationError("--method: expected rk4 or euler");
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open output file: " + path);
    f << text;
    if (!f) throw Error("failed writing output file: " + path);
}

inline void write_plots(const std::string& dir, const Trajectory& traj,
                        const std::string& prefix) {
    std::filesystem::create_directories(dir);
    const std::size_t n = traj.states.empty() ? 0 : traj.states.front().size();
    for (std::size_t i = 0; i < n; ++i) {
        Vec series(traj.size());
        for (std::size_t r = 0; r < traj.size(); ++r) series[r] = traj.states[r][i];
        const std::string name = prefix + std::to_string(i + 1);
        std::ofstream f(dir + "/" + name + ".svg", std::ios::binary);
        if (!f) throw Error("cannot open plot file in " + dir);
        write_timeseries_svg(f, traj.times, series, name);
    }
    if (traj.has_inputs()) {
        std::ofstream f(dir + "/u.svg", std::ios::binary);
        if (!f) throw Error("cannot open plot file in " + dir);
        write_timeseries_svg(f, traj.times, traj.inputs, "u");
    }
}

/// Expands a --config JSON file into flag tokens inserted right after the
/// subcommand name, so explicitly passed flags override the file (take-last).
/// Unknown keys are rejected.
inline std::vector<std::string> expand_config_file(std::vector<std::string> args,
                                                   const CLI::App& root) {
    if (args.empty()) return args;
    const CLI::App* sub = nullptr;
    for (const auto* s : root.get_subcommands(nullptr))
        if (s->get_name() == args.front()) sub = s;
    if (!sub) return args;

    std::string path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return args;

    std::ifstream f(path);
    if (!f) throw ValidationError("--config: cannot open " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("--config: invalid JSON: " + std::string(e.what()));
    }
    if (!j.is_object()) throw ValidationError("--config: top level must be a JSON object");

    std::vector<std::string> injected;
    for (const auto& [key, value] : j.items()) {
        if (key == "config" || !const_cast<CLI::App*>(sub)->get_option_no_throw("--" + key))
            throw ValidationError("--config: unknown key '" + key + "' for subcommand " +
                                  sub->get_name());
        std::string text;
        if (value.is_string()) text = value.get<std::string>();
        else if (value.is_boolean()) text = value.get<bool>() ? "true" : "false";
        else if (value.is_number()) text = format_double(value.get<double>());
        else if (value.is_array()) {
            for (std::size_t i = 0; i < value.size(); ++i)
                text += (i ? "," : "") + format_double(value[i].get<double>());
        } else {
            throw ValidationError("--config: unsupported value type for key '" + key + "'");
        }
        injected.push_back("--" + key);
        injected.push_back(text);
    }
    args.insert(args.begin() + 1, injected.begin(), injected.end());
    return args;
}

}  // namespace detail

/// Runs the CLI on the given arguments (without the program name). All output
/// goes to the provided streams; returns the process exit code.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"finite- and fixed-time convergence toolkit", "fintime"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolkitVersion));

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "integrator chain under the finite-time law");
    sim_cmd->option_defaults()->take_last();
    std::size_t sim_n = 2;
    double sim_x0 = 1.0, sim_gamma = 10.0 / 11.0, sim_mu = 1.0, sim_step = 1e-4;
    double sim_eps = 1e-6, sim_dwell = 1.0, sim_tmax = -1.0;
    std::size_t sim_stride = 10;
    std::string sim_method = "rk4", sim_out, sim_plot, sim_config;
    sim_cmd->add_option("--n", sim_n, "chain dimension")->capture_default_str();
    sim_cmd->add_option("--x0", sim_x0, "initial scale; every coordinate starts there")
        ->capture_default_str();
    sim_cmd->add_option("--gamma", sim_gamma, "exponent ladder seed")->capture_default_str();
    sim_cmd->add_option("--mu", sim_mu, "pole location of the binomial gain assignment")
        ->capture_default_str();
    sim_cmd->add_option("--step", sim_step, "integration step (s)")->capture_default_str();
    sim_cmd->add_option("--method", sim_method, "rk4 or euler")->capture_default_str();
    sim_cmd->add_option("--eps", sim_eps, "settling threshold (state max-norm)")
        ->capture_default_str();
    sim_cmd->add_option("--dwell", sim_dwell, "seconds the norm must stay below eps")
        ->capture_default_str();
    sim_cmd->add_option("--tmax", sim_tmax, "horizon (s); defaults to 300 for n<=3, 600 above")
        ->capture_default_str();
    sim_cmd->add_option("--stride", sim_stride, "record every k-th step")->capture_default_str();
    sim_cmd->add_option("--out", sim_out, "trajectory CSV path");
    sim_cmd->add_option("--plot", sim_plot, "directory for SVG plots");
    sim_cmd->add_option("--config", sim_config, "JSON config file (flags override it)");

    // certify
    auto* cert_cmd = app.add_subcommand("certify", "Lyapunov certificate and margins");
    cert_cmd->option_defaults()->take_last();
    std::size_t cert_n = 2;
    double cert_mu = 1.0;
    std::string cert_k, cert_out, cert_config;
    cert_cmd->add_option("--n", cert_n, "dimension (used with --mu)")->capture_default_str();
    auto* cert_mu_opt =
        cert_cmd->add_option("--mu", cert_mu, "binomial gain assignment at this pole");
    cert_mu_opt->capture_default_str();
    auto* cert_k_opt = cert_cmd->add_option("--k", cert_k, "explicit gains k1,k2,...");
    cert_cmd->add_option("--out", cert_out, "write the JSON report here instead of stdout");
    cert_cmd->add_option("--config", cert_config, "JSON config file (flags override it)");

    // differentiate
    auto* diff_cmd = app.add_subcommand("differentiate", "track a signal's derivatives");
    diff_cmd->option_defaults()->take_last();
    std::size_t diff_n = 2;
    double diff_lambda = 0.0, diff_alpha = 0.9, diff_beta = 1.1, diff_step = 1e-4;
    double diff_tmax = 30.0, diff_tail = 0.2;
    std::size_t diff_stride = 1;
    std::string diff_signal = "sin:1,1", diff_variant = "basic", diff_method = "rk4";
    std::string diff_k, diff_kappa, diff_z0, diff_out, diff_plot, diff_config;
    diff_cmd->add_option("--signal", diff_signal, "poly:c0,c1,... | sin:amp,omega[,phase] | const:c")
        ->capture_default_str();
    diff_cmd->add_option("--n", diff_n, "differentiation order")->capture_default_str();
    diff_cmd->add_option("--variant", diff_variant, "basic, modified or smooth")
        ->capture_default_str();
    diff_cmd->add_option("--lambda", diff_lambda, "relay gain (0 for basic)")
        ->capture_default_str();
    diff_cmd->add_option("--alpha", diff_alpha, "finite-time exponent seed")->capture_default_str();
    diff_cmd->add_option("--beta", diff_beta, "fixed-time exponent seed")->capture_default_str();
    diff_cmd->add_option("--k", diff_k, "gains k1,...; default binomial at mu=1");
    diff_cmd->add_option("--kappa", diff_kappa, "gains kappa1,...; zeros disable the beta branch");
    diff_cmd->add_option("--z0", diff_z0, "initial observer state; default zeros");
    diff_cmd->add_option("--step", diff_step, "integration step (s)")->capture_default_str();
    diff_cmd->add_option("--method", diff_method, "rk4 or euler")->capture_default_str();
    diff_cmd->add_option("--tmax", diff_tmax, "horizon (s)")->capture_default_str();
    diff_cmd->add_option("--tail", diff_tail, "trailing fraction used for the error sup")
        ->capture_default_str();
    diff_cmd->add_option("--stride", diff_stride, "record every k-th step")->capture_default_str();
    diff_cmd->add_option("--out", diff_out, "trajectory CSV path");
    diff_cmd->add_option("--plot", diff_plot, "directory for SVG plots");
    diff_cmd->add_option("--config", diff_config, "JSON config file (flags override it)");

    // table
    auto* table_cmd = app.add_subcommand("table", "reproduce the reference convergence-time grid");
    table_cmd->option_defaults()->take_last();
    double tbl_tolerance = 0.2, tbl_step = 1e-4, tbl_eps = 1e-6, tbl_dwell = 1.0;
    unsigned tbl_jobs = 1;
    std::size_t tbl_stride = 1000;
    std::string tbl_format = "md", tbl_method = "rk4", tbl_out, tbl_config;
    table_cmd->add_option("--format", tbl_format, "csv, md or json")->capture_default_str();
    table_cmd->add_option("--tolerance", tbl_tolerance, "relative closeness gate")
        ->capture_default_str();
    table_cmd->add_option("--jobs", tbl_jobs, "worker threads (never changes output bytes)")
        ->capture_default_str();
    table_cmd->add_option("--step", tbl_step, "integration step (s)")->capture_default_str();
    table_cmd->add_option("--method", tbl_method, "rk4 or euler")->capture_default_str();
    table_cmd->add_option("--eps", tbl_eps, "settling threshold")->capture_default_str();
    table_cmd->add_option("--dwell", tbl_dwell, "dwell window (s)")->capture_default_str();
    table_cmd->add_option("--stride", tbl_stride, "record every k-th step")->capture_default_str();
    table_cmd->add_option("--out", tbl_out, "write the report here instead of stdout");
    table_cmd->add_option("--config", tbl_config, "JSON config file (flags override it)");

    try {
        args = detail::expand_config_file(std::move(args), app);
        // CLI11 parses tokens back to front.
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*sim_cmd) {
            SimConfig cfg{sim_step, detail::parse_method(sim_method),
                          sim_tmax > 0.0 ? sim_tmax : default_t_max(sim_n), sim_stride};
            const auto run = simulate_closed_loop(sim_n, sim_x0, sim_gamma, GainScheme{.mu = sim_mu},
                                                  cfg, ConvergenceCriterion{sim_eps, sim_dwell});
            if (!sim_out.empty()) {
                std::ostringstream csv;
                write_trajectory_csv(csv, run.trajectory, "x");
                detail::write_text_file(sim_out, csv.str());
            }
            if (!sim_plot.empty()) detail::write_plots(sim_plot, run.trajectory, "x");
            if (run.report.converged)
                out << "t_conv=" << format_double(run.report.t_conv) << "\n";
            else
                out << "not converged\n";
            return 0;
        }

        if (*cert_cmd) {
            if (*cert_k_opt && *cert_mu_opt)
                throw ValidationError("certify: pass either --mu or --k, not both");
            std::optional<double> mu;
            GainVector gains{1.0};
            if (*cert_k_opt) {
                gains = GainVector(detail::split_doubles(cert_k, "--k"));
            } else {
                mu = cert_mu;
                gains = binomial_gains(cert_n, cert_mu);
            }
            const auto a = companion_from_gains(gains);
            const auto q = SymmetricMatrix::identity(gains.size());
            const auto cert = make_certificate(a, q);

            nlohmann::json j;
            j["gains"] = gains.values();
            j["mu"] = mu ? nlohmann::json(*mu) : nlohmann::json(nullptr);
            j["a"] = matrix_json(cert.a);
            j["q"] = matrix_json(cert.q);
            j["p"] = matrix_json(cert.p);
            j["lambda_min_p"] = cert.lambda_min_p;
            j["lambda_max_p"] = cert.lambda_max_p;
            j["lambda_min_q"] = cert.lambda_min_q;
            j["residual_norm"] = cert.residual_norm;
            j["mu_margin"] = mu ? nlohmann::json(mu_margin(*mu, cert)) : nlohmann::json(nullptr);
            if (gains.size() == 2) {
                try {
                    j["fixed_time_margin"] = fixed_time_margin(gains[0], gains[1], cert);
                } catch (const DesignError& e) {
                    j["fixed_time_margin"] = nullptr;
                    j["fixed_time_margin_note"] = e.what();
                }
            } else {
                j["fixed_time_margin"] = nullptr;
                j["fixed_time_margin_note"] = "defined for 2-dimensional gain sets only";
            }
            const std::string text = j.dump(2) + "\n";
            if (!cert_out.empty()) detail::write_text_file(cert_out, text);
            else out << text;
            return 0;
        }

        if (*diff_cmd) {
            DiffVariant variant;
            if (diff_variant == "basic") variant = DiffVariant::basic;
            else if (diff_variant == "modified") variant = DiffVariant::modified;
            else if (diff_variant == "smooth") variant = DiffVariant::smooth;
            else throw ValidationError("--variant: expected basic, modified or smooth");

            std::optional<Vec> k, kappa;
            if (!diff_k.empty()) k = detail::split_doubles(diff_k, "--k");
            if (!diff_kappa.empty()) kappa = detail::split_doubles(diff_kappa, "--kappa");
            const auto dcfg = DifferentiatorConfig::make(diff_n, variant, diff_lambda, diff_alpha,
                                                         diff_beta, std::move(k), std::move(kappa));
            const Signal signal = detail::parse_signal(diff_signal);
            Vec z0(dcfg.state_dim(), 0.0);
            if (!diff_z0.empty()) {
                z0 = detail::split_doubles(diff_z0, "--z0");
                if (z0.size() != dcfg.state_dim())
                    throw ValidationError("--z0: expected " + std::to_string(dcfg.state_dim()) +
                                          " values for this variant");
            }
            SimConfig cfg{diff_step, detail::parse_method(diff_method), diff_tmax, diff_stride};
            const auto run = simulate_differentiator(signal, z0, dcfg, cfg, diff_tail);
            if (!diff_out.empty()) {
                std::ostringstream csv;
                write_trajectory_csv(csv, run.trajectory, "z");
                detail::write_text_file(diff_out, csv.str());
            }
            if (!diff_plot.empty()) detail::write_plots(diff_plot, run.trajectory, "z");
            for (std::size_t i = 0; i < run.tail_errors.size(); ++i)
                out << "z" << (i + 1) << " tail error vs y^(" << i
                    << ") = " << format_double(run.tail_errors[i]) << "\n";
            return 0;
        }

        if (*table_cmd) {
            if (tbl_format != "csv" && tbl_format != "md" && tbl_format != "json")
                throw ValidationError("--format: expected csv, md or json");
            BenchOptions opt;
            opt.step_h = tbl_step;
            opt.method = detail::parse_method(tbl_method);
            opt.criterion = ConvergenceCriterion{tbl_eps, tbl_dwell};
            opt.tolerance = tbl_tolerance;
            opt.jobs = tbl_jobs;
            opt.record_stride = tbl_stride;
            const ReportBundle bundle = run_reference_tables(opt);
            std::string text;
            if (tbl_format == "csv") text = emit_csv(bundle);
            else if (tbl_format == "md") text = emit_markdown(bundle);
            else text = emit_json(bundle);
            if (!tbl_out.empty()) detail::write_text_file(tbl_out, text);
            else out << text;
            return bundle_all_pass(bundle) ? 0 : 5;
        }
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const BlowUpError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const NumericalError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const DesignError& e) {
        err << "error: " << e.what() << "\n";
        return 4;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace fintime::cli
