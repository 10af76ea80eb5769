#include "dispatch.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>

#include <CLI11.hpp>

#include "affvol/errors.hpp"
#include "affvol/pastform.hpp"
#include "affvol/resolvent.hpp"
#include "affvol/riccati.hpp"
#include "affvol/simulate.hpp"
#include "affvol/verify.hpp"
#include "config.hpp"
#include "csv.hpp"

namespace affvol::cli {
namespace {

namespace fs = std::filesystem;

struct Invocation {
    std::string command;
    std::string config_path;
    std::vector<std::string> overrides;
    std::string output_dir;
    std::size_t workers = 0;
    bool print_config = false;
};

fs::path output_directory(const RunConfig& cfg, const Invocation& inv) {
    fs::path dir = ".";
    if (const char* env = std::getenv("AFFVOL_OUTPUT_DIR"); env && *env) dir = env;
    if (!cfg.output_dir.empty()) dir = cfg.output_dir;
    if (!inv.output_dir.empty()) dir = inv.output_dir;
    fs::create_directories(dir);
    return dir;
}

std::string describe(complex z) { return format_number(z.real()) + (z.imag() < 0 ? "" : "+") + format_number(z.imag()) + "i"; }

int run_riccati(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
    const Grid g = build_grid(cfg);
    const ModelSpec m = build_model(cfg);
    const TestFunction f = build_test_function(cfg, g);
    const auto sol = solve_riccati(m, f);
    const auto env = envelope_bounds(m, f);
    CsvWriter csv(dir / "riccati.csv", "t,re_psi,im_psi,psi_bar,re_phi,im_phi,l,u");
    for (std::size_t i = 0; i < g.size(); ++i) {
        csv.row(g.node(i), sol.psi[i].real(), sol.psi[i].imag(), sol.psi_bar[i], sol.phi[i].real(), sol.phi[i].imag(),
                env.lower[i], env.upper[i]);
    }
    const auto g0 = m.g0.sample(m.kernel, g);
    out << "v0 " << describe(v0(sol, g0)) << "\n";
    out << "v0_bar " << format_number(v0_bar(sol, g0)) << "\n";
    out << "corrector_iterations_max " << sol.psi_diagnostics.max_iterations << "\n";
    return exit_ok;
}

int run_resolvent(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
    const Grid g = build_grid(cfg);
    const ModelSpec m = build_model(cfg);
    const auto l = resolvent_first_kind(m.kernel, g, build_resolvent_method(cfg));
    CsvWriter csv(dir / "resolvent.csv", "t,density,atom_flag");
    csv.row(0.0, l.atom, 1);
    const auto density = l.density();
    for (std::size_t j = 0; j < density.size(); ++j) csv.row(g.node(j), density[j], 0);
    const auto id = resolvent_identity(m.kernel, l);
    double worst = 0.0;
    for (std::size_t i = 1; i < id.size(); ++i) worst = std::max(worst, std::abs(id[i] - 1.0));
    out << "source " << to_string(l.source) << "\n";
    out << "identity_residual " << format_number(worst) << " tolerance "
        << format_number(cfg.tolerances.resolvent_identity) << "\n";
    return worst <= cfg.tolerances.resolvent_identity ? exit_ok : exit_property_failure;
}

void write_forward_mean(const fs::path& path, const std::vector<ForwardMeanPoint>& points) {
    CsvWriter csv(path, "t,mc_mean,mc_std_error,formula");
    for (const auto& p : points) csv.row(p.t, p.mc_mean, p.mc_std_error, p.formula);
}

int run_simulate(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
    const Grid g = build_grid(cfg);
    const ModelSpec m = build_model(cfg);
    const McOptions mc = build_mc_options(cfg);
    const auto e = simulate_paths(m, g, mc.paths, mc.seed, mc.workers);
    {
        CsvWriter csv(dir / "paths.csv", "path,t,x,x_raw,dz_drift,dz_diff,dz_jump");
        const std::size_t n = g.steps();
        for (std::size_t p = 0; p < e.paths; ++p) {
            for (std::size_t i = 0; i < n; ++i) {
                csv.row(p, g.node(i), e.x(p, i), e.x_raw(p, i), e.dz_drift(p, i), e.dz_diff(p, i), e.dz_jump(p, i));
            }
            csv.row(p, g.node(n), e.x(p, n), e.x_raw(p, n), "", "", "");
        }
    }
    const auto formula = forward_mean_curve(m, g);
    std::vector<ForwardMeanPoint> points;
    const double count = static_cast<double>(e.paths);
    for (std::size_t i = 0; i < g.size(); ++i) {
        double sum = 0.0, sq = 0.0;
        for (std::size_t p = 0; p < e.paths; ++p) {
            sum += e.x(p, i);
            sq += e.x(p, i) * e.x(p, i);
        }
        const double mean = sum / count;
        const double var = e.paths > 1 ? std::max(0.0, (sq - count * mean * mean) / (count - 1.0)) : 0.0;
        points.push_back({g.node(i), mean, std::sqrt(var / count), formula[i]});
    }
    write_forward_mean(dir / "forward_mean.csv", points);
    out << "paths " << e.paths << "\n";
    out << "clipped_fraction " << format_number(e.clipped_fraction()) << "\n";
    return exit_ok;
}

int run_transform(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
    const Grid g = build_grid(cfg);
    const ModelSpec m = build_model(cfg);
    const auto fs_list = build_transform_functions(cfg, g);
    const auto report = mc_transform(m, fs_list, build_mc_options(cfg));
    {
        CsvWriter csv(dir / "transform_summary.csv",
                      "case,f_re,f_im,theory_re,theory_im,estimate_re,estimate_im,std_error,gap,tolerance,status");
        for (std::size_t k = 0; k < report.cases.size(); ++k) {
            const auto& c = report.cases[k];
            csv.row(k, fs_list[k][0].real(), fs_list[k][0].imag(), c.theory.real(), c.theory.imag(), c.estimate.real(),
                    c.estimate.imag(), c.std_error, c.gap, c.tolerance, c.passed ? "pass" : "fail");
        }
    }
    {
        CsvWriter csv(dir / "flatness.csv", "case,system,t,mean_re,mean_im,std_error,reference_re,reference_im,gap,tolerance,status");
        for (std::size_t k = 0; k < report.cases.size(); ++k) {
            for (int bar = 0; bar < 2; ++bar) {
                for (const auto& p : bar ? report.cases[k].flatness_bar : report.cases[k].flatness) {
                    csv.row(k, bar ? "real" : "complex", p.t, p.mean.real(), p.mean.imag(), p.std_error,
                            p.reference.real(), p.reference.imag(), p.gap, p.tolerance, p.passed ? "pass" : "fail");
                }
            }
        }
    }
    write_forward_mean(dir / "forward_mean.csv", report.forward_mean);
    for (std::size_t k = 0; k < report.cases.size(); ++k) {
        const auto& c = report.cases[k];
        out << "case " << k << " theory " << describe(c.theory) << " estimate " << describe(c.estimate) << " gap "
            << format_number(c.gap) << " tolerance " << format_number(c.tolerance) << (c.passed ? " pass" : " fail")
            << "\n";
    }
    out << "terminal_mean gap " << format_number(report.terminal_mean_gap) << " tolerance "
        << format_number(report.terminal_mean_tolerance) << (report.terminal_mean_passed ? " pass" : " fail") << "\n";
    out << "clipped_fraction " << format_number(report.clipped_fraction) << "\n";
    return report.passed() ? exit_ok : exit_property_failure;
}

int run_pastcheck(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
    const Grid g = build_grid(cfg);
    const ModelSpec m = build_model(cfg);
    const TestFunction f = build_test_function(cfg, g);
    const McOptions mc = build_mc_options(cfg);
    const auto paths = simulate_paths(m, g, cfg.mc_past_paths, mc.seed, mc.workers);
    const auto report = past_check(m, f, paths, mc.checkpoint_fractions, cfg.tolerances.bound);
    CsvWriter csv(dir / "pastcheck.csv", "t,re_v,im_v,v_bar,abs_exp_v,c_exp_v_bar");
    for (const auto& r : report.rows) csv.row(r.t, r.v.real(), r.v.imag(), r.v_bar, r.abs_exp_v, r.c_exp_v_bar);

    const bool two_ok = report.max_two_formula_gap <= cfg.tolerances.two_formula;
    const bool gap_ok = report.max_gap_monotonicity_violation <= cfg.tolerances.gap_monotone;
    const bool bound_ok = m.has_constant_terms() || report.bound.passed;
    out << "two_formula_gap " << format_number(report.max_two_formula_gap) << (two_ok ? " pass" : " fail") << "\n";
    out << "gap_monotonicity_violation " << format_number(report.max_gap_monotonicity_violation)
        << (gap_ok ? " pass" : " fail") << "\n";
    out << "bound C " << format_number(report.bound.constant.c) << " worst_log_ratio "
        << format_number(report.bound.worst_log_ratio) << " violations " << report.bound.violations
        << (m.has_constant_terms() ? " skipped" : (bound_ok ? " pass" : " fail")) << "\n";
    return two_ok && gap_ok && bound_ok ? exit_ok : exit_property_failure;
}

int run_verify(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
    const auto reports = run_suite(build_suite(cfg));
    CsvWriter csv(dir / "report.csv", "claim,status,magnitude,tolerance,runtime_s");
    for (const auto& r : reports) {
        const double runtime = cfg.output_timing ? r.runtime_s : 0.0;
        csv.row(r.claim, to_string(r.status), r.magnitude, r.tolerance, runtime);
        out << r.claim << ' ' << to_string(r.status) << " magnitude=" << format_number(r.magnitude)
            << " tolerance=" << format_number(r.tolerance);
        if (cfg.output_timing) out << " runtime_s=" << format_number(runtime);
        if (!r.detail.empty()) out << ' ' << r.detail;
        out << '\n';
    }
    return all_passed(reports) ? exit_ok : exit_property_failure;
}

int run(const Invocation& inv, std::ostream& out) {
    RunConfig cfg = parse_config(inv.config_path, inv.overrides);
    if (inv.workers > 0) cfg.mc_workers = inv.workers;
    validate(cfg);
    if (inv.print_config) {
        out << serialize(cfg);
        return exit_ok;
    }
    const fs::path dir = output_directory(cfg, inv);
    if (inv.command == "riccati") return run_riccati(cfg, dir, out);
    if (inv.command == "resolvent") return run_resolvent(cfg, dir, out);
    if (inv.command == "simulate") return run_simulate(cfg, dir, out);
    if (inv.command == "transform") return run_transform(cfg, dir, out);
    if (inv.command == "pastcheck") return run_pastcheck(cfg, dir, out);
    return run_verify(cfg, dir, out);
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Affine Volterra transform toolkit", "affvol"};
    app.require_subcommand(1);
    Invocation inv;
    const std::pair<const char*, const char*> commands[] = {
        {"riccati", "solve psi, psi_bar, phi and the envelopes; writes riccati.csv"},
        {"resolvent", "first-kind resolvent of the kernel; writes resolvent.csv"},
        {"simulate", "simulate paths; writes paths.csv and forward_mean.csv"},
        {"transform", "Monte Carlo transform and flatness; writes transform_summary.csv, flatness.csv, forward_mean.csv"},
        {"pastcheck", "past-form exponent, two-formula check and bound; writes pastcheck.csv"},
        {"verify", "run the property suite; writes report.csv"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("config", inv.config_path, "config file (key = value lines)")->required();
        sub->add_option("--set", inv.overrides, "override a config key, key=value")->take_all();
        sub->add_option("--output-dir", inv.output_dir, "output directory (beats output.dir and AFFVOL_OUTPUT_DIR)");
        sub->add_option("--workers", inv.workers, "worker threads; never changes results")->check(CLI::PositiveNumber);
        sub->add_flag("--print-config", inv.print_config, "print the normalized config and exit");
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        err << app.help();
        return exit_invalid;
    }
    inv.command = app.get_subcommands().front()->get_name();

    try {
        return run(inv, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return exit_invalid;
    } catch (const DomainError& e) {
        err << "invalid parameter: " << e.what() << "\n";
        return exit_invalid;
    } catch (const CapabilityError& e) {
        err << "unsupported: " << e.what() << "\n";
        return exit_invalid;
    } catch (const ContractError& e) {
        err << "invalid request: " << e.what() << "\n";
        return exit_invalid;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return exit_internal;
    }
}

}  // namespace affvol::cli
