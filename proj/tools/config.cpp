#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <boost/program_options.hpp>

#include "affvol/errors.hpp"

namespace po = boost::program_options;

namespace affvol::cli {
namespace {

po::options_description options_for(RunConfig& c) {
    po::options_description d("config");
    auto& t = c.tolerances;
    // clang-format off
    d.add_options()
        ("kernel.type", po::value(&c.kernel_type))
        ("kernel.alpha", po::value(&c.kernel_alpha))
        ("kernel.k0", po::value(&c.kernel_k0))
        ("kernel.rate", po::value(&c.kernel_rate))
        ("kernel.spacing", po::value(&c.kernel_spacing))
        ("kernel.table", po::value(&c.kernel_table))
        ("model.b", po::value(&c.model_b))
        ("model.c", po::value(&c.model_c))
        ("model.b0", po::value(&c.model_b0))
        ("model.a0", po::value(&c.model_a0))
        ("jumps.type", po::value(&c.jumps_type))
        ("jumps.lambda", po::value(&c.jumps_lambda))
        ("jumps.beta", po::value(&c.jumps_beta))
        ("jumps.size", po::value(&c.jumps_size))
        ("jumps.table", po::value(&c.jumps_table))
        ("jumps0.type", po::value(&c.jumps0_type))
        ("jumps0.lambda", po::value(&c.jumps0_lambda))
        ("jumps0.beta", po::value(&c.jumps0_beta))
        ("jumps0.size", po::value(&c.jumps0_size))
        ("g0.type", po::value(&c.g0_type))
        ("g0.x0", po::value(&c.g0_x0))
        ("g0.theta", po::value(&c.g0_theta))
        ("g0.theta_table", po::value(&c.g0_theta_table))
        ("g0.table", po::value(&c.g0_table))
        ("grid.T", po::value(&c.grid_T))
        ("grid.n", po::value(&c.grid_n))
        ("f.type", po::value(&c.f_type))
        ("f.u", po::value(&c.f_u))
        ("f.re", po::value(&c.f_re))
        ("f.im", po::value(&c.f_im))
        ("f.table", po::value(&c.f_table))
        ("mc.paths", po::value(&c.mc_paths))
        ("mc.seed", po::value(&c.mc_seed))
        ("mc.checkpoints", po::value(&c.mc_checkpoints))
        ("mc.workers", po::value(&c.mc_workers))
        ("mc.u_values", po::value(&c.mc_u_values))
        ("mc.past_paths", po::value(&c.mc_past_paths))
        ("resolvent.method", po::value(&c.resolvent_method))
        ("tolerances.resolvent_identity", po::value(&t.resolvent_identity))
        ("tolerances.second_kind_residual", po::value(&t.second_kind_residual))
        ("tolerances.classical_oracle", po::value(&t.classical_oracle))
        ("tolerances.envelope", po::value(&t.envelope))
        ("tolerances.comparison", po::value(&t.comparison))
        ("tolerances.pi_routes", po::value(&t.pi_routes))
        ("tolerances.gap_monotone", po::value(&t.gap_monotone))
        ("tolerances.two_formula", po::value(&t.two_formula))
        ("tolerances.bound", po::value(&t.bound))
        ("tolerances.mc_slack", po::value(&t.mc_slack))
        ("tolerances.mc_sigmas", po::value(&t.mc_sigmas))
        ("verify.disable", po::value(&c.verify_disable))
        ("verify.sweep_models", po::value(&c.verify_sweep_models))
        ("verify.sweep_seed", po::value(&c.verify_sweep_seed))
        ("verify.pi_samples", po::value(&c.verify_pi_samples))
        ("output.dir", po::value(&c.output_dir))
        ("output.timing", po::value(&c.output_timing));
    // clang-format on
    return d;
}

void absolutize(std::string& path, const std::filesystem::path& base) {
    if (!path.empty() && std::filesystem::path(path).is_relative()) path = (base / path).lexically_normal().string();
}

RunConfig parse_streams(std::istream& file, const std::vector<std::string>& overrides,
                        const std::filesystem::path& base) {
    RunConfig cfg;
    const auto desc = options_for(cfg);
    std::ostringstream over;
    for (const auto& o : overrides) {
        if (o.find('=') == std::string::npos) throw ConfigError("override must be key=value: " + o);
        over << o << '\n';
    }
    std::istringstream over_in(over.str());
    po::variables_map vm;
    try {
        // the first stored value of a key wins, so overrides go in first
        po::store(po::parse_config_file(over_in, desc, false), vm);
        po::store(po::parse_config_file(file, desc, false), vm);
        po::notify(vm);
    } catch (const po::error& e) {
        throw ConfigError(e.what());
    }
    for (auto* p : {&cfg.kernel_table, &cfg.jumps_table, &cfg.g0_theta_table, &cfg.g0_table, &cfg.f_table}) {
        absolutize(*p, base);
    }
    return cfg;
}

std::vector<std::vector<double>> read_rows(const std::string& path, std::size_t columns) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open table " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        for (char& ch : line) {
            if (ch == ',') ch = ' ';
        }
        std::istringstream ls(line);
        std::vector<double> row;
        double v;
        while (ls >> v) row.push_back(v);
        if (!ls.eof()) throw ConfigError("malformed number in table " + path);
        if (row.empty()) continue;
        if (row.size() != columns) throw ConfigError("table " + path + " needs " + std::to_string(columns) + " columns");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ConfigError("table " + path + " is empty");
    return rows;
}

Table read_table(const std::string& path) {
    Table t;
    for (const auto& r : read_rows(path, 2)) {
        t.times.push_back(r[0]);
        t.values.push_back(r[1]);
    }
    return t;
}

std::string fmt(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

LevyMeasure build_jumps(const std::string& type, double lambda, double beta, double size, const std::string& table,
                        const char* prefix) {
    if (type == "none") return LevyMeasure::none();
    if (type == "exponential") return LevyMeasure::exponential(lambda, beta);
    if (type == "point") return LevyMeasure::point_mass(lambda, size);
    if (type == "table" && !table.empty()) {
        std::vector<double> nodes, weights;
        for (const auto& r : read_rows(table, 2)) {
            nodes.push_back(r[0]);
            weights.push_back(r[1]);
        }
        return LevyMeasure::tabulated(std::move(nodes), std::move(weights));
    }
    throw ConfigError(std::string(prefix) + ".type must be none, exponential, point or table");
}

}  // namespace

std::vector<double> parse_list(const std::string& text, const char* key) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        const auto first = item.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        const auto last = item.find_last_not_of(" \t");
        const std::string s = item.substr(first, last - first + 1);
        double v = 0.0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
            throw ConfigError(std::string(key) + ": not a number: " + s);
        }
        out.push_back(v);
    }
    return out;
}

RunConfig parse_config(const std::filesystem::path& file, const std::vector<std::string>& overrides) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open config " + file.string());
    return parse_streams(in, overrides, std::filesystem::absolute(file).parent_path());
}

RunConfig parse_config_text(const std::string& text, const std::vector<std::string>& overrides) {
    std::istringstream in(text);
    return parse_streams(in, overrides, std::filesystem::current_path());
}

std::string serialize(const RunConfig& c) {
    std::ostringstream os;
    auto put = [&](const char* key, const std::string& v) {
        if (!v.empty()) os << key << " = " << v << '\n';
    };
    auto num = [&](const char* key, double v) { os << key << " = " << fmt(v) << '\n'; };
    auto count = [&](const char* key, std::uint64_t v) { os << key << " = " << v << '\n'; };
    const auto& t = c.tolerances;
    put("kernel.type", c.kernel_type);
    num("kernel.alpha", c.kernel_alpha);
    num("kernel.k0", c.kernel_k0);
    num("kernel.rate", c.kernel_rate);
    num("kernel.spacing", c.kernel_spacing);
    put("kernel.table", c.kernel_table);
    num("model.b", c.model_b);
    num("model.c", c.model_c);
    num("model.b0", c.model_b0);
    num("model.a0", c.model_a0);
    put("jumps.type", c.jumps_type);
    num("jumps.lambda", c.jumps_lambda);
    num("jumps.beta", c.jumps_beta);
    num("jumps.size", c.jumps_size);
    put("jumps.table", c.jumps_table);
    put("jumps0.type", c.jumps0_type);
    num("jumps0.lambda", c.jumps0_lambda);
    num("jumps0.beta", c.jumps0_beta);
    num("jumps0.size", c.jumps0_size);
    put("g0.type", c.g0_type);
    num("g0.x0", c.g0_x0);
    num("g0.theta", c.g0_theta);
    put("g0.theta_table", c.g0_theta_table);
    put("g0.table", c.g0_table);
    num("grid.T", c.grid_T);
    count("grid.n", c.grid_n);
    put("f.type", c.f_type);
    num("f.u", c.f_u);
    num("f.re", c.f_re);
    num("f.im", c.f_im);
    put("f.table", c.f_table);
    count("mc.paths", c.mc_paths);
    count("mc.seed", c.mc_seed);
    put("mc.checkpoints", c.mc_checkpoints);
    count("mc.workers", c.mc_workers);
    put("mc.u_values", c.mc_u_values);
    count("mc.past_paths", c.mc_past_paths);
    put("resolvent.method", c.resolvent_method);
    num("tolerances.resolvent_identity", t.resolvent_identity);
    num("tolerances.second_kind_residual", t.second_kind_residual);
    num("tolerances.classical_oracle", t.classical_oracle);
    num("tolerances.envelope", t.envelope);
    num("tolerances.comparison", t.comparison);
    num("tolerances.pi_routes", t.pi_routes);
    num("tolerances.gap_monotone", t.gap_monotone);
    num("tolerances.two_formula", t.two_formula);
    num("tolerances.bound", t.bound);
    num("tolerances.mc_slack", t.mc_slack);
    num("tolerances.mc_sigmas", t.mc_sigmas);
    put("verify.disable", c.verify_disable);
    count("verify.sweep_models", c.verify_sweep_models);
    count("verify.sweep_seed", c.verify_sweep_seed);
    count("verify.pi_samples", c.verify_pi_samples);
    put("output.dir", c.output_dir);
    os << "output.timing = " << (c.output_timing ? "true" : "false") << '\n';
    return os.str();
}

Grid build_grid(const RunConfig& c) {
    if (!(c.grid_T > 0.0) || c.grid_n < 2) throw ConfigError("grid needs T > 0 and n >= 2");
    return Grid(c.grid_T, c.grid_n);
}

ModelSpec build_model(const RunConfig& c) {
    Kernel kernel = Kernel::constant(1.0);
    if (c.kernel_type == "fractional") {
        kernel = Kernel::fractional(c.kernel_alpha);
    } else if (c.kernel_type == "constant") {
        kernel = Kernel::constant(c.kernel_k0);
    } else if (c.kernel_type == "exponential") {
        kernel = Kernel::exponential(c.kernel_k0, c.kernel_rate);
    } else if (c.kernel_type == "gamma") {
        kernel = Kernel::gamma(c.kernel_alpha, c.kernel_rate);
    } else if (c.kernel_type == "table") {
        if (c.kernel_table.empty()) throw ConfigError("kernel.table is required for kernel.type = table");
        std::vector<double> values;
        for (const auto& r : read_rows(c.kernel_table, 1)) values.push_back(r[0]);
        kernel = Kernel::tabulated(c.kernel_spacing, std::move(values));
    } else {
        throw ConfigError("kernel.type must be fractional, constant, exponential, gamma or table");
    }

    InputCurve g0 = InputCurve::constant_plus_ktheta(c.g0_x0, c.g0_theta);
    if (c.g0_type == "constant_plus_ktheta") {
        if (!c.g0_theta_table.empty()) g0 = InputCurve::constant_plus_ktheta(c.g0_x0, read_table(c.g0_theta_table));
    } else if (c.g0_type == "monotone_table") {
        if (c.g0_table.empty()) throw ConfigError("g0.table is required for g0.type = monotone_table");
        g0 = InputCurve::monotone_table(read_table(c.g0_table));
    } else {
        throw ConfigError("g0.type must be constant_plus_ktheta or monotone_table");
    }

    if (c.jumps0_type == "table") throw ConfigError("jumps0.type must be none, exponential or point");
    ModelSpec m{kernel,
                c.model_b,
                c.model_c,
                build_jumps(c.jumps_type, c.jumps_lambda, c.jumps_beta, c.jumps_size, c.jumps_table, "jumps"),
                g0,
                c.model_b0,
                c.model_a0,
                build_jumps(c.jumps0_type, c.jumps0_lambda, c.jumps0_beta, c.jumps0_size, {}, "jumps0")};
    m.validate();
    return m;
}

TestFunction build_test_function(const RunConfig& c, const Grid& g) {
    if (c.f_type == "zero") return TestFunction::zero(g);
    if (c.f_type == "imag_const") return TestFunction::imag_const(c.f_u, g);
    if (c.f_type == "complex_const") return TestFunction::complex_const({c.f_re, c.f_im}, g);
    if (c.f_type == "table") {
        if (c.f_table.empty()) throw ConfigError("f.table is required for f.type = table");
        Table re, im;
        for (const auto& r : read_rows(c.f_table, 3)) {
            re.times.push_back(r[0]);
            re.values.push_back(r[1]);
            im.times.push_back(r[0]);
            im.values.push_back(r[2]);
        }
        return TestFunction::from_table(re, im, g);
    }
    throw ConfigError("f.type must be zero, imag_const, complex_const or table");
}

std::vector<TestFunction> build_transform_functions(const RunConfig& c, const Grid& g) {
    const auto us = parse_list(c.mc_u_values, "mc.u_values");
    if (us.empty()) return {build_test_function(c, g)};
    std::vector<TestFunction> out;
    for (double u : us) out.push_back(TestFunction::imag_const(u, g));
    return out;
}

McOptions build_mc_options(const RunConfig& c) {
    McOptions o;
    o.paths = c.mc_paths;
    o.seed = c.mc_seed;
    o.checkpoint_fractions = parse_list(c.mc_checkpoints, "mc.checkpoints");
    o.workers = c.mc_workers;
    o.sigmas = c.tolerances.mc_sigmas;
    o.slack = c.tolerances.mc_slack;
    if (o.paths < 2) throw ConfigError("mc.paths must be at least 2");
    if (o.workers < 1) throw ConfigError("mc.workers must be at least 1");
    if (o.checkpoint_fractions.empty()) throw ConfigError("mc.checkpoints must list at least one fraction");
    return o;
}

ResolventMethod build_resolvent_method(const RunConfig& c) {
    if (c.resolvent_method == "automatic") return ResolventMethod::automatic;
    if (c.resolvent_method == "discrete") return ResolventMethod::discrete;
    throw ConfigError("resolvent.method must be automatic or discrete");
}

SuiteConfig build_suite(const RunConfig& c) {
    const Grid g = build_grid(c);
    SuiteConfig s{build_model(c), build_test_function(c, g), build_transform_functions(c, g), build_mc_options(c)};
    s.past_paths = c.mc_past_paths;
    s.sweep_models = c.verify_sweep_models;
    s.sweep_seed = c.verify_sweep_seed;
    s.pi_samples = c.verify_pi_samples;
    s.tolerances = c.tolerances;
    std::istringstream in(c.verify_disable);
    std::string id;
    while (std::getline(in, id, ',')) {
        const auto first = id.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        s.disabled.insert(id.substr(first, id.find_last_not_of(" \t") - first + 1));
    }
    for (const auto& d : s.disabled) {
        if (std::find(claim_ids().begin(), claim_ids().end(), d) == claim_ids().end()) {
            throw ConfigError("verify.disable: unknown claim id " + d);
        }
    }
    if (s.past_paths < 1) throw ConfigError("mc.past_paths must be at least 1");
    return s;
}

void validate(const RunConfig& c) {
    const Grid g = build_grid(c);
    build_model(c);
    build_test_function(c, g);
    build_transform_functions(c, g);
    build_mc_options(c);
    checkpoint_nodes(g, build_mc_options(c).checkpoint_fractions);
    build_resolvent_method(c);
    build_suite(c);
}

}  // namespace affvol::cli
