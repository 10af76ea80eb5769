#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "affvol/model.hpp"
#include "affvol/resolvent.hpp"
#include "affvol/verify.hpp"

namespace affvol::cli {

// Flat key = value file with dotted keys; every key is typed and documented in the README.
struct RunConfig {
    std::string kernel_type = "fractional";  // fractional | constant | exponential | gamma | table
    double kernel_alpha = 0.6;
    double kernel_k0 = 1.0;
    double kernel_rate = 1.0;
    double kernel_spacing = 0.0;  // knot spacing of kernel.table
    std::string kernel_table;     // one value per line

    double model_b = -0.3;
    double model_c = 0.09;
    double model_b0 = 0.0;
    double model_a0 = 0.0;

    std::string jumps_type = "none";  // none | exponential | point | table
    double jumps_lambda = 0.0;
    double jumps_beta = 1.0;
    double jumps_size = 0.0;
    std::string jumps_table;  // lines "size weight"

    std::string jumps0_type = "none";  // none | exponential | point
    double jumps0_lambda = 0.0;
    double jumps0_beta = 1.0;
    double jumps0_size = 0.0;

    std::string g0_type = "constant_plus_ktheta";  // constant_plus_ktheta | monotone_table
    double g0_x0 = 0.3;
    double g0_theta = 0.0;
    std::string g0_theta_table;  // lines "t value"; overrides g0.theta
    std::string g0_table;        // lines "t value"

    double grid_T = 1.0;
    std::size_t grid_n = 300;

    std::string f_type = "imag_const";  // zero | imag_const | complex_const | table
    double f_u = 1.0;
    double f_re = 0.0;
    double f_im = 0.0;
    std::string f_table;  // lines "t re im"

    std::size_t mc_paths = 10000;
    std::uint64_t mc_seed = 1;
    std::string mc_checkpoints = "0.25,0.5,0.75";
    std::size_t mc_workers = 1;
    std::string mc_u_values;  // optional extra imag_const cases for the transform
    std::size_t mc_past_paths = 1000;

    std::string resolvent_method = "automatic";  // automatic | discrete

    Tolerances tolerances;

    std::string verify_disable;
    std::size_t verify_sweep_models = 0;
    std::uint64_t verify_sweep_seed = 20240601;
    std::size_t verify_pi_samples = 5;

    std::string output_dir;
    bool output_timing = true;

    bool operator==(const RunConfig&) const = default;
};

// Overrides are "key=value" strings and take precedence over the file.  Unknown keys and
// malformed values raise ConfigError.
RunConfig parse_config(const std::filesystem::path& file, const std::vector<std::string>& overrides = {});
RunConfig parse_config_text(const std::string& text, const std::vector<std::string>& overrides = {});

// Every key, one per line, values printed so that parsing them back is lossless.
std::string serialize(const RunConfig& cfg);

// Builders run every module precondition; they throw DomainError / ConfigError / CapabilityError.
Grid build_grid(const RunConfig& cfg);
ModelSpec build_model(const RunConfig& cfg);
TestFunction build_test_function(const RunConfig& cfg, const Grid& g);
std::vector<TestFunction> build_transform_functions(const RunConfig& cfg, const Grid& g);
McOptions build_mc_options(const RunConfig& cfg);
ResolventMethod build_resolvent_method(const RunConfig& cfg);
SuiteConfig build_suite(const RunConfig& cfg);

// Calls every builder once.
void validate(const RunConfig& cfg);

std::vector<double> parse_list(const std::string& text, const char* key);

}  // namespace affvol::cli
