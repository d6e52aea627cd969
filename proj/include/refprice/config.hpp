#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "refprice/model.hpp"
#include "refprice/policies.hpp"

namespace refprice {

struct InstanceConfig {
    double a = 1.0;
    double b = 2.0;
    double eta_plus = 0.5;
    double eta_minus = 0.5;
    double p_max = 4.0 / 3.0;
    double p_ratio_bound = 1.1;

    Instance build() const { return Instance(a, b, eta_plus, eta_minus, p_max, p_ratio_bound); }
};

struct RunConfig {
    std::vector<std::int64_t> horizons{1000};
    int seeds = 1;
    std::uint64_t base_seed = 1;
    std::optional<double> r1;  // unset: start at p_max
    std::string out = ".";
    int threads = 1;
};

/** Everything one CLI invocation needs.
 *
 * On disk this is a JSON object with the blocks "instance", "noise", "policy" and "run".
 * Unknown keys anywhere are rejected, and every block is re-validated after loading.
 */
struct ExperimentConfig {
    InstanceConfig instance;
    NoiseSpec noise;
    PolicySpec policy;
    RunConfig run;

    double start_reference() const { return run.r1.value_or(instance.p_max); }
};

/// Thrown for malformed files, unknown keys, bad overrides and invalid values.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

ExperimentConfig parse_config(const std::string& json_text,
                              const std::vector<std::string>& overrides = {},
                              const std::optional<std::string>& seed_env = std::nullopt);
ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {},
                             const std::optional<std::string>& seed_env = std::nullopt);

/// Canonical serialization; parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const ExperimentConfig& config);

/// Throws ConfigError when any block violates its invariants.
void validate_config(const ExperimentConfig& config);

}  // namespace refprice
