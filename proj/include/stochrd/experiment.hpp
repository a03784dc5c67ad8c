#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stochrd/attractor.hpp"
#include "stochrd/field.hpp"
#include "stochrd/model.hpp"

namespace stochrd {

inline constexpr const char* kVersion = "0.1.0";

/// Parse or validation failure; `keys` lists every offending "section.key".
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, std::vector<std::string> keys)
        : std::runtime_error(what), keys_(std::move(keys)) {}
    const std::vector<std::string>& keys() const noexcept { return keys_; }

private:
    std::vector<std::string> keys_;
};

struct InitialCondition {
    enum class Kind { zero, gaussian, bump, modes };
    Kind kind = Kind::gaussian;
    double amplitude = 1.0;
    double width = 1.0;
};

struct ExperimentConfig {
    ModelSpec model = ModelSpec::canonical_cubic();
    Grid grid;
    InitialCondition initial;

    double dt = 1e-3;
    double tau = 0.0;
    double duration = 10.0;
    std::vector<double> horizons = {12.0, 16.0, 20.0};
    std::string method = "transform";  // simulate: transform | direct

    std::uint64_t seed = 1;
    double s_max = 64.0;
    double path_step = 1e-3;
    std::vector<double> alphas = {0.5, 0.25, 0.1, 0.05, 0.02};

    std::size_t members = 4;
    double eps_att = 1e-3;
    std::optional<double> c_abs;  // unset: calibrate
    double abs_S = 30.0;
    double ball_factor = 4.0;
    double period = 2.0;
    double c_cert = 10.0;

    std::string output_dir = "out";
    std::size_t snapshot_every = 0;
};

/// Reads the INI text. Unknown sections or keys and out-of-range values are
/// collected and reported together in one ConfigError.
ExperimentConfig parse_config(std::istream& is);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical JSON form of a config; its FNV-1a hash goes into the manifest.
std::string canonical_config(const ExperimentConfig& config);
std::uint64_t fnv1a64(const std::string& bytes);

const std::vector<std::string>& experiment_commands();

enum ExitStatus : int { kPass = 0, kContractFailure = 1, kUsageError = 2 };

/// Runs one experiment, writing artifacts and manifest.json into `out`.
/// Divergence is reported as error.json with status kContractFailure.
int execute(const std::string& command, const ExperimentConfig& config,
            const std::filesystem::path& out, std::ostream& log);

/// CSV with header "alpha,dist,absorbing_radius,max_tail,converged".
struct SweepResult;
void write_sweep_csv(std::ostream& os, const SweepResult& result);

}  // namespace stochrd
