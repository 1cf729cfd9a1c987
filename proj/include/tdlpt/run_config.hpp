#pragma once

// Run configuration: strict "key = value" text files plus command-line
// overrides. Unknown keys, malformed numbers and out-of-range values raise
// ConfigError (exit code 1 at the CLI).

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tdlpt/hydrogen.hpp"
#include "tdlpt/pulse.hpp"

namespace tdlpt {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class SystemKind { Harmonic, Hydrogen };
enum class WindowKind { OneCycleAtPeak, FullPulse, Custom };

struct RunConfig {
    SystemKind system = SystemKind::Hydrogen;

    // Pulse. Unset omega / n_cycles fall back to per-system and
    // per-command defaults; intensity, when given, overrides lambda.
    std::optional<double> omega;
    std::optional<int> n_cycles;
    double lambda = HydrogenDefaults::lambda;
    std::optional<double> intensity_wcm2;
    std::vector<int> cycles{5, 10, 15, 20, 30, 50};
    double field_scale = 1.0;  // multiplies g(t); 0 gives a zero-amplitude pulse

    // Grid and time stepping (hydrogen radial grid, or x grid for the oscillator).
    double r_min = HydrogenDefaults::r_min;
    double r_max = HydrogenDefaults::r_max;
    double dr = HydrogenDefaults::dr;
    double dt = HydrogenDefaults::dt;
    std::size_t stride = HydrogenDefaults::stride;

    WindowKind window = WindowKind::OneCycleAtPeak;
    double window_t0 = 0.0;
    double window_length = 0.0;
    FieldNormalization normalization = FieldNormalization::Carrier;

    std::string output_dir = ".";
    std::size_t jobs = 0;  // 0: one worker per hardware thread
    bool record_wall_time = false;

    // Oracles.
    bool oracle_tdse = false;
    int l_max = 4;
    double oracle_dr = 0.025;
    double oracle_dt = 0.004;

    // Harmonic oscillator checks.
    double x_max = 6.0;
    double dx = 0.01;
    double tolerance = 1e-6;

    /// Throws ConfigError on inconsistent values.
    void validate() const;

    double effective_omega() const;
    int effective_cycles(int command_default) const;
    double field_amplitude() const;
    PulseProfile pulse(int n_cycles) const;
    TimeWindow window_for(const PulseProfile& pulse) const;

    /// Every key with its effective value, in a fixed order.
    std::vector<std::pair<std::string, std::string>> snapshot() const;
};

/// Applies one key/value pair; throws ConfigError for unknown keys or bad values.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Reads UTF-8 "key = value" lines; '#' starts a comment, blank lines are skipped.
RunConfig parse_config(std::istream& in, RunConfig base = {});
RunConfig load_config_file(const std::string& path, RunConfig base = {});

/// Splits "key=value" (used by --set).
std::pair<std::string, std::string> split_assignment(const std::string& text);

std::vector<int> parse_int_list(const std::string& text);

}  // namespace tdlpt
