#pragma once

// Command implementations behind the CLI. Each cmd_* validates its config,
// writes CSV files under config.output_dir and returns an exit code plus a
// human-readable report. The compute functions are exposed separately so
// tests can use them without touching the file system.

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tdlpt/hydrogen.hpp"
#include "tdlpt/records.hpp"
#include "tdlpt/run_config.hpp"

namespace tdlpt {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfigError = 1,
    kExitNumericalFailure = 2,
    kExitThresholdBreach = 3,
};

struct CommandResult {
    int exit_code = kExitOk;
    std::string report;
    std::vector<std::string> files;
};

/// Runs `body`, mapping ConfigError / std::invalid_argument to exit 1 and
/// NumericalError / other runtime errors to exit 2. Reports go to `out`,
/// error messages to `err`.
int run_guarded(const std::function<CommandResult()>& body, std::ostream& out, std::ostream& err);

// ---------------------------------------------------------------- oscillator

struct HoVerifyReport {
    std::vector<double> sample_times;
    std::vector<double> deviations;  // max_x |psi_tdlpt - psi_exact| per sample
    double max_deviation = 0.0;
    double max_q3 = 0.0;
    double residual_n1 = 0.0;  // expectation-evolution law, orders 1 and 2
    double residual_n2 = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Defaults: omega = 0.5, N = 4. Nine samples evenly spaced over the pulse.
HoVerifyReport ho_verify(const RunConfig& config);
CommandResult cmd_ho_verify(const RunConfig& config);

struct HoShiftReport {
    double omega = 0.0;
    double quadrature = 0.0;
    double closed_form = 0.0;
    double sum_over_states = 0.0;
    bool pass = false;  // all three agree to 1e-9
};

HoShiftReport ho_shift(double omega);
CommandResult cmd_ho_shift(const RunConfig& config, double omega);

// ------------------------------------------------------------------ hydrogen

/// One full first-order hydrogen run for a single N.
struct HydrogenRun {
    int n_cycles = 0;
    PulseProfile pulse;
    CorrectionChannel phi11;
    ShiftSeries shifts;
    DipoleSeries dipole;
    cplx e2_cycle;
    cplx e2_pulse;
    double alpha = 0.0;
};

HydrogenRun run_hydrogen(const RunConfig& config, int n_cycles);

/// Columns t, g, re_E2, im_E2, dipole.
ResultRecord hydrogen_series_record(const RunConfig& config, const HydrogenRun& run);
CommandResult cmd_hydrogen_first_order(const RunConfig& config);

/// Published Table 1 values, tagged with their provenance.
struct Table1Reference {
    int n_cycles = 0;
    double e2_cycle = 0.0;
    double alpha = 0.0;
    double e2_pulse = 0.0;
};

inline constexpr const char* kTable1Provenance = "published-table-1/v1";
const std::vector<Table1Reference>& table1_reference();
std::optional<Table1Reference> table1_reference_for(int n_cycles);

struct Table1Row {
    int n_cycles = 0;
    bool ok = false;
    std::string error;
    cplx e2_cycle;
    cplx e2_pulse;
    double alpha = 0.0;
    double wall_seconds = 0.0;
};

/// Bounded worker pool over the N list; rows come back in input order.
/// A failing N is reported in its row and does not stop the sweep.
std::vector<Table1Row> run_table1(const RunConfig& config, const std::vector<int>& cycles);

/// Relative deviation tolerated against the published values.
inline constexpr double kTable1Tolerance = 5e-3;

ResultRecord table1_record(const RunConfig& config, const std::vector<Table1Row>& rows);
CommandResult cmd_table1(const RunConfig& config);

struct DipoleBenchmark {
    std::vector<double> times;
    std::vector<double> field;  // lambda g(t)
    std::vector<double> d_tdlpt;
    std::vector<double> d_tdse;  // interpolated onto the TDLPT times
    double peak_time = 0.0;
    double peak_relative_deviation = 0.0;  // |d_tdlpt - d_tdse| / |d_tdse| at the peak sample
    double max_relative_deviation = 0.0;   // max_t |diff| / max_t |d_tdse|
    double norm_drift = 0.0;
};

inline constexpr double kDipoleTolerance = 1.5e-2;

/// TDLPT dipole next to the partial-wave TDSE oracle (N defaults to 30).
DipoleBenchmark dipole_benchmark(const RunConfig& config, int n_cycles);

/// which = "fig1" (per-N shift files over config.cycles) or "fig2".
CommandResult cmd_figure_data(const RunConfig& config, const std::string& which);
CommandResult cmd_oracle_dipole(const RunConfig& config);

}  // namespace tdlpt
