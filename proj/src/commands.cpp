#include "tdlpt/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>
#include <thread>

#include "tdlpt/harmonic.hpp"
#include "tdlpt/oracles.hpp"

namespace tdlpt {

namespace {

constexpr int kHoDefaultCycles = 4;
constexpr int kHydrogenDefaultCycles = 10;
constexpr int kDipoleDefaultCycles = 30;
constexpr double kHoShiftTolerance = 1e-9;
constexpr double kTruncationTolerance = 1e-12;
constexpr double kResidualTolerance = 1e-4;

void require_system(const RunConfig& config, SystemKind kind, const char* command) {
    config.validate();
    if (config.system != kind) {
        throw ConfigError(std::string(command) + " needs system = " +
                          (kind == SystemKind::Harmonic ? "harmonic" : "hydrogen"));
    }
}

std::string output_path(const RunConfig& config, const std::string& name) {
    return (std::filesystem::path(config.output_dir) / name).string();
}

std::string clean_cell(std::string s) {
    for (char& c : s) {
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    }
    return s;
}

double relative_deviation(double value, double reference) {
    return std::abs(value - reference) / std::abs(reference);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const auto k = static_cast<std::size_t>(it - xs.begin());
    const double w = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
    return (1.0 - w) * ys[k - 1] + w * ys[k];
}

std::size_t nearest_index(const std::vector<double>& xs, double x) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < xs.size(); ++k) {
        if (std::abs(xs[k] - x) < std::abs(xs[best] - x)) best = k;
    }
    return best;
}

std::string fmt(double v) { return format_number(v); }

}  // namespace

int run_guarded(const std::function<CommandResult()>& body, std::ostream& out, std::ostream& err) {
    try {
        const CommandResult r = body();
        out << r.report;
        for (const auto& f : r.files) out << "wrote " << f << '\n';
        return r.exit_code;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumericalFailure;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << '\n';
        return kExitNumericalFailure;
    }
}

// ---------------------------------------------------------------------------

HoVerifyReport ho_verify(const RunConfig& config) {
    require_system(config, SystemKind::Harmonic, "ho-verify");
    const PulseProfile pulse = config.pulse(config.effective_cycles(kHoDefaultCycles));
    const double lambda = pulse.lambda();
    const GridPtr grid = RadialGrid::build(-config.x_max, config.x_max, config.dx, true);
    const double tf = pulse.duration();

    HoVerifyReport rep;
    rep.tolerance = config.tolerance;
    for (int k = 0; k <= 8; ++k) rep.sample_times.push_back(tf * k / 8.0);

    for (double t : rep.sample_times) {
        const cplx c1 = ho_phi1(pulse, t, config.dt);
        const cplx c2 = ho_phi2(pulse, t, config.dt);
        const ComplexField lpt = ho_tdlpt_wavefunction(c1, c2, lambda, t, grid);
        const ComplexField exact = ho_exact_solution(pulse, lambda, grid, t, config.dt);
        double dev = 0.0;
        for (std::size_t i = 0; i < grid->size(); ++i) dev = std::max(dev, std::abs(lpt[i] - exact[i]));
        rep.deviations.push_back(dev);
        rep.max_deviation = std::max(rep.max_deviation, dev);
    }
    rep.max_q3 = ho_truncation_check(pulse, rep.sample_times, grid, config.dt);

    // Expectation-evolution law on the cumulative mesh.
    const HoCorrections hc = ho_corrections(pulse, tf, config.dt);
    const GroundState gs = harmonic_ground_state(grid);
    const std::size_t m = hc.times.size();
    std::vector<cplx> phi1(m), q1(m), phi2(m), q2(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double g = pulse.g(hc.times[k]);
        const ComplexField p1 = ComplexField::from_function(grid, [&](double x) { return hc.c1[k] * x; });
        const ComplexField p2 = ComplexField::from_function(grid, [&](double) { return hc.c2[k]; });
        const ComplexField v = ComplexField::from_function(grid, [&](double x) { return g * x; });
        const ComplexField q = assemble_pseudopotential(2, std::span<const ComplexField>(&p1, 1));
        phi1[k] = ground_state_expectation(p1, gs);
        q1[k] = ground_state_expectation(v, gs);
        phi2[k] = ground_state_expectation(p2, gs);
        q2[k] = ground_state_expectation(q, gs);
    }
    rep.residual_n1 = expectation_evolution_residual(hc.times, phi1, q1);
    rep.residual_n2 = expectation_evolution_residual(hc.times, phi2, q2);

    rep.pass = rep.max_deviation <= rep.tolerance && rep.max_q3 <= kTruncationTolerance &&
               rep.residual_n1 <= kResidualTolerance && rep.residual_n2 <= kResidualTolerance;
    return rep;
}

CommandResult cmd_ho_verify(const RunConfig& config) {
    const HoVerifyReport rep = ho_verify(config);
    ResultRecord rec = make_record(config.snapshot(), {"t", "max_abs_deviation"});
    for (std::size_t k = 0; k < rep.sample_times.size(); ++k) {
        rec.add_numeric_row({rep.sample_times[k], rep.deviations[k]});
    }
    rec.add_meta("summary.max_deviation", fmt(rep.max_deviation));
    rec.add_meta("summary.max_q3", fmt(rep.max_q3));
    rec.add_meta("summary.residual_n1", fmt(rep.residual_n1));
    rec.add_meta("summary.residual_n2", fmt(rep.residual_n2));
    rec.add_meta("summary.result", rep.pass ? "PASS" : "FAIL");

    CommandResult out;
    const std::string path = output_path(config, "ho_verify.csv");
    write_record_file(rec, path);
    out.files.push_back(path);

    std::ostringstream os;
    os << "ho-verify: " << (rep.pass ? "PASS" : "FAIL") << '\n'
       << "  max |psi_tdlpt - psi_exact| = " << fmt(rep.max_deviation) << " (tolerance " << fmt(rep.tolerance)
       << (rep.max_deviation <= rep.tolerance ? ")" : ", BREACHED)") << '\n'
       << "  max |Q3|                    = " << fmt(rep.max_q3) << '\n'
       << "  expectation law residual    = " << fmt(rep.residual_n1) << " (n=1), " << fmt(rep.residual_n2)
       << " (n=2)\n";
    out.report = os.str();
    out.exit_code = rep.pass ? kExitOk : kExitThresholdBreach;
    return out;
}

HoShiftReport ho_shift(double omega) {
    HoShiftReport rep;
    rep.omega = omega;
    rep.quadrature = ho_ac_shift(omega);
    rep.closed_form = ho_ac_shift_closed_form(omega);
    // Only |1> couples to the oscillator ground state: |<1|x|0>|^2 = 1/2, gap 1.
    rep.sum_over_states = sum_over_states_shift(0.5, 1.0, omega);
    rep.pass = std::abs(rep.quadrature - rep.closed_form) <= kHoShiftTolerance &&
               std::abs(rep.sum_over_states - rep.closed_form) <= kHoShiftTolerance;
    return rep;
}

CommandResult cmd_ho_shift(const RunConfig& config, double omega) {
    require_system(config, SystemKind::Harmonic, "ho-shift");
    if (!(omega > 0.0)) throw ConfigError("--omega must be positive");
    const HoShiftReport rep = ho_shift(omega);
    ResultRecord rec = make_record(config.snapshot(), {"omega", "quadrature", "closed_form", "sum_over_states"});
    rec.add_numeric_row({rep.omega, rep.quadrature, rep.closed_form, rep.sum_over_states});

    CommandResult out;
    const std::string path = output_path(config, "ho_shift.csv");
    write_record_file(rec, path);
    out.files.push_back(path);
    std::ostringstream os;
    os << "ho-shift omega=" << fmt(omega) << ": " << (rep.pass ? "PASS" : "FAIL") << '\n'
       << "  quadrature      " << fmt(rep.quadrature) << '\n'
       << "  closed form     " << fmt(rep.closed_form) << '\n'
       << "  sum over states " << fmt(rep.sum_over_states) << '\n';
    out.report = os.str();
    out.exit_code = rep.pass ? kExitOk : kExitThresholdBreach;
    return out;
}

// ---------------------------------------------------------------------------

HydrogenRun run_hydrogen(const RunConfig& config, int n_cycles) {
    require_system(config, SystemKind::Hydrogen, "hydrogen run");
    HydrogenRun run;
    run.n_cycles = n_cycles;
    run.pulse = config.pulse(n_cycles);
    const GridPtr grid = RadialGrid::build(config.r_min, config.r_max, config.dr);
    run.phi11 = propagate_phi11(grid, run.pulse, config.dt, config.stride);
    run.shifts = hydrogen_shift_pipeline(run.phi11, hydrogen_ground_state(grid));
    run.dipole = dipole_moment(run.phi11, run.pulse);
    const TimeWindow cycle = one_cycle_at_peak(run.pulse);
    run.e2_cycle = dynamic_shift(run.shifts, cycle);
    run.e2_pulse = dynamic_shift(run.shifts, full_pulse(run.pulse));
    const double ms = window_mean_square(run.pulse, cycle, config.normalization);
    run.alpha = ms > 1e-14 ? polarizability(run.e2_cycle, run.pulse, cycle, config.normalization) : 0.0;
    return run;
}

ResultRecord hydrogen_series_record(const RunConfig& config, const HydrogenRun& run) {
    ResultRecord rec = make_record(config.snapshot(), {"t", "g", "re_E2", "im_E2", "dipole"});
    rec.add_meta("run.n_cycles", std::to_string(run.n_cycles));
    rec.add_meta("summary.E2_cycle_re", fmt(run.e2_cycle.real()));
    rec.add_meta("summary.E2_cycle_im", fmt(run.e2_cycle.imag()));
    rec.add_meta("summary.E2_pulse_re", fmt(run.e2_pulse.real()));
    rec.add_meta("summary.E2_pulse_im", fmt(run.e2_pulse.imag()));
    rec.add_meta("summary.alpha", fmt(run.alpha));
    for (std::size_t k = 0; k < run.shifts.times.size(); ++k) {
        const double t = run.shifts.times[k];
        rec.add_numeric_row(
            {t, run.pulse.g(t), run.shifts.values[k].real(), run.shifts.values[k].imag(), run.dipole.values[k]});
    }
    return rec;
}

CommandResult cmd_hydrogen_first_order(const RunConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    const int n = config.effective_cycles(kHydrogenDefaultCycles);
    const HydrogenRun run = run_hydrogen(config, n);

    const double t_half = 0.5 * run.pulse.duration();
    const std::size_t mid = nearest_index(run.phi11.series.times, t_half);
    const double exponent = small_r_exponent(*run.phi11.series.grid, run.phi11.series.samples[mid]);

    std::vector<double> radii;
    for (double r : {20.0, 25.0, 30.0, 35.0}) {
        if (r < run.phi11.series.grid->r_max()) radii.push_back(r);
    }
    const TailCheck tail = asymptotic_tail_check(run.phi11, run.pulse, radii, t_half);

    ResultRecord rec = hydrogen_series_record(config, run);
    rec.add_meta("summary.small_r_exponent", fmt(exponent));
    if (config.record_wall_time) rec.add_meta("provenance.wall_seconds", fmt(seconds_since(start)));

    CommandResult out;
    const std::string path = output_path(config, "hydrogen_first_order_N" + std::to_string(n) + ".csv");
    write_record_file(rec, path);
    out.files.push_back(path);

    std::ostringstream os;
    os << "hydrogen-first-order N=" << n << " (" << run.pulse.describe() << ")\n"
       << "  E2 one cycle at peak = " << fmt(run.e2_cycle.real()) << " + " << fmt(run.e2_cycle.imag()) << "i\n"
       << "  E2 full pulse        = " << fmt(run.e2_pulse.real()) << " + " << fmt(run.e2_pulse.imag()) << "i\n"
       << "  alpha(omega)         = " << fmt(run.alpha) << '\n'
       << "  small-r exponent at T_f/2 = " << fmt(exponent) << '\n'
       << "  tail relative error at T_f/2:";
    for (std::size_t k = 0; k < tail.radii.size(); ++k) {
        os << " r=" << fmt(tail.radii[k]) << ":" << (tail.excluded[k] ? "excluded" : fmt(tail.relative_error[k]));
    }
    os << '\n';
    out.report = os.str();
    return out;
}

// ---------------------------------------------------------------------------

const std::vector<Table1Reference>& table1_reference() {
    static const std::vector<Table1Reference> rows{
        {5, -1.067, 4.267, -0.430},  {10, -1.126, 4.504, -0.430}, {15, -1.138, 4.550, -0.430},
        {20, -1.142, 4.567, -0.430}, {30, -1.144, 4.579, -0.430}, {50, -1.146, 4.583, -0.430},
    };
    return rows;
}

std::optional<Table1Reference> table1_reference_for(int n_cycles) {
    for (const auto& r : table1_reference()) {
        if (r.n_cycles == n_cycles) return r;
    }
    return std::nullopt;
}

std::vector<Table1Row> run_table1(const RunConfig& config, const std::vector<int>& cycles) {
    require_system(config, SystemKind::Hydrogen, "table1");
    std::vector<Table1Row> rows(cycles.size());
    std::size_t workers = config.jobs ? config.jobs : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, cycles.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < cycles.size(); k = next++) {
            Table1Row& row = rows[k];
            row.n_cycles = cycles[k];
            const auto start = std::chrono::steady_clock::now();
            try {
                const HydrogenRun run = run_hydrogen(config, cycles[k]);
                row.e2_cycle = run.e2_cycle;
                row.e2_pulse = run.e2_pulse;
                row.alpha = run.alpha;
                row.ok = true;
            } catch (const std::exception& e) {
                row.error = e.what();
            }
            row.wall_seconds = seconds_since(start);
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return rows;
}

ResultRecord table1_record(const RunConfig& config, const std::vector<Table1Row>& rows) {
    std::vector<std::string> cols{"N",
                                  "E2_cycle",
                                  "alpha",
                                  "E2_pulse",
                                  "E2_cycle_im",
                                  "E2_pulse_im",
                                  "ref_E2_cycle",
                                  "ref_alpha",
                                  "ref_E2_pulse",
                                  "rel_dev_E2_cycle",
                                  "rel_dev_alpha",
                                  "rel_dev_E2_pulse",
                                  "status"};
    if (config.record_wall_time) cols.push_back("wall_seconds");
    ResultRecord rec = make_record(config.snapshot(), cols);
    rec.add_meta("reference.provenance", kTable1Provenance);
    rec.add_meta("reference.tolerance", fmt(kTable1Tolerance));

    for (const auto& row : rows) {
        const auto ref = table1_reference_for(row.n_cycles);
        const double nan = std::nan("");
        std::vector<std::string> cells{std::to_string(row.n_cycles)};
        auto num = [&](double v) { cells.push_back(fmt(v)); };
        if (row.ok) {
            num(row.e2_cycle.real());
            num(row.alpha);
            num(row.e2_pulse.real());
            num(row.e2_cycle.imag());
            num(row.e2_pulse.imag());
        } else {
            for (int k = 0; k < 5; ++k) num(nan);
        }
        std::string status;
        if (ref) {
            num(ref->e2_cycle);
            num(ref->alpha);
            num(ref->e2_pulse);
        } else {
            for (int k = 0; k < 3; ++k) num(nan);
        }
        if (row.ok && ref) {
            const double d1 = relative_deviation(row.e2_cycle.real(), ref->e2_cycle);
            const double d2 = relative_deviation(row.alpha, ref->alpha);
            const double d3 = relative_deviation(row.e2_pulse.real(), ref->e2_pulse);
            num(d1);
            num(d2);
            num(d3);
            status = (d1 <= kTable1Tolerance && d2 <= kTable1Tolerance && d3 <= kTable1Tolerance) ? "ok" : "breach";
        } else {
            for (int k = 0; k < 3; ++k) num(nan);
            status = row.ok ? "no_reference" : "error: " + clean_cell(row.error);
        }
        cells.push_back(status);
        if (config.record_wall_time) num(row.wall_seconds);
        rec.add_row(std::move(cells));
    }
    return rec;
}

CommandResult cmd_table1(const RunConfig& config) {
    const std::vector<Table1Row> rows = run_table1(config, config.cycles);
    const ResultRecord rec = table1_record(config, rows);

    CommandResult out;
    const std::string path = output_path(config, "table1.csv");
    write_record_file(rec, path);
    out.files.push_back(path);

    bool failed = false;
    bool breached = false;
    std::ostringstream os;
    os << "table1 (reference " << kTable1Provenance << ", tolerance " << fmt(kTable1Tolerance) << ")\n";
    const std::size_t status_col = rec.column("status");
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const std::string& status = rec.rows[k][status_col];
        failed = failed || !rows[k].ok;
        breached = breached || status == "breach";
        os << "  N=" << rows[k].n_cycles;
        if (rows[k].ok) {
            os << "  E2_cycle=" << fmt(rows[k].e2_cycle.real()) << "  alpha=" << fmt(rows[k].alpha)
               << "  E2_pulse=" << fmt(rows[k].e2_pulse.real());
        }
        os << "  [" << status << "]\n";
    }
    out.report = os.str();
    out.exit_code = failed ? kExitNumericalFailure : breached ? kExitThresholdBreach : kExitOk;
    return out;
}

// ---------------------------------------------------------------------------

DipoleBenchmark dipole_benchmark(const RunConfig& config, int n_cycles) {
    const HydrogenRun run = run_hydrogen(config, n_cycles);
    DipoleBenchmark b;
    b.times = run.dipole.times;
    b.d_tdlpt = run.dipole.values;
    for (double t : b.times) b.field.push_back(run.pulse.lambda() * run.pulse.g(t));

    const GridPtr oracle_grid = RadialGrid::build(config.r_min, config.r_max, config.oracle_dr);
    const double spacing = static_cast<double>(config.stride) * config.dt;
    const auto oracle_stride =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(spacing / config.oracle_dt)));
    const TdseDipole tdse = full_tdse_dipole(oracle_grid, run.pulse, config.l_max, config.oracle_dt, oracle_stride);
    b.norm_drift = tdse.norm_drift;
    for (double t : b.times) b.d_tdse.push_back(interpolate(tdse.times, tdse.values, t));

    const std::size_t peak = nearest_index(b.times, run.pulse.peak_time());
    b.peak_time = b.times[peak];
    const double diff_peak = std::abs(b.d_tdlpt[peak] - b.d_tdse[peak]);
    b.peak_relative_deviation = diff_peak > 0.0 ? diff_peak / std::abs(b.d_tdse[peak]) : 0.0;

    double max_diff = 0.0;
    double max_ref = 0.0;
    for (std::size_t k = 0; k < b.times.size(); ++k) {
        max_diff = std::max(max_diff, std::abs(b.d_tdlpt[k] - b.d_tdse[k]));
        max_ref = std::max(max_ref, std::abs(b.d_tdse[k]));
    }
    b.max_relative_deviation = max_diff > 0.0 ? max_diff / max_ref : 0.0;
    return b;
}

namespace {

ResultRecord dipole_record(const RunConfig& config, const DipoleBenchmark& b, int n) {
    ResultRecord rec = make_record(config.snapshot(), {"t", "lambda_g", "d_tdlpt", "d_tdse"});
    rec.add_meta("run.n_cycles", std::to_string(n));
    rec.add_meta("summary.peak_time", fmt(b.peak_time));
    rec.add_meta("summary.peak_relative_deviation", fmt(b.peak_relative_deviation));
    rec.add_meta("summary.max_relative_deviation", fmt(b.max_relative_deviation));
    rec.add_meta("summary.oracle_norm_drift", fmt(b.norm_drift));
    for (std::size_t k = 0; k < b.times.size(); ++k) {
        rec.add_numeric_row({b.times[k], b.field[k], b.d_tdlpt[k], b.d_tdse[k]});
    }
    return rec;
}

std::string dipole_summary(const DipoleBenchmark& b) {
    std::ostringstream os;
    os << "  peak relative deviation |d_tdlpt - d_tdse|/|d_tdse| at t=" << fmt(b.peak_time) << ": "
       << fmt(b.peak_relative_deviation) << " (tolerance " << fmt(kDipoleTolerance) << ")\n"
       << "  max_t |d_tdlpt - d_tdse| / max_t |d_tdse| = " << fmt(b.max_relative_deviation) << '\n'
       << "  oracle norm drift = " << fmt(b.norm_drift) << '\n';
    return os.str();
}

}  // namespace

CommandResult cmd_figure_data(const RunConfig& config, const std::string& which) {
    require_system(config, SystemKind::Hydrogen, "figure-data");
    CommandResult out;
    std::ostringstream os;
    if (which == "fig1") {
        const std::vector<int> cycles = config.n_cycles ? std::vector<int>{*config.n_cycles} : config.cycles;
        for (int n : cycles) {
            const HydrogenRun run = run_hydrogen(config, n);
            ResultRecord rec = make_record(config.snapshot(), {"t", "g", "re_E2", "im_E2"});
            rec.add_meta("run.n_cycles", std::to_string(n));
            for (std::size_t k = 0; k < run.shifts.times.size(); ++k) {
                const double t = run.shifts.times[k];
                rec.add_numeric_row({t, run.pulse.g(t), run.shifts.values[k].real(), run.shifts.values[k].imag()});
            }
            const std::string path = output_path(config, "fig1_N" + std::to_string(n) + ".csv");
            write_record_file(rec, path);
            out.files.push_back(path);
        }
        os << "figure-data fig1: " << cycles.size() << " file(s)\n";
    } else if (which == "fig2") {
        if (!config.oracle_tdse) throw ConfigError("fig2 needs oracle_tdse = true for its d_tdse column");
        const int n = config.effective_cycles(kDipoleDefaultCycles);
        const DipoleBenchmark b = dipole_benchmark(config, n);
        const std::string path = output_path(config, "fig2_N" + std::to_string(n) + ".csv");
        write_record_file(dipole_record(config, b, n), path);
        out.files.push_back(path);
        os << "figure-data fig2 N=" << n << '\n' << dipole_summary(b);
    } else {
        throw ConfigError("--which must be fig1 or fig2");
    }
    out.report = os.str();
    return out;
}

CommandResult cmd_oracle_dipole(const RunConfig& config) {
    require_system(config, SystemKind::Hydrogen, "oracle-dipole");
    const int n = config.effective_cycles(kDipoleDefaultCycles);
    const DipoleBenchmark b = dipole_benchmark(config, n);
    CommandResult out;
    const std::string path = output_path(config, "oracle_dipole_N" + std::to_string(n) + ".csv");
    write_record_file(dipole_record(config, b, n), path);
    out.files.push_back(path);
    const bool pass = b.peak_relative_deviation <= kDipoleTolerance;
    out.report = "oracle-dipole N=" + std::to_string(n) + ": " + (pass ? "PASS" : "FAIL") + "\n" + dipole_summary(b);
    out.exit_code = pass ? kExitOk : kExitThresholdBreach;
    return out;
}

}  // namespace tdlpt
