#pragma once

#include <string>
#include <vector>

namespace tdlpt {

/// Atomic unit of intensity (W/cm^2) for which the field amplitude is sqrt(I).
inline constexpr double kAtomicIntensityWcm2 = 3.50944506e16;
/// Atomic unit of electric field (V/m).
inline constexpr double kAtomicFieldVm = 5.14220674763e11;

/// Peak field amplitude sqrt(2 I0 / (eps0 c)) in atomic units for I0 in W/cm^2.
double field_amplitude_from_intensity_wcm2(double intensity_wcm2);
/// Same relation for I0 given in atomic intensity units.
double field_amplitude_from_intensity_au(double intensity_au);

/// Temporal field profile g(t) together with the coupling amplitude lambda.
class PulseProfile {
public:
    enum class Kind { Sin2Envelope, AdiabaticMonochromatic, CustomTable };

    /// g(t) = sin^2(wt/2N) cos(wt) on [0, 2N pi/w], zero outside.
    static PulseProfile sin2(double omega, int n_cycles, double lambda);
    /// g(t) = cos(wt) for all t (switched on adiabatically in the past).
    static PulseProfile adiabatic(double omega, double lambda);
    /// Piecewise-linear g through (times, values); zero outside the table.
    static PulseProfile custom(std::vector<double> times, std::vector<double> values, double lambda);
    /// g == value on [0, duration].
    static PulseProfile constant(double value, double duration, double lambda);

    Kind kind() const { return kind_; }
    double omega() const { return omega_; }
    int n_cycles() const { return n_cycles_; }
    double lambda() const { return lambda_; }
    double scale() const { return scale_; }

    double g(double t) const;
    /// Envelope value; 1 for the adiabatic kind, |g| is not implied for tables.
    double envelope(double t) const;

    /// End of the field (T_f). Adiabatic pulses report one optical period.
    double duration() const;
    /// Time of peak envelope, N pi / w for the sin^2 kind.
    double peak_time() const;
    double period() const;

    PulseProfile with_lambda(double lambda) const;
    PulseProfile scaled(double factor) const;
    std::string describe() const;

private:
    Kind kind_ = Kind::Sin2Envelope;
    double omega_ = 0.0;
    int n_cycles_ = 0;
    double lambda_ = 0.0;
    double scale_ = 1.0;
    std::vector<double> times_;
    std::vector<double> values_;
};

/// Averaging window [t0 - T/2, t0 + T/2].
struct TimeWindow {
    double t0 = 0.0;
    double length = 0.0;

    double begin() const { return t0 - 0.5 * length; }
    double end() const { return t0 + 0.5 * length; }
};

/// One optical cycle centred on the envelope peak.
TimeWindow one_cycle_at_peak(const PulseProfile& pulse);
/// The whole pulse, t0 = T_f / 2, T = T_f.
TimeWindow full_pulse(const PulseProfile& pulse);

}  // namespace tdlpt
