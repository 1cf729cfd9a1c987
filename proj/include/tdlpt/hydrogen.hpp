#pragma once

// Hydrogen 1s driven by -lambda g(t) z. In hybrid coordinates (r, phi, z)
// the phase corrections separate into radial channels:
//   Phi_1 = z e^r / r^2 * phi_11(r, t)
//   Phi_2 = e^r / r * (phi_20 + z^2 / r^2 * phi_22)
// each obeying a sourced radial equation with Dirichlet edges.

#include <cstddef>
#include <utility>
#include <vector>

#include "tdlpt/hierarchy.hpp"
#include "tdlpt/numerics.hpp"
#include "tdlpt/pulse.hpp"

namespace tdlpt {

/// Defaults for the hydrogen runs (atomic units).
struct HydrogenDefaults {
    static constexpr double omega = 0.056;
    static constexpr double lambda = 0.03;
    static constexpr double r_min = 1e-6;
    static constexpr double r_max = 40.0;
    static constexpr double dr = 0.1;
    static constexpr double dt = 1e-3;
    static constexpr std::size_t stride = 500;
};

/// Radial factor phi_{n,l}(r, t) of a phase correction.
struct CorrectionChannel {
    int order = 1;
    int ell = 1;
    FieldSeries series;
};

/// -1/2 d^2/dr^2 + (-1/r + l(l+1)/(2 r^2) + 1/2); edge rows are overwritten
/// by the Dirichlet closure in the stepper.
TridiagonalOperator radial_channel_hamiltonian(const RadialGrid& grid, int ell);

/// r e^-r on the interior nodes, zero on both edges.
std::vector<double> s_wave_weight(const RadialGrid& grid);

/// Channel operator for the second-order channels. The Coulomb term is
/// replaced by the discrete Riccati potential (D2 m)/(2m) of m = r e^-r, so
/// m is an exact null vector of the l = 0 operator and the l = 2 operator
/// differs from it by exactly 3/r^2. Differs from the analytic form at O(dr^2).
TridiagonalOperator second_order_channel_hamiltonian(const RadialGrid& grid, int ell);

/// Propagates i d/dt phi = H_1 phi - r^2 e^-r g(t) from phi = 0 to t_end
/// (defaults to the end of the pulse). The time step is shrunk so that an
/// integer number of steps lands on t_end; samples are stored every
/// `stride` steps plus the final step. Throws NumericalError with the step
/// index if the state turns non-finite.
CorrectionChannel propagate_phi11(GridPtr grid, const PulseProfile& pulse, double dt, std::size_t stride,
                                  double t_end = -1.0);

struct SecondOrderChannels {
    CorrectionChannel phi11;
    CorrectionChannel phi20;
    CorrectionChannel phi22;
};

/// Co-propagates phi_11, then phi_22 (its source needs only phi_11), then
/// phi_20 (its source needs phi_22 and phi_11^2) within each step.
SecondOrderChannels propagate_through_second_order(GridPtr grid, const PulseProfile& pulse, double dt,
                                                   std::size_t stride, double t_end = -1.0);

/// Second order from a stored phi_11 channel; phi_11 at step midpoints is
/// interpolated linearly between samples. Returns (phi_20, phi_22) sampled
/// on phi11's time mesh.
std::pair<CorrectionChannel, CorrectionChannel> propagate_second_order(const CorrectionChannel& phi11, double dt);

/// Parts of the second-order sources that come from phi_11:
///   s20 = -e^r phi^2 / (2 r^3)
///   s22 = e^r [phi (phi + phi') / r^2 - (phi + phi')^2 / (2 r)]
/// with e^r folded into the decaying products. Edge entries are zero.
void second_order_sources(const RadialGrid& grid, std::span<const cplx> phi11, std::span<cplx> s20,
                          std::span<cplx> s22);

/// E_2(t) = <-1/2 grad Phi_1 . grad Phi_1>_psi0 reduced to a radial integral:
///   -2 int [phi^2/r^2 - (2/3) phi P / r + P^2 / 3] dr,  P = phi + phi'.
cplx second_order_shift(const RadialGrid& grid, std::span<const cplx> phi11);

/// <Phi_2>_psi0 = 4 int r e^-r (phi_20 + phi_22 / 3) dr, weighted by s_wave_weight.
cplx second_order_phase_expectation(const RadialGrid& grid, std::span<const cplx> phi20,
                                    std::span<const cplx> phi22);

/// First-order induced dipole -(8/3) lambda Re int phi_11 e^-r r^2 dr.
double dipole_from_channel(const RadialGrid& grid, std::span<const cplx> phi11, double lambda);

struct DipoleSeries {
    std::vector<double> times;
    std::vector<double> values;
};

DipoleSeries dipole_moment(const CorrectionChannel& phi11, const PulseProfile& pulse);

/// E_2(t) at every stored sample of phi_11.
ShiftSeries hydrogen_shift_pipeline(const CorrectionChannel& phi11, const GroundState& gs);

/// How the mean-square field in alpha = -2 Re E2 / <g^2> is taken.
enum class FieldNormalization {
    Carrier,     // envelope held at its peak value: <cos^2> over the window
    WindowMean,  // <g(t)^2> of the actual pulse over the window
};

double window_mean_square(const PulseProfile& pulse, const TimeWindow& window, FieldNormalization mode);

/// Throws std::invalid_argument when the window mean square vanishes.
double polarizability(cplx shift, const PulseProfile& pulse, const TimeWindow& window,
                      FieldNormalization mode = FieldNormalization::Carrier);

enum class TailOrder { Constant, Linear, Full };

/// i r^2 e^-r int_0^t h(xi) g(s) ds with xi = 1 + i(s - t)/r.
cplx asymptotic_phi11(const PulseProfile& pulse, double r, double t, TailOrder order, double ds = 0.05);

struct TailCheck {
    std::vector<double> radii;
    std::vector<cplx> numeric;
    std::vector<cplx> asymptotic;
    std::vector<double> relative_error;
    std::vector<bool> excluded;  // branch cut of log(xi) touched
};

/// Compares the stored channel (sample nearest to t, probe radii snapped to
/// the nearest grid node) with the large-r expansion at each probe radius.
TailCheck asymptotic_tail_check(const CorrectionChannel& phi11, const PulseProfile& pulse,
                                const std::vector<double>& r_probe, double t, TailOrder order = TailOrder::Full);

/// Exponent alpha of phi ~ r^alpha near the origin, fitted over the first
/// `points` interior nodes with a linear-in-r correction term.
double small_r_exponent(const RadialGrid& grid, std::span<const cplx> phi, std::size_t points = 10);

/// p-channel gauge routes: the generator acts on f with Phi = z f(r),
///   L_f = -1/2 d^2 + (1 - 2/r) d + 1/r,
/// and the rotated route propagates u = r^2 e^-r f under H_1 + 1/2.
/// The direct route closes the origin with the regularity ratio
/// f(0) = f(dr) / (1 + dr/2).
GaugeRoutes hydrogen_gauge_routes(GridPtr grid);

/// Partial derivatives of a field in hybrid coordinates at one point.
struct HybridPartials {
    double f_r = 0.0;
    double f_z = 0.0;
    double f_rr = 0.0;
    double f_zz = 0.0;
    double f_rz = 0.0;
    double f_phi = 0.0;
    double f_phiphi = 0.0;
};

double hybrid_laplacian(const HybridPartials& f, double r, double z);
double hybrid_gradient_dot(const HybridPartials& f, const HybridPartials& g, double r, double z);

}  // namespace tdlpt
