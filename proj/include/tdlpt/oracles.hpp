#pragma once

// Reference solvers used only for validation. Operators here are assembled
// and solved with their own code so agreement with the hierarchy modules is
// not circular.

#include <cstddef>
#include <functional>
#include <vector>

#include "tdlpt/hierarchy.hpp"
#include "tdlpt/numerics.hpp"
#include "tdlpt/pulse.hpp"

namespace tdlpt {

/// p-wave part of the order-lambda Dyson wavefunction, reduced radial form
/// chi(r, t): i d/dt chi = H_{l=1} chi - g(t) r^2 e^-r e^{it/2} / sqrt(pi),
/// chi(0) = 0, with the unshifted hydrogen Hamiltonian. The hierarchy
/// channel maps onto it as chi = e^{it/2} phi_11 / sqrt(pi).
FieldSeries dyson_first_order(GridPtr grid, const PulseProfile& pulse, double dt, std::size_t stride,
                              double t_end = -1.0);

/// e^{it/2} phi_11 / sqrt(pi) for every stored sample.
FieldSeries dyson_image_of_phi11(const FieldSeries& phi11);

/// max over common samples of ||a - b|| / ||b|| (trapezoid L2).
double relative_l2_distance(const FieldSeries& a, const FieldSeries& b);

/// Reduced radial functions u_l(r), l = 0..L_max, of the m = 0 wavefunction.
struct PartialWaveState {
    GridPtr grid;
    std::vector<std::vector<cplx>> channels;

    double norm() const;
};

struct TdseDipole {
    std::vector<double> times;
    std::vector<double> values;  // -<z>
    double norm_drift = 0.0;
};

/// Coupled partial waves for H0 - lambda g(t) z, starting from the discrete
/// 1s state of the oracle's own l = 0 operator. Strang splitting: half
/// coupling, Crank-Nicolson atomic step per channel, half coupling. The
/// coupling is split into even and odd adjacent pairs, each applied as exact
/// 2x2 Cayley rotations. Throws NumericalError if the norm drifts by more
/// than 1e-4.
TdseDipole full_tdse_dipole(GridPtr grid, const PulseProfile& pulse, int l_max, double dt, std::size_t stride,
                            double t_end = -1.0);

/// <l|cos theta|l+1> for m = 0.
double dipole_coupling(int ell);

/// -i/2 int_0^t int_0^s int_0^s exp(-2is) exp(i tau) exp(i tau') g(tau) g(tau')
/// by three nested composite Simpson levels with n_sub intervals each.
/// Cost is O(n_sub^3) by design. Throws std::invalid_argument for n_sub < 16.
cplx nested_quadrature_phi2(const PulseProfile& pulse, double t, std::size_t n_sub);

/// Cycle-averaged second-order shift for a unit cos(wt) field from one
/// intermediate state: -(1/2) |<k|x|0>|^2 dE / (dE^2 - w^2).
double sum_over_states_shift(double matrix_element_sq, double level_gap, double omega);

/// <-1/2 |grad Phi_1|^2>_psi0 with Phi_1 = z e^r phi(r) / r^2, by direct
/// quadrature over (r, cos theta) and Cartesian finite-difference gradients.
/// Independent check of the radial reduction used by the hydrogen module.
cplx brute_force_second_order_shift(const std::function<cplx(double)>& phi, double r_max, std::size_t n_r,
                                    std::size_t n_mu);

}  // namespace tdlpt
