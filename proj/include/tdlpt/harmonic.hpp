#pragma once

// Driven 1-D harmonic oscillator H = -1/2 d^2/dx^2 + x^2/2 + lambda g(t) x.
// The phase series terminates: Phi_1 = c1(t) x, Phi_2 = c2(t), Phi_n>2 = 0.

#include <vector>

#include "tdlpt/hierarchy.hpp"
#include "tdlpt/numerics.hpp"
#include "tdlpt/pulse.hpp"

namespace tdlpt {

/// c1, c2 on the uniform mesh times[k] = k * step.
struct HoCorrections {
    std::vector<double> times;
    std::vector<cplx> c1;  // Phi_1(x, t) = c1(t) x
    std::vector<cplx> c2;  // Phi_2(t), no x dependence
    PulseProfile pulse;
};

/// Cumulative evaluation on [0, t_end] with an even number of steps no
/// longer than max_step. Cost is linear in the number of steps.
HoCorrections ho_corrections(const PulseProfile& pulse, double t_end, double max_step);

/// -i int_0^t g(s) exp(-i(t-s)) ds, or -i W(t) for the adiabatic kind.
cplx ho_phi1(const PulseProfile& pulse, double t, double max_step = 1e-3);
/// -i/2 int_0^t exp(-2is) [int_0^s exp(i tau) g(tau) dtau]^2 ds.
cplx ho_phi2(const PulseProfile& pulse, double t, double max_step = 1e-3);

/// W(t) = (i cos wt + w sin wt) / (w^2 - 1).
cplx adiabatic_w(double omega, double t);

/// exp(Phi0 + lambda Phi1 + lambda^2 Phi2) on the grid.
ComplexField ho_tdlpt_wavefunction(cplx c1, cplx c2, double lambda, double t, GridPtr grid);

/// Coherent-state solution psi0(x - q) exp(i p (x - q) + i gamma); q, p and
/// the phase gamma follow the classical driven oscillator, integrated by RK4.
ComplexField ho_exact_solution(const PulseProfile& pulse, double lambda, GridPtr grid, double t,
                               double max_step = 1e-3);

/// max |Q3| = max |grad Phi1 . grad Phi2| over the grid and the samples.
/// `x2_perturbation` adds eps * x^2 to Phi2 to probe the assembler.
double ho_truncation_check(const PulseProfile& pulse, const std::vector<double>& t_samples, GridPtr grid,
                           double max_step = 1e-3, double x2_perturbation = 0.0);

/// One-period average of W(t)^2 / 2 by quadrature (real part).
/// Throws std::invalid_argument when |w - 1| < 1e-6.
double ho_ac_shift(double omega);
/// 1 / (4 (w^2 - 1))
double ho_ac_shift_closed_form(double omega);

/// Generator -1/2 d^2 + x d and the discrete H0 - E0 whose null vector is
/// the sampled ground state; embedding is psi0.
GaugeRoutes harmonic_gauge_routes(GridPtr grid);

}  // namespace tdlpt
