#pragma once

// Order-by-order machinery of the logarithmic (phase) perturbation series:
// pseudopotentials, ground-state expectation values, instantaneous and
// windowed energy shifts, and the expectation-value evolution law.

#include <functional>
#include <span>
#include <vector>

#include "tdlpt/numerics.hpp"
#include "tdlpt/pulse.hpp"

namespace tdlpt {

/// Unperturbed ground state psi0 = exp(-phi0) with its integration measure
/// (psi0^2 times the volume-element Jacobian reduced to the grid variable).
struct GroundState {
    ComplexField psi0;
    ComplexField phi0;
    double energy = 0.0;
    ComplexField measure;
};

/// 1-D oscillator: phi0 = x^2/2 + ln(pi)/4, E0 = 1/2.
GroundState harmonic_ground_state(GridPtr grid);
/// Hydrogen 1s on a radial grid: psi0 = exp(-r)/sqrt(pi), E0 = -1/2,
/// measure 4 pi r^2 psi0^2.
GroundState hydrogen_ground_state(GridPtr grid);

/// Max over interior points of |lap(phi0) - |grad phi0|^2 - 2(E0 - V0)|
/// with the radial Laplacian f'' + (dim-1)/r f'.
double riccati_residual(const GroundState& gs, const std::function<double(double)>& potential,
                        int dimension);

/// Phase corrections Phi_k sampled in time on one grid.
struct FieldSeries {
    GridPtr grid;
    std::vector<double> times;
    std::vector<std::vector<cplx>> samples;

    std::size_t size() const { return times.size(); }
    void push(double t, std::span<const cplx> values);
    ComplexField field(std::size_t k) const;
};

/// Q_n(., t) for a fixed order.
struct PseudopotentialSeries {
    int order = 1;
    std::function<ComplexField(double)> evaluator;

    ComplexField operator()(double t) const { return evaluator(t); }
};

/// Q_n = -1/2 sum_{k=1}^{n-1} grad Phi_{n-k} . grad Phi_k on a 1-D grid.
/// phases[k-1] holds Phi_k; at least order-1 entries are required.
ComplexField assemble_pseudopotential(int order, std::span<const ComplexField> phases);

/// Instantaneous energy shift E_n(t) = <Q_n(., t)>_psi0.
cplx instantaneous_shift(const ComplexField& q, const GroundState& gs);
cplx instantaneous_shift(const ComplexField& q, const GroundState& gs, const ComplexField& measure);

/// <f>_psi0 for any field (same quadrature as the energy shifts).
cplx ground_state_expectation(const ComplexField& f, const GroundState& gs);

struct ShiftSeries {
    std::vector<double> times;
    std::vector<cplx> values;
    int order = 2;

    /// Strictly increasing times and finite values.
    void validate() const;
    cplx at(double t) const;  // linear interpolation
};

/// (1/T) * integral of E_n over [t0 - T/2, t0 + T/2]; trapezoid on the stored
/// samples with linear interpolation at the window edges.
cplx dynamic_shift(const ShiftSeries& series, double t0, double length);
cplx dynamic_shift(const ShiftSeries& series, const TimeWindow& window);

/// max over interior samples of |i d<Phi_n>/dt - <Q_n>| with centred
/// differences in time. Requires at least three samples.
double expectation_evolution_residual(std::span<const double> times, std::span<const cplx> phi_expectation,
                                      std::span<const cplx> q_expectation);
double expectation_evolution_residual(const FieldSeries& phi_n, const FieldSeries& q_n, const GroundState& gs);

/// The two discretised generators of the correction dynamics:
/// `generator` acts on phase corrections u, `shifted_hamiltonian` on the
/// embedded wavefunction-like field v = embedding * u.
struct GaugeRoutes {
    TridiagonalOperator generator;
    TridiagonalOperator shifted_hamiltonian;
    std::vector<double> embedding;
    /// Lower edge of the direct route: Dirichlet holds the test field's edge
    /// value, Ratio imposes u0 = value * u1.
    BoundaryCondition generator_lower = BoundaryCondition::dirichlet();
};

struct GaugeCheck {
    double deviation = 0.0;  // relative L2 on the psi0 > 1e-8 sub-grid
    ComplexField direct;
    ComplexField rotated;
};

/// Propagates test_field to time t (a) directly under the generator and
/// (b) as embedding^-1 [exp(-i t K) embedding test_field] and compares them
/// where psi0 > 1e-8.
GaugeCheck gauge_rotation_identity_check(const GaugeRoutes& routes, const GroundState& gs,
                                         const ComplexField& test_field, double t, double dt);

}  // namespace tdlpt
