#include "tdlpt/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tdlpt {

GroundState harmonic_ground_state(GridPtr grid) {
    const double log_pi = std::log(std::numbers::pi);
    auto phi0 = ComplexField::from_function(grid, [&](double x) { return 0.5 * x * x + 0.25 * log_pi; });
    auto psi0 = ComplexField::from_function(grid, [&](double x) { return std::exp(-0.5 * x * x - 0.25 * log_pi); });
    ComplexField measure(grid);
    for (std::size_t k = 0; k < measure.size(); ++k) measure[k] = psi0[k] * psi0[k];
    return {std::move(psi0), std::move(phi0), 0.5, std::move(measure)};
}

GroundState hydrogen_ground_state(GridPtr grid) {
    const double log_pi = std::log(std::numbers::pi);
    auto phi0 = ComplexField::from_function(grid, [&](double r) { return r + 0.5 * log_pi; });
    auto psi0 = ComplexField::from_function(grid, [](double r) { return std::exp(-r) / std::sqrt(std::numbers::pi); });
    auto measure = ComplexField::from_function(grid, [](double r) { return 4.0 * r * r * std::exp(-2.0 * r); });
    return {std::move(psi0), std::move(phi0), -0.5, std::move(measure)};
}

double riccati_residual(const GroundState& gs, const std::function<double(double)>& potential, int dimension) {
    const RadialGrid& grid = gs.phi0.grid();
    const double h = grid.dr();
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
        const double r = grid.point(k);
        const double fm = gs.phi0[k - 1].real();
        const double f0 = gs.phi0[k].real();
        const double fp = gs.phi0[k + 1].real();
        const double d1 = (fp - fm) / (2.0 * h);
        const double d2 = (fp - 2.0 * f0 + fm) / (h * h);
        const double lap = d2 + (dimension - 1) * d1 / r;
        worst = std::max(worst, std::abs(lap - d1 * d1 - 2.0 * (gs.energy - potential(r))));
    }
    return worst;
}

// ---------------------------------------------------------------------------

void FieldSeries::push(double t, std::span<const cplx> values) {
    if (values.size() != grid->size()) throw std::invalid_argument("FieldSeries: sample length mismatch");
    if (!times.empty() && !(t > times.back())) throw std::invalid_argument("FieldSeries: times must increase");
    times.push_back(t);
    samples.emplace_back(values.begin(), values.end());
}

ComplexField FieldSeries::field(std::size_t k) const { return ComplexField(grid, samples.at(k)); }

ComplexField assemble_pseudopotential(int order, std::span<const ComplexField> phases) {
    if (order < 2) throw std::invalid_argument("gradient pseudopotentials start at order 2");
    if (phases.size() < static_cast<std::size_t>(order - 1)) {
        throw std::invalid_argument("pseudopotential needs all lower-order phases");
    }
    const RadialGrid& grid = phases.front().grid();
    std::vector<std::vector<cplx>> grads;
    for (int k = 1; k < order; ++k) {
        require_same_grid(grid, phases[k - 1].grid(), "assemble_pseudopotential");
        grads.push_back(first_derivative(grid, phases[k - 1].values()));
    }
    ComplexField q(phases.front().grid_ptr());
    for (int k = 1; k < order; ++k) {
        const auto& a = grads[order - k - 1];
        const auto& b = grads[k - 1];
        for (std::size_t i = 0; i < q.size(); ++i) q[i] -= 0.5 * a[i] * b[i];
    }
    return q;
}

cplx instantaneous_shift(const ComplexField& q, const GroundState& gs, const ComplexField& measure) {
    require_same_grid(q.grid(), gs.psi0.grid(), "instantaneous_shift");
    return quadrature(q, measure);
}

cplx instantaneous_shift(const ComplexField& q, const GroundState& gs) {
    return instantaneous_shift(q, gs, gs.measure);
}

cplx ground_state_expectation(const ComplexField& f, const GroundState& gs) { return quadrature(f, gs.measure); }

// ---------------------------------------------------------------------------

void ShiftSeries::validate() const {
    if (times.size() != values.size()) throw std::invalid_argument("ShiftSeries: length mismatch");
    for (std::size_t k = 1; k < times.size(); ++k) {
        if (!(times[k] > times[k - 1])) throw std::invalid_argument("ShiftSeries: times must increase strictly");
    }
    for (const auto& v : values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw std::invalid_argument("ShiftSeries: non-finite value");
        }
    }
}

cplx ShiftSeries::at(double t) const {
    if (times.empty()) throw std::invalid_argument("ShiftSeries: empty");
    if (t <= times.front()) return values.front();
    if (t >= times.back()) return values.back();
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const auto k = static_cast<std::size_t>(it - times.begin());
    const double w = (t - times[k - 1]) / (times[k] - times[k - 1]);
    return (1.0 - w) * values[k - 1] + w * values[k];
}

cplx dynamic_shift(const ShiftSeries& series, double t0, double length) {
    if (!(length > 0.0)) throw std::invalid_argument("dynamic_shift: window length must be positive");
    if (series.times.size() < 2) throw std::invalid_argument("dynamic_shift: need at least two samples");
    const double slack = 1e-9 * std::max(1.0, std::abs(series.times.back()));
    double a = t0 - 0.5 * length;
    double b = t0 + 0.5 * length;
    if (a < series.times.front() - slack || b > series.times.back() + slack) {
        throw std::out_of_range("dynamic_shift: window lies outside the series time span");
    }
    a = std::max(a, series.times.front());
    b = std::min(b, series.times.back());

    double t_prev = a;
    cplx v_prev = series.at(a);
    cplx sum = 0.0;
    auto it = std::upper_bound(series.times.begin(), series.times.end(), a);
    for (; it != series.times.end() && *it < b; ++it) {
        const auto k = static_cast<std::size_t>(it - series.times.begin());
        sum += 0.5 * (*it - t_prev) * (v_prev + series.values[k]);
        t_prev = *it;
        v_prev = series.values[k];
    }
    sum += 0.5 * (b - t_prev) * (v_prev + series.at(b));
    return sum / length;
}

cplx dynamic_shift(const ShiftSeries& series, const TimeWindow& window) {
    return dynamic_shift(series, window.t0, window.length);
}

// ---------------------------------------------------------------------------

double expectation_evolution_residual(std::span<const double> times, std::span<const cplx> phi_expectation,
                                      std::span<const cplx> q_expectation) {
    const std::size_t n = times.size();
    if (n < 3) throw std::invalid_argument("expectation residual needs at least three time samples");
    if (phi_expectation.size() != n || q_expectation.size() != n) {
        throw std::invalid_argument("expectation residual: series length mismatch");
    }
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const cplx rate = (phi_expectation[k + 1] - phi_expectation[k - 1]) / (times[k + 1] - times[k - 1]);
        worst = std::max(worst, std::abs(kI * rate - q_expectation[k]));
    }
    return worst;
}

double expectation_evolution_residual(const FieldSeries& phi_n, const FieldSeries& q_n, const GroundState& gs) {
    if (phi_n.times != q_n.times) throw std::invalid_argument("expectation residual: time meshes differ");
    require_same_grid(*phi_n.grid, gs.measure.grid(), "expectation residual");
    require_same_grid(*q_n.grid, gs.measure.grid(), "expectation residual");
    std::vector<cplx> phi(phi_n.size());
    std::vector<cplx> q(q_n.size());
    const RadialGrid& grid = *phi_n.grid;
    std::vector<cplx> tmp(grid.size());
    for (std::size_t k = 0; k < phi_n.size(); ++k) {
        for (std::size_t i = 0; i < tmp.size(); ++i) tmp[i] = phi_n.samples[k][i] * gs.measure[i];
        phi[k] = integrate(grid, tmp);
        for (std::size_t i = 0; i < tmp.size(); ++i) tmp[i] = q_n.samples[k][i] * gs.measure[i];
        q[k] = integrate(grid, tmp);
    }
    return expectation_evolution_residual(phi_n.times, phi, q);
}

// ---------------------------------------------------------------------------

GaugeCheck gauge_rotation_identity_check(const GaugeRoutes& routes, const GroundState& gs,
                                         const ComplexField& test_field, double t, double dt) {
    const std::size_t n = test_field.size();
    require_same_grid(test_field.grid(), gs.psi0.grid(), "gauge_rotation_identity_check");
    if (routes.generator.size() != n || routes.shifted_hamiltonian.size() != n || routes.embedding.size() != n) {
        throw std::invalid_argument("gauge routes do not match the test field");
    }
    if (!(t >= 0.0) || !(dt > 0.0)) throw std::invalid_argument("gauge check needs t >= 0 and dt > 0");
    const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(t / dt - 1e-9)));
    const double h = t / static_cast<double>(steps);

    ComplexField direct = test_field;
    ComplexField rotated = test_field;
    if (t > 0.0) {
        BoundaryCondition lower = routes.generator_lower;
        if (lower.kind == BoundaryCondition::Kind::Dirichlet) lower.value = test_field[0];
        CrankNicolsonStepper a(routes.generator, h, lower, BoundaryCondition::dirichlet(test_field[n - 1]));

        std::vector<cplx> v(n);
        for (std::size_t k = 0; k < n; ++k) v[k] = routes.embedding[k] * test_field[k];
        CrankNicolsonStepper b(routes.shifted_hamiltonian, h, BoundaryCondition::dirichlet(v.front()),
                               BoundaryCondition::dirichlet(v.back()));
        for (std::size_t s = 0; s < steps; ++s) {
            a.step(direct.values(), {});
            b.step(v, {});
        }
        for (std::size_t k = 0; k < n; ++k) {
            rotated[k] = routes.embedding[k] != 0.0 ? v[k] / routes.embedding[k] : cplx(0.0);
        }
        if (!direct.all_finite()) throw NumericalError("gauge check: direct route diverged");
    }

    const auto w = test_field.grid().weights();
    double diff = 0.0;
    double norm = 0.0;
    // Edge values are fixed by the closures, not propagated.
    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (!(gs.psi0[k].real() > 1e-8)) continue;
        diff += w[k] * std::norm(direct[k] - rotated[k]);
        norm += w[k] * std::norm(rotated[k]);
    }
    const double deviation = norm > 0.0 ? std::sqrt(diff / norm) : std::sqrt(diff);
    return {deviation, std::move(direct), std::move(rotated)};
}

}  // namespace tdlpt
