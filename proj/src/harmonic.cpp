#include "tdlpt/harmonic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tdlpt {

namespace {

std::size_t even_steps(double span, double max_step) {
    if (!(max_step > 0.0)) throw std::invalid_argument("quadrature step must be positive");
    auto n = static_cast<std::size_t>(std::ceil(span / max_step - 1e-9));
    n = std::max<std::size_t>(n, 2);
    return n + n % 2;
}

// Running integral of samples f_k on a uniform mesh: Simpson over each
// interval pair, and the quadratic-interpolant partial rule
// h (5 f0 + 8 f1 - f2) / 12 at odd nodes.
std::vector<cplx> cumulative_simpson(const std::vector<cplx>& f, double h) {
    std::vector<cplx> out(f.size());
    for (std::size_t k = 0; k + 2 < f.size(); k += 2) {
        out[k + 1] = out[k] + h * (5.0 * f[k] + 8.0 * f[k + 1] - f[k + 2]) / 12.0;
        out[k + 2] = out[k] + h * (f[k] + 4.0 * f[k + 1] + f[k + 2]) / 3.0;
    }
    return out;
}

}  // namespace

cplx adiabatic_w(double omega, double t) {
    return cplx(omega * std::sin(omega * t), std::cos(omega * t)) / (omega * omega - 1.0);
}

HoCorrections ho_corrections(const PulseProfile& pulse, double t_end, double max_step) {
    if (!(t_end >= 0.0)) throw std::invalid_argument("ho_corrections: t_end must be non-negative");
    HoCorrections out;
    out.pulse = pulse;
    const std::size_t n = t_end > 0.0 ? even_steps(t_end, max_step) : 2;
    const double h = t_end > 0.0 ? t_end / static_cast<double>(n) : 0.0;
    out.times.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) out.times[k] = static_cast<double>(k) * h;

    std::vector<cplx> c1(n + 1);
    if (pulse.kind() == PulseProfile::Kind::AdiabaticMonochromatic) {
        for (std::size_t k = 0; k <= n; ++k) c1[k] = -kI * adiabatic_w(pulse.omega(), out.times[k]);
    } else {
        // c1(t) = -i exp(-it) A(t),  A(t) = int_0^t exp(is) g(s) ds
        std::vector<cplx> f(n + 1);
        for (std::size_t k = 0; k <= n; ++k) f[k] = std::polar(1.0, out.times[k]) * pulse.g(out.times[k]);
        const auto a = cumulative_simpson(f, h);
        for (std::size_t k = 0; k <= n; ++k) c1[k] = -kI * std::polar(1.0, -out.times[k]) * a[k];
    }
    // Phi2(t) = -i int_0^t Q2 ds with Q2 = -c1^2 / 2 (L annihilates constants).
    std::vector<cplx> q2(n + 1);
    for (std::size_t k = 0; k <= n; ++k) q2[k] = -0.5 * c1[k] * c1[k];
    auto c2 = cumulative_simpson(q2, h);
    for (auto& v : c2) v *= -kI;
    out.c1 = std::move(c1);
    out.c2 = std::move(c2);
    return out;
}

cplx ho_phi1(const PulseProfile& pulse, double t, double max_step) {
    if (pulse.kind() == PulseProfile::Kind::AdiabaticMonochromatic) return -kI * adiabatic_w(pulse.omega(), t);
    if (t <= 0.0) return 0.0;
    return ho_corrections(pulse, t, max_step).c1.back();
}

cplx ho_phi2(const PulseProfile& pulse, double t, double max_step) {
    if (t <= 0.0) return 0.0;
    return ho_corrections(pulse, t, max_step).c2.back();
}

ComplexField ho_tdlpt_wavefunction(cplx c1, cplx c2, double lambda, double t, GridPtr grid) {
    const double quarter_log_pi = 0.25 * std::log(std::numbers::pi);
    return ComplexField::from_function(std::move(grid), [&](double x) {
        const cplx phase = -0.5 * x * x - quarter_log_pi - kI * 0.5 * t + lambda * c1 * x + lambda * lambda * c2;
        return std::exp(phase);
    });
}

ComplexField ho_exact_solution(const PulseProfile& pulse, double lambda, GridPtr grid, double t, double max_step) {
    constexpr double kE0 = 0.5;
    using State = std::array<double, 3>;  // q, p, gamma without the -E0 t part
    auto rhs = [&](double s, const State& y) -> State {
        const double force = lambda * pulse.g(s);
        return {y[1], -y[0] - force, 0.5 * y[1] * y[1] - 0.5 * y[0] * y[0] - force * y[0]};
    };
    State y{0.0, 0.0, 0.0};
    if (t > 0.0) {
        const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(t / max_step - 1e-9)));
        const double h = t / static_cast<double>(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double s = static_cast<double>(k) * h;
            const State k1 = rhs(s, y);
            State tmp;
            for (int i = 0; i < 3; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
            const State k2 = rhs(s + 0.5 * h, tmp);
            for (int i = 0; i < 3; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
            const State k3 = rhs(s + 0.5 * h, tmp);
            for (int i = 0; i < 3; ++i) tmp[i] = y[i] + h * k3[i];
            const State k4 = rhs(s + h, tmp);
            for (int i = 0; i < 3; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    const double q = y[0];
    const double p = y[1];
    const double gamma = y[2] - kE0 * t;
    const double quarter_log_pi = 0.25 * std::log(std::numbers::pi);
    return ComplexField::from_function(std::move(grid), [&](double x) {
        const double d = x - q;
        return std::exp(cplx(-0.5 * d * d - quarter_log_pi, p * d + gamma));
    });
}

double ho_truncation_check(const PulseProfile& pulse, const std::vector<double>& t_samples, GridPtr grid,
                           double max_step, double x2_perturbation) {
    double worst = 0.0;
    for (double t : t_samples) {
        const cplx c1 = ho_phi1(pulse, t, max_step);
        const cplx c2 = ho_phi2(pulse, t, max_step);
        std::array<ComplexField, 2> phases{
            ComplexField::from_function(grid, [&](double x) { return c1 * x; }),
            ComplexField::from_function(grid, [&](double x) { return c2 + x2_perturbation * x * x; })};
        const ComplexField q3 = assemble_pseudopotential(3, phases);
        worst = std::max(worst, q3.max_abs());
    }
    return worst;
}

double ho_ac_shift_closed_form(double omega) { return 1.0 / (4.0 * (omega * omega - 1.0)); }

double ho_ac_shift(double omega) {
    if (std::abs(omega - 1.0) < 1e-6) throw std::invalid_argument("ho_ac_shift: driving at resonance");
    if (!(omega > 0.0)) throw std::invalid_argument("ho_ac_shift: frequency must be positive");
    constexpr std::size_t kIntervals = 4096;
    const double period = 2.0 * std::numbers::pi / omega;
    const double h = period / kIntervals;
    std::vector<cplx> f(kIntervals + 1);
    for (std::size_t k = 0; k <= kIntervals; ++k) {
        const cplx w = adiabatic_w(omega, static_cast<double>(k) * h);
        f[k] = 0.5 * w * w;
    }
    return (simpson(f, h) / period).real();
}

GaugeRoutes harmonic_gauge_routes(GridPtr grid) {
    GaugeRoutes routes{
        TridiagonalOperator::from_coefficients(
            *grid, [](double) { return cplx(-0.5); }, [](double x) { return cplx(x); }, nullptr),
        TridiagonalOperator(grid->size()),
        {},
    };
    const GroundState gs = harmonic_ground_state(grid);
    routes.embedding.resize(grid->size());
    for (std::size_t k = 0; k < grid->size(); ++k) routes.embedding[k] = gs.psi0[k].real();

    // K = -1/2 D2 + 1/2 (D2 psi0) / psi0: the discrete Riccati potential V0 - E0.
    const double inv_h2 = 1.0 / (grid->dr() * grid->dr());
    TridiagonalOperator& k_op = routes.shifted_hamiltonian;
    const auto& psi = routes.embedding;
    for (std::size_t k = 0; k < grid->size(); ++k) {
        double potential = 0.0;
        if (k > 0 && k + 1 < grid->size() && psi[k] > 1e-200) {
            potential = 0.5 * (psi[k + 1] - 2.0 * psi[k] + psi[k - 1]) * inv_h2 / psi[k];
        } else {
            const double x = grid->point(k);
            potential = 0.5 * x * x - 0.5;
        }
        k_op.sub()[k] = k > 0 ? -0.5 * inv_h2 : 0.0;
        k_op.super()[k] = k + 1 < grid->size() ? -0.5 * inv_h2 : 0.0;
        k_op.diag()[k] = inv_h2 + potential;
    }
    return routes;
}

}  // namespace tdlpt
