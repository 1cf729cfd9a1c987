#include "tdlpt/hydrogen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace tdlpt {

namespace {

struct StepPlan {
    std::size_t steps;
    double h;
};

StepPlan plan_steps(double t_end, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
    if (!(t_end > 0.0)) throw std::invalid_argument("propagation end time must be positive");
    const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
    return {steps, t_end / static_cast<double>(steps)};
}

double resolve_end(const PulseProfile& pulse, double t_end) { return t_end > 0.0 ? t_end : pulse.duration(); }

// -r^2 e^-r, the first-order source profile (times g(t)); zero on the edges.
std::vector<cplx> first_order_profile(const RadialGrid& grid) {
    std::vector<cplx> p(grid.size());
    for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
        const double r = grid.point(k);
        p[k] = -r * r * std::exp(-r);
    }
    return p;
}

void require_finite(std::span<const cplx> values, std::size_t step, const char* what) {
    for (const auto& v : values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            std::ostringstream msg;
            msg << what << ": non-finite value at time step " << step;
            throw NumericalError(msg.str());
        }
    }
}

CorrectionChannel make_channel(int order, int ell, GridPtr grid) {
    CorrectionChannel ch;
    ch.order = order;
    ch.ell = ell;
    ch.series.grid = std::move(grid);
    return ch;
}

}  // namespace

TridiagonalOperator radial_channel_hamiltonian(const RadialGrid& grid, int ell) {
    if (ell < 0) throw std::invalid_argument("angular momentum must be non-negative");
    const double centrifugal = 0.5 * ell * (ell + 1);
    return TridiagonalOperator::from_coefficients(
        grid, [](double) { return cplx(-0.5); }, nullptr,
        [centrifugal](double r) { return cplx(-1.0 / r + centrifugal / (r * r) + 0.5); });
}

std::vector<double> s_wave_weight(const RadialGrid& grid) {
    std::vector<double> m(grid.size());
    for (std::size_t k = 1; k + 1 < grid.size(); ++k) m[k] = grid.point(k) * std::exp(-grid.point(k));
    return m;
}

TridiagonalOperator second_order_channel_hamiltonian(const RadialGrid& grid, int ell) {
    if (ell < 0) throw std::invalid_argument("angular momentum must be non-negative");
    TridiagonalOperator op = radial_channel_hamiltonian(grid, ell);
    const std::vector<double> m = s_wave_weight(grid);
    const double inv_h2 = 1.0 / (grid.dr() * grid.dr());
    const double centrifugal = 0.5 * ell * (ell + 1);
    for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
        const double r = grid.point(k);
        const double riccati = 0.5 * (m[k + 1] - 2.0 * m[k] + m[k - 1]) * inv_h2 / m[k];
        op.diag()[k] = inv_h2 + riccati + centrifugal / (r * r);
    }
    return op;
}

CorrectionChannel propagate_phi11(GridPtr grid, const PulseProfile& pulse, double dt, std::size_t stride,
                                  double t_end) {
    if (stride == 0) throw std::invalid_argument("storage stride must be positive");
    const StepPlan plan = plan_steps(resolve_end(pulse, t_end), dt);
    const std::size_t n = grid->size();
    CrankNicolsonStepper stepper(radial_channel_hamiltonian(*grid, 1), plan.h);
    const std::vector<cplx> profile = first_order_profile(*grid);

    CorrectionChannel channel = make_channel(1, 1, grid);
    std::vector<cplx> phi(n);
    std::vector<cplx> source(n);
    channel.series.push(0.0, phi);
    for (std::size_t s = 0; s < plan.steps; ++s) {
        const double g_mid = pulse.g((static_cast<double>(s) + 0.5) * plan.h);
        for (std::size_t k = 0; k < n; ++k) source[k] = g_mid * profile[k];
        stepper.step(phi, source);
        if ((s + 1) % stride == 0 || s + 1 == plan.steps) {
            require_finite(phi, s + 1, "propagate_phi11");
            channel.series.push(static_cast<double>(s + 1) * plan.h, phi);
        }
    }
    return channel;
}

void second_order_sources(const RadialGrid& grid, std::span<const cplx> phi11, std::span<cplx> s20,
                          std::span<cplx> s22) {
    const std::size_t n = grid.size();
    if (phi11.size() != n || s20.size() != n || s22.size() != n) {
        throw std::invalid_argument("second_order_sources: size mismatch");
    }
    const double inv_2h = 0.5 / grid.dr();
    s20[0] = s22[0] = s20[n - 1] = s22[n - 1] = 0.0;
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double r = grid.point(k);
        const double half_growth = std::exp(0.5 * r);
        const cplx d = (phi11[k + 1] - phi11[k - 1]) * inv_2h;
        const cplx a = half_growth * phi11[k];
        const cplx b = half_growth * (phi11[k] + d);
        s20[k] = -a * a / (2.0 * r * r * r);
        s22[k] = a * b / (r * r) - b * b / (2.0 * r);
    }
}

SecondOrderChannels propagate_through_second_order(GridPtr grid, const PulseProfile& pulse, double dt,
                                                   std::size_t stride, double t_end) {
    if (stride == 0) throw std::invalid_argument("storage stride must be positive");
    const StepPlan plan = plan_steps(resolve_end(pulse, t_end), dt);
    const std::size_t n = grid->size();
    CrankNicolsonStepper step11(radial_channel_hamiltonian(*grid, 1), plan.h);
    CrankNicolsonStepper step22(second_order_channel_hamiltonian(*grid, 2), plan.h);
    CrankNicolsonStepper step20(second_order_channel_hamiltonian(*grid, 0), plan.h);
    const std::vector<cplx> profile = first_order_profile(*grid);

    SecondOrderChannels out{make_channel(1, 1, grid), make_channel(2, 0, grid), make_channel(2, 2, grid)};
    std::vector<cplx> phi11(n), phi20(n), phi22(n);
    std::vector<cplx> prev(n), mid(n), src(n), s20(n), s22(n);
    std::vector<double> inv_r2(n);
    for (std::size_t k = 1; k + 1 < n; ++k) inv_r2[k] = 1.0 / (grid->point(k) * grid->point(k));

    out.phi11.series.push(0.0, phi11);
    out.phi20.series.push(0.0, phi20);
    out.phi22.series.push(0.0, phi22);
    for (std::size_t s = 0; s < plan.steps; ++s) {
        const double g_mid = pulse.g((static_cast<double>(s) + 0.5) * plan.h);
        for (std::size_t k = 0; k < n; ++k) src[k] = g_mid * profile[k];
        prev = phi11;
        step11.step(phi11, src);
        for (std::size_t k = 0; k < n; ++k) mid[k] = 0.5 * (prev[k] + phi11[k]);
        second_order_sources(*grid, mid, s20, s22);

        prev = phi22;
        step22.step(phi22, s22);
        for (std::size_t k = 0; k < n; ++k) src[k] = -0.5 * (prev[k] + phi22[k]) * inv_r2[k] + s20[k];
        step20.step(phi20, src);

        if ((s + 1) % stride == 0 || s + 1 == plan.steps) {
            require_finite(phi20, s + 1, "propagate_through_second_order");
            require_finite(phi22, s + 1, "propagate_through_second_order");
            const double t = static_cast<double>(s + 1) * plan.h;
            out.phi11.series.push(t, phi11);
            out.phi20.series.push(t, phi20);
            out.phi22.series.push(t, phi22);
        }
    }
    return out;
}

std::pair<CorrectionChannel, CorrectionChannel> propagate_second_order(const CorrectionChannel& phi11, double dt) {
    if (phi11.order != 1 || phi11.ell != 1) throw std::invalid_argument("propagate_second_order needs phi_11");
    const FieldSeries& in = phi11.series;
    if (in.size() < 2) throw std::invalid_argument("propagate_second_order: phi_11 needs at least two samples");
    if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
    const GridPtr& grid = in.grid;
    const std::size_t n = grid->size();
    const TridiagonalOperator h22 = second_order_channel_hamiltonian(*grid, 2);
    const TridiagonalOperator h20 = second_order_channel_hamiltonian(*grid, 0);

    auto phi20_ch = make_channel(2, 0, grid);
    auto phi22_ch = make_channel(2, 2, grid);
    std::vector<cplx> phi20(n), phi22(n), prev(n), mid(n), src(n), s20(n), s22(n);
    std::vector<double> inv_r2(n);
    for (std::size_t k = 1; k + 1 < n; ++k) inv_r2[k] = 1.0 / (grid->point(k) * grid->point(k));
    phi20_ch.series.push(in.times.front(), phi20);
    phi22_ch.series.push(in.times.front(), phi22);

    double cached_h = -1.0;
    std::unique_ptr<CrankNicolsonStepper> step22, step20;
    for (std::size_t j = 0; j + 1 < in.size(); ++j) {
        const double ta = in.times[j];
        const double tb = in.times[j + 1];
        const StepPlan plan = plan_steps(tb - ta, dt);
        if (std::abs(plan.h - cached_h) > 1e-15 * plan.h) {
            step22 = std::make_unique<CrankNicolsonStepper>(h22, plan.h);
            step20 = std::make_unique<CrankNicolsonStepper>(h20, plan.h);
            cached_h = plan.h;
        }
        const auto& a = in.samples[j];
        const auto& b = in.samples[j + 1];
        for (std::size_t s = 0; s < plan.steps; ++s) {
            const double w = (static_cast<double>(s) + 0.5) / static_cast<double>(plan.steps);
            for (std::size_t k = 0; k < n; ++k) mid[k] = (1.0 - w) * a[k] + w * b[k];
            second_order_sources(*grid, mid, s20, s22);
            prev = phi22;
            step22->step(phi22, s22);
            for (std::size_t k = 0; k < n; ++k) src[k] = -0.5 * (prev[k] + phi22[k]) * inv_r2[k] + s20[k];
            step20->step(phi20, src);
        }
        require_finite(phi20, j + 1, "propagate_second_order");
        require_finite(phi22, j + 1, "propagate_second_order");
        phi20_ch.series.push(tb, phi20);
        phi22_ch.series.push(tb, phi22);
    }
    return {std::move(phi20_ch), std::move(phi22_ch)};
}

// ---------------------------------------------------------------------------

cplx second_order_shift(const RadialGrid& grid, std::span<const cplx> phi) {
    const std::size_t n = grid.size();
    if (phi.size() != n) throw std::invalid_argument("second_order_shift: size mismatch");
    const double inv_2h = 0.5 / grid.dr();
    const auto w = grid.weights();
    cplx sum = 0.0;
    // Same stencil as second_order_sources, so the sum equals
    // 4 sum w r e^-r (s20 + s22/3) term by term. The edges drop out.
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double r = grid.point(k);
        const cplx p = phi[k] + (phi[k + 1] - phi[k - 1]) * inv_2h;
        sum += w[k] * (phi[k] * phi[k] / (r * r) - 2.0 / 3.0 * phi[k] * p / r + p * p / 3.0);
    }
    return -2.0 * sum;
}

cplx second_order_phase_expectation(const RadialGrid& grid, std::span<const cplx> phi20,
                                    std::span<const cplx> phi22) {
    const std::size_t n = grid.size();
    if (phi20.size() != n || phi22.size() != n) throw std::invalid_argument("phase expectation: size mismatch");
    const auto w = grid.weights();
    const std::vector<double> m = s_wave_weight(grid);
    cplx sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) sum += w[k] * m[k] * (phi20[k] + phi22[k] / 3.0);
    return 4.0 * sum;
}

double dipole_from_channel(const RadialGrid& grid, std::span<const cplx> phi11, double lambda) {
    if (phi11.size() != grid.size()) throw std::invalid_argument("dipole: size mismatch");
    const auto w = grid.weights();
    double sum = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double r = grid.point(k);
        sum += w[k] * phi11[k].real() * std::exp(-r) * r * r;
    }
    return -8.0 / 3.0 * lambda * sum;
}

DipoleSeries dipole_moment(const CorrectionChannel& phi11, const PulseProfile& pulse) {
    DipoleSeries out;
    out.times = phi11.series.times;
    out.values.reserve(out.times.size());
    for (const auto& sample : phi11.series.samples) {
        out.values.push_back(dipole_from_channel(*phi11.series.grid, sample, pulse.lambda()));
    }
    return out;
}

ShiftSeries hydrogen_shift_pipeline(const CorrectionChannel& phi11, const GroundState& gs) {
    require_same_grid(*phi11.series.grid, gs.psi0.grid(), "hydrogen_shift_pipeline");
    ShiftSeries out;
    out.order = 2;
    out.times = phi11.series.times;
    out.values.reserve(out.times.size());
    for (const auto& sample : phi11.series.samples) {
        out.values.push_back(second_order_shift(*phi11.series.grid, sample));
    }
    return out;
}

double window_mean_square(const PulseProfile& pulse, const TimeWindow& window, FieldNormalization mode) {
    if (!(window.length > 0.0)) throw std::invalid_argument("window length must be positive");
    const bool carrier = mode == FieldNormalization::Carrier && pulse.kind() != PulseProfile::Kind::CustomTable;
    constexpr std::size_t kIntervals = 8192;
    const double h = window.length / kIntervals;
    std::vector<cplx> f(kIntervals + 1);
    for (std::size_t k = 0; k <= kIntervals; ++k) {
        const double t = window.begin() + static_cast<double>(k) * h;
        const double value = carrier ? pulse.scale() * std::cos(pulse.omega() * t) : pulse.g(t);
        f[k] = value * value;
    }
    return simpson(f, h).real() / window.length;
}

double polarizability(cplx shift, const PulseProfile& pulse, const TimeWindow& window, FieldNormalization mode) {
    const double ms = window_mean_square(pulse, window, mode);
    if (!(ms > 1e-14)) throw std::invalid_argument("polarizability: the field vanishes over the window");
    return -2.0 * shift.real() / ms;
}

// ---------------------------------------------------------------------------

cplx asymptotic_phi11(const PulseProfile& pulse, double r, double t, TailOrder order, double ds) {
    if (!(r > 0.0)) throw std::invalid_argument("asymptotic_phi11: radius must be positive");
    if (t <= 0.0) return 0.0;
    auto n = static_cast<std::size_t>(std::ceil(t / ds - 1e-9));
    n = std::max<std::size_t>(n, 2);
    n += n % 2;
    const double h = t / static_cast<double>(n);
    std::vector<cplx> f(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        const double s = static_cast<double>(k) * h;
        const cplx xi(1.0, (s - t) / r);
        cplx hv;
        switch (order) {
            case TailOrder::Constant:
                hv = 1.0;
                break;
            case TailOrder::Linear:
                hv = xi;
                break;
            case TailOrder::Full: {
                const cplx lg = std::log(xi);
                hv = xi + (xi - 1.0 - lg) / r +
                     (xi - 1.0) / (r * r) * ((1.0 + xi) * (xi - 1.0) / (2.0 * xi * xi) - lg / xi);
                break;
            }
        }
        f[k] = hv * pulse.g(s);
    }
    return kI * r * r * std::exp(-r) * simpson(f, h);
}

TailCheck asymptotic_tail_check(const CorrectionChannel& phi11, const PulseProfile& pulse,
                                const std::vector<double>& r_probe, double t, TailOrder order) {
    const FieldSeries& series = phi11.series;
    if (series.size() == 0) throw std::invalid_argument("asymptotic_tail_check: empty channel");
    const auto nearest = std::min_element(series.times.begin(), series.times.end(),
                                          [t](double a, double b) { return std::abs(a - t) < std::abs(b - t); });
    const auto sample_index = static_cast<std::size_t>(nearest - series.times.begin());
    const double t_sample = *nearest;
    const auto& values = series.samples[sample_index];
    const RadialGrid& grid = *series.grid;

    TailCheck out;
    for (double r : r_probe) {
        const double pos = std::round((r - grid.r_min()) / grid.dr());
        if (pos < 1 || pos > static_cast<double>(grid.size() - 2)) {
            throw std::out_of_range("asymptotic_tail_check: probe radius outside the grid interior");
        }
        const auto k = static_cast<std::size_t>(pos);
        const double rk = grid.point(k);
        const cplx numeric = values[k];
        // xi = 1 + i(s - t)/r keeps Re xi = 1, so the principal log is safe
        // for real s and t; the flag is kept for complex-time extensions.
        const bool excluded = false;
        const cplx asym = asymptotic_phi11(pulse, rk, t_sample, order);
        out.radii.push_back(rk);
        out.numeric.push_back(numeric);
        out.asymptotic.push_back(asym);
        out.excluded.push_back(excluded);
        const double denom = std::abs(numeric);
        out.relative_error.push_back(denom > 0.0 ? std::abs(numeric - asym) / denom
                                                 : (std::abs(asym) > 0.0 ? 1.0 : 0.0));
    }
    return out;
}

double small_r_exponent(const RadialGrid& grid, std::span<const cplx> phi, std::size_t points) {
    if (phi.size() != grid.size() || points < 3 || points + 1 >= grid.size()) {
        throw std::invalid_argument("small_r_exponent: bad input");
    }
    // log|phi| = c + alpha log r + beta r: the linear term absorbs the
    // r^(alpha+1) correction that would otherwise bias a pure power fit.
    double m[3][3] = {};
    double rhs[3] = {};
    for (std::size_t k = 1; k <= points; ++k) {
        const double r = grid.point(k);
        const double basis[3] = {1.0, std::log(r), r};
        const double y = std::log(std::abs(phi[k]));
        for (int i = 0; i < 3; ++i) {
            rhs[i] += basis[i] * y;
            for (int j = 0; j < 3; ++j) m[i][j] += basis[i] * basis[j];
        }
    }
    auto det3 = [](const double a[3][3]) {
        return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
               a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    };
    const double det = det3(m);
    if (!(std::abs(det) > 0.0)) throw NumericalError("small_r_exponent: degenerate fit");
    double col[3][3];
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) col[i][j] = j == 1 ? rhs[i] : m[i][j];
    }
    return det3(col) / det;
}

GaugeRoutes hydrogen_gauge_routes(GridPtr grid) {
    GaugeRoutes routes{
        TridiagonalOperator::from_coefficients(
            *grid, [](double) { return cplx(-0.5); }, [](double r) { return cplx(1.0 - 2.0 / r); },
            [](double r) { return cplx(1.0 / r); }),
        radial_channel_hamiltonian(*grid, 1),
        std::vector<double>(grid->size()),
        BoundaryCondition::ratio(1.0 / (1.0 + 0.5 * grid->dr())),
    };
    for (std::size_t k = 0; k < grid->size(); ++k) {
        const double r = grid->point(k);
        routes.embedding[k] = r * r * std::exp(-r);
    }
    return routes;
}

double hybrid_laplacian(const HybridPartials& f, double r, double z) {
    const double rho2 = r * r - z * z;
    const double azimuthal = rho2 > 0.0 ? f.f_phiphi / rho2 : 0.0;
    return f.f_rr + 2.0 / r * f.f_r + 2.0 * z / r * f.f_rz + f.f_zz + azimuthal;
}

double hybrid_gradient_dot(const HybridPartials& f, const HybridPartials& g, double r, double z) {
    const double rho2 = r * r - z * z;
    const double azimuthal = rho2 > 0.0 ? f.f_phi * g.f_phi / rho2 : 0.0;
    return f.f_r * g.f_r + z / r * (f.f_r * g.f_z + f.f_z * g.f_r) + f.f_z * g.f_z + azimuthal;
}

}  // namespace tdlpt
