#include "tdlpt/oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace tdlpt {

namespace {

// Plain three-band storage and a Thomas solve, kept apart from numerics.cpp.
struct Bands {
    std::vector<cplx> lo, mid, up;
};

Bands radial_hamiltonian_bands(const RadialGrid& grid, int ell, double shift) {
    const std::size_t n = grid.size();
    const double h2 = grid.dr() * grid.dr();
    Bands b{std::vector<cplx>(n), std::vector<cplx>(n), std::vector<cplx>(n)};
    for (std::size_t k = 0; k < n; ++k) {
        const double r = grid.point(k);
        b.lo[k] = -0.5 / h2;
        b.up[k] = -0.5 / h2;
        b.mid[k] = 1.0 / h2 - 1.0 / r + 0.5 * ell * (ell + 1) / (r * r) + shift;
    }
    return b;
}

// Crank-Nicolson with zero Dirichlet edges for one fixed band matrix.
class OracleStepper {
public:
    OracleStepper(const Bands& h, double dt) : n_(h.mid.size()), h_(h), dt_(dt), c_(n_), inv_(n_), rhs_(n_) {
        const cplx a = kI * (0.5 * dt);
        std::vector<cplx> lo(n_), mid(n_), up(n_);
        for (std::size_t k = 1; k + 1 < n_; ++k) {
            lo[k] = a * h.lo[k];
            mid[k] = 1.0 + a * h.mid[k];
            up[k] = a * h.up[k];
        }
        mid[0] = mid[n_ - 1] = 1.0;
        lo_ = lo;
        cplx prev_c = 0.0;
        for (std::size_t k = 0; k < n_; ++k) {
            const cplx pivot = mid[k] - lo[k] * prev_c;
            if (std::abs(pivot) < 1e-14) throw NumericalError("oracle stepper: singular pivot");
            inv_[k] = 1.0 / pivot;
            c_[k] = up[k] * inv_[k];
            prev_c = c_[k];
        }
    }

    // u <- CN step; `source` is the midpoint inhomogeneity (may be empty).
    void step(std::vector<cplx>& u, const std::vector<cplx>* source) {
        const cplx a = kI * (0.5 * dt_);
        rhs_[0] = rhs_[n_ - 1] = 0.0;
        for (std::size_t k = 1; k + 1 < n_; ++k) {
            const cplx hu = h_.lo[k] * u[k - 1] + h_.mid[k] * u[k] + h_.up[k] * u[k + 1];
            rhs_[k] = u[k] - a * hu;
            if (source) rhs_[k] -= kI * dt_ * (*source)[k];
        }
        cplx prev = 0.0;
        for (std::size_t k = 0; k < n_; ++k) {
            prev = (rhs_[k] - lo_[k] * prev) * inv_[k];
            rhs_[k] = prev;
        }
        for (std::size_t k = n_ - 1; k-- > 0;) rhs_[k] -= c_[k] * rhs_[k + 1];
        u.swap(rhs_);
    }

private:
    std::size_t n_;
    Bands h_;
    double dt_;
    std::vector<cplx> lo_, c_, inv_, rhs_;
};

std::size_t count_steps(double t_end, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
    if (!(t_end > 0.0)) throw std::invalid_argument("propagation end time must be positive");
    return static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
}

double l2_norm_sq(const RadialGrid& grid, const std::vector<cplx>& u) {
    const auto w = grid.weights();
    double s = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) s += w[k] * std::norm(u[k]);
    return s;
}

// Lowest eigenvector of the l = 0 band matrix by shifted inverse iteration.
std::vector<cplx> discrete_ground_state(const RadialGrid& grid) {
    const std::size_t n = grid.size();
    Bands h = radial_hamiltonian_bands(grid, 0, 0.0);
    std::vector<cplx> u(n);
    for (std::size_t k = 1; k + 1 < n; ++k) u[k] = 2.0 * grid.point(k) * std::exp(-grid.point(k));
    // Shift slightly below -1/2; interior block only.
    const double sigma = -0.5 - 1e-3;
    std::vector<cplx> c(n), d(n);
    for (int it = 0; it < 60; ++it) {
        cplx prev_c = 0.0;
        cplx prev_d = 0.0;
        for (std::size_t k = 1; k + 1 < n; ++k) {
            const cplx lo = k > 1 ? h.lo[k] : cplx(0.0);
            const cplx pivot = h.mid[k] - sigma - lo * prev_c;
            c[k] = h.up[k] / pivot;
            d[k] = (u[k] - lo * prev_d) / pivot;
            prev_c = c[k];
            prev_d = d[k];
        }
        u[n - 2] = d[n - 2];
        for (std::size_t k = n - 2; k-- > 1;) u[k] = d[k] - c[k] * u[k + 1];
        const double norm = std::sqrt(l2_norm_sq(grid, u));
        for (auto& v : u) v /= norm;
    }
    if (u[1].real() < 0.0) {
        for (auto& v : u) v = -v;
    }
    return u;
}

}  // namespace

FieldSeries dyson_first_order(GridPtr grid, const PulseProfile& pulse, double dt, std::size_t stride, double t_end) {
    if (stride == 0) throw std::invalid_argument("storage stride must be positive");
    const double end = t_end > 0.0 ? t_end : pulse.duration();
    const std::size_t steps = count_steps(end, dt);
    const double h = end / static_cast<double>(steps);
    const std::size_t n = grid->size();
    OracleStepper stepper(radial_hamiltonian_bands(*grid, 1, 0.0), h);

    std::vector<cplx> profile(n);
    const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double r = grid->point(k);
        profile[k] = -r * r * std::exp(-r) * inv_sqrt_pi;
    }
    FieldSeries out;
    out.grid = grid;
    std::vector<cplx> chi(n), source(n);
    out.push(0.0, chi);
    for (std::size_t s = 0; s < steps; ++s) {
        const double t_mid = (static_cast<double>(s) + 0.5) * h;
        const cplx drive = pulse.g(t_mid) * std::polar(1.0, 0.5 * t_mid);
        for (std::size_t k = 0; k < n; ++k) source[k] = drive * profile[k];
        stepper.step(chi, &source);
        if ((s + 1) % stride == 0 || s + 1 == steps) out.push(static_cast<double>(s + 1) * h, chi);
    }
    return out;
}

FieldSeries dyson_image_of_phi11(const FieldSeries& phi11) {
    FieldSeries out;
    out.grid = phi11.grid;
    const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
    std::vector<cplx> tmp(phi11.grid->size());
    for (std::size_t j = 0; j < phi11.size(); ++j) {
        const cplx phase = std::polar(inv_sqrt_pi, 0.5 * phi11.times[j]);
        for (std::size_t k = 0; k < tmp.size(); ++k) tmp[k] = phase * phi11.samples[j][k];
        out.push(phi11.times[j], tmp);
    }
    return out;
}

double relative_l2_distance(const FieldSeries& a, const FieldSeries& b) {
    require_same_grid(*a.grid, *b.grid, "relative_l2_distance");
    if (a.times.size() != b.times.size()) throw std::invalid_argument("relative_l2_distance: time meshes differ");
    double worst = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (std::abs(a.times[j] - b.times[j]) > 1e-9 * std::max(1.0, b.times[j])) {
            throw std::invalid_argument("relative_l2_distance: time meshes differ");
        }
        const double ref = l2_norm_sq(*b.grid, b.samples[j]);
        if (ref == 0.0) continue;
        std::vector<cplx> d(a.samples[j].size());
        for (std::size_t k = 0; k < d.size(); ++k) d[k] = a.samples[j][k] - b.samples[j][k];
        worst = std::max(worst, std::sqrt(l2_norm_sq(*b.grid, d) / ref));
    }
    return worst;
}

// ---------------------------------------------------------------------------

double PartialWaveState::norm() const {
    double s = 0.0;
    for (const auto& u : channels) s += l2_norm_sq(*grid, u);
    return s;
}

double dipole_coupling(int ell) {
    if (ell < 0) throw std::invalid_argument("dipole_coupling: negative l");
    return (ell + 1.0) / std::sqrt((2.0 * ell + 1.0) * (2.0 * ell + 3.0));
}

TdseDipole full_tdse_dipole(GridPtr grid, const PulseProfile& pulse, int l_max, double dt, std::size_t stride,
                            double t_end) {
    if (l_max < 2) throw std::invalid_argument("full_tdse_dipole: L_max must be at least 2");
    if (stride == 0) throw std::invalid_argument("storage stride must be positive");
    const double end = t_end > 0.0 ? t_end : pulse.duration();
    const std::size_t steps = count_steps(end, dt);
    const double h = end / static_cast<double>(steps);
    const std::size_t n = grid->size();
    const auto nl = static_cast<std::size_t>(l_max + 1);

    PartialWaveState state{grid, std::vector<std::vector<cplx>>(nl, std::vector<cplx>(n))};
    state.channels[0] = discrete_ground_state(*grid);
    std::vector<OracleStepper> atomic;
    atomic.reserve(nl);
    for (int l = 0; l <= l_max; ++l) atomic.emplace_back(radial_hamiltonian_bands(*grid, l, 0.0), h);

    std::vector<double> coupling(nl);
    for (std::size_t l = 0; l + 1 < nl; ++l) coupling[l] = dipole_coupling(static_cast<int>(l));

    // exp(-i tau V) on the pair (l, l+1) with V = -lambda g r c_l sigma_x,
    // in Cayley form so that every rotation is exactly unitary.
    auto couple = [&](std::size_t parity, double t, double tau) {
        const double field = -pulse.lambda() * pulse.g(t);
        for (std::size_t l = parity; l + 1 < nl; l += 2) {
            auto& a = state.channels[l];
            auto& b = state.channels[l + 1];
            for (std::size_t k = 1; k + 1 < n; ++k) {
                const double theta = 0.5 * tau * field * grid->point(k) * coupling[l];
                const double den = 1.0 / (1.0 + theta * theta);
                const cplx diag = (1.0 - theta * theta) * den;
                const cplx off = -2.0 * kI * theta * den;
                const cplx na = diag * a[k] + off * b[k];
                const cplx nb = off * a[k] + diag * b[k];
                a[k] = na;
                b[k] = nb;
            }
        }
    };
    auto dipole = [&]() {
        const auto w = grid->weights();
        double z = 0.0;
        for (std::size_t l = 0; l + 1 < nl; ++l) {
            const auto& a = state.channels[l];
            const auto& b = state.channels[l + 1];
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += w[k] * grid->point(k) * (std::conj(a[k]) * b[k]).real();
            z += 2.0 * coupling[l] * s;
        }
        return -z;
    };

    const double norm0 = state.norm();
    TdseDipole out;
    out.times.push_back(0.0);
    out.values.push_back(dipole());
    for (std::size_t s = 0; s < steps; ++s) {
        const double t_mid = (static_cast<double>(s) + 0.5) * h;
        couple(0, t_mid, 0.5 * h);
        couple(1, t_mid, 0.5 * h);
        for (std::size_t l = 0; l < nl; ++l) atomic[l].step(state.channels[l], nullptr);
        couple(1, t_mid, 0.5 * h);
        couple(0, t_mid, 0.5 * h);
        const bool store = (s + 1) % stride == 0 || s + 1 == steps;
        if (store || (s + 1) % 10000 == 0) {
            const double drift = std::abs(state.norm() - norm0);
            out.norm_drift = std::max(out.norm_drift, drift);
            if (!(drift <= 1e-4)) {
                std::ostringstream msg;
                msg << "full_tdse_dipole: norm drift " << drift << " at step " << s + 1 << " (t = " << (s + 1) * h
                    << ")";
                throw NumericalError(msg.str());
            }
        }
        if (store) {
            out.times.push_back(static_cast<double>(s + 1) * h);
            out.values.push_back(dipole());
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

template <typename F>
cplx simpson_rule(double a, double b, std::size_t n, F&& f) {
    const double h = (b - a) / static_cast<double>(n);
    cplx sum = f(a) + f(b);
    for (std::size_t k = 1; k < n; ++k) sum += (k % 2 ? 4.0 : 2.0) * f(a + static_cast<double>(k) * h);
    return sum * h / 3.0;
}

}  // namespace

cplx nested_quadrature_phi2(const PulseProfile& pulse, double t, std::size_t n_sub) {
    if (n_sub < 16) throw std::invalid_argument("nested_quadrature_phi2: n_sub must be at least 16");
    n_sub += n_sub % 2;
    if (t <= 0.0) return 0.0;
    auto outer = [&](double s) {
        if (s <= 0.0) return cplx(0.0);
        const cplx inner = simpson_rule(0.0, s, n_sub, [&](double tau) {
            const cplx a = std::polar(pulse.g(tau), tau);
            return simpson_rule(0.0, s, n_sub, [&](double tau2) { return a * std::polar(pulse.g(tau2), tau2); });
        });
        return std::polar(1.0, -2.0 * s) * inner;
    };
    return -0.5 * kI * simpson_rule(0.0, t, n_sub, outer);
}

double sum_over_states_shift(double matrix_element_sq, double level_gap, double omega) {
    const double den = level_gap * level_gap - omega * omega;
    if (std::abs(den) < 1e-12) throw std::invalid_argument("sum_over_states_shift: resonant drive");
    return -0.5 * matrix_element_sq * level_gap / den;
}

cplx brute_force_second_order_shift(const std::function<cplx(double)>& phi, double r_max, std::size_t n_r,
                                    std::size_t n_mu) {
    if (n_r < 4 || n_mu < 4) throw std::invalid_argument("brute_force_second_order_shift: too few nodes");
    n_r += n_r % 2;
    n_mu += n_mu % 2;
    auto big_phi = [&](double x, double z) {
        const double r = std::hypot(x, z);
        return z * std::exp(r) * phi(r) / (r * r);
    };
    constexpr double kStep = 1e-4;
    // Gradient along x, z of the axisymmetric field at (x, 0, z).
    auto grad_sq = [&](double x, double z) {
        const cplx gx = (big_phi(x + kStep, z) - big_phi(x - kStep, z)) / (2.0 * kStep);
        const cplx gz = (big_phi(x, z + kStep) - big_phi(x, z - kStep)) / (2.0 * kStep);
        return gx * gx + gz * gz;
    };
    const double r_lo = 0.0;
    auto radial = [&](double r) {
        if (r <= 10.0 * kStep) return cplx(0.0);
        const cplx angular = simpson_rule(-1.0, 1.0, n_mu, [&](double mu) {
            const double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
            return grad_sq(r * s, r * mu);
        });
        // psi0^2 = e^-2r / pi, azimuth gives 2 pi.
        return 2.0 * r * r * std::exp(-2.0 * r) * angular;
    };
    return -0.5 * simpson_rule(r_lo, r_max, n_r, radial);
}

}  // namespace tdlpt
