#include <doctest.h>

#include <cmath>

#include "tdlpt/harmonic.hpp"
#include "tdlpt/oracles.hpp"

using namespace tdlpt;

namespace {

double norm_sq(const ComplexField& f) {
    double s = 0.0;
    const auto w = f.grid().weights();
    for (std::size_t k = 0; k < f.size(); ++k) s += w[k] * std::norm(f[k]);
    return s;
}

GridPtr x_grid() { return RadialGrid::build(-8.0, 8.0, 0.01, true); }

}  // namespace

TEST_CASE("ground state satisfies the Riccati relation") {
    const GroundState gs = harmonic_ground_state(x_grid());
    CHECK(riccati_residual(gs, [](double x) { return 0.5 * x * x; }, 1) < 1e-8);
    CHECK(norm_sq(gs.psi0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("first-order coefficient tends to the adiabatic W") {
    const auto p = PulseProfile::adiabatic(0.3, 0.03);
    for (double t : {0.0, 1.0, 7.5}) {
        CHECK(std::abs(ho_phi1(p, t) - (-kI * adiabatic_w(0.3, t))) < 1e-12);
    }
}

TEST_CASE("cumulative corrections agree with pointwise evaluation") {
    const auto p = PulseProfile::sin2(0.5, 4, 0.03);
    const HoCorrections hc = ho_corrections(p, p.duration(), 1e-3);
    REQUIRE(hc.times.size() % 2 == 1);
    const std::size_t mid = hc.times.size() / 2;
    CHECK(std::abs(hc.c1[mid] - ho_phi1(p, hc.times[mid])) < 1e-10);
    CHECK(std::abs(hc.c2[mid] - ho_phi2(p, hc.times[mid])) < 1e-10);
}

TEST_CASE("second-order coefficient against nested quadrature") {
    const auto p = PulseProfile::sin2(0.5, 1, 0.03);
    const double t = p.duration();
    CHECK(std::abs(ho_phi2(p, t, 1e-3) - nested_quadrature_phi2(p, t, 256)) < 1e-6);
}

TEST_CASE("exact solution is normalised and matches the truncated phase series") {
    const auto p = PulseProfile::sin2(0.5, 4, 0.03);
    const GridPtr grid = x_grid();
    const double t = 0.6 * p.duration();
    const ComplexField exact = ho_exact_solution(p, 0.03, grid, t);
    CHECK(std::abs(norm_sq(exact) - 1.0) < 1e-8);
    const ComplexField lpt = ho_tdlpt_wavefunction(ho_phi1(p, t), ho_phi2(p, t), 0.03, t, grid);
    double dev = 0.0;
    for (std::size_t k = 0; k < grid->size(); ++k) dev = std::max(dev, std::abs(lpt[k] - exact[k]));
    CHECK(dev < 1e-10);
}

TEST_CASE("third-order pseudopotential vanishes and the probe detects x^2 terms") {
    const auto p = PulseProfile::sin2(0.5, 4, 0.03);
    const GridPtr grid = RadialGrid::build(-6.0, 6.0, 0.01, true);
    const std::vector<double> ts{1.0, 10.0, 25.0};
    CHECK(ho_truncation_check(p, ts, grid) <= 1e-12);
    CHECK(ho_truncation_check(p, ts, grid, 1e-3, 1e-3) > 1e-6);
}

TEST_CASE("AC shift closed form") {
    for (double w : {0.3, 0.5, 2.0}) {
        CHECK(std::abs(ho_ac_shift(w) - ho_ac_shift_closed_form(w)) < 1e-9);
        CHECK(std::abs(sum_over_states_shift(0.5, 1.0, w) - ho_ac_shift_closed_form(w)) < 1e-15);
    }
    CHECK_THROWS_AS(ho_ac_shift(1.0), std::invalid_argument);
}

TEST_CASE("norm defect of the truncated series scales as lambda^(N+1)") {
    const auto p = PulseProfile::sin2(0.5, 4, 1.0);
    const GridPtr grid = x_grid();
    const double t = 0.7 * p.duration();
    const cplx c1 = ho_phi1(p, t);
    const cplx c2 = ho_phi2(p, t);
    auto defect = [&](double lambda, int order) {
        const ComplexField psi = ho_tdlpt_wavefunction(c1, order >= 2 ? c2 : cplx(0.0), lambda, t, grid);
        return std::abs(norm_sq(psi) - 1.0);
    };
    // N = 1: O(lambda^2).
    const double d1 = defect(0.02, 1);
    const double d2 = defect(0.01, 1);
    CHECK(d1 > 1e-6);
    CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.02));
    // N = 2 is exact for the oscillator.
    CHECK(defect(0.02, 2) < 1e-12);
}

TEST_CASE("oscillator gauge routes agree up to O(dx^2)") {
    // The routes use different spatial discretisations, so they agree only
    // to second order in dx.
    auto deviation = [](double dx) {
        const GridPtr grid = RadialGrid::build(-6.0, 6.0, dx, true);
        const GaugeRoutes routes = harmonic_gauge_routes(grid);
        const ComplexField f = ComplexField::from_function(grid, [](double x) { return x; });
        return gauge_rotation_identity_check(routes, harmonic_ground_state(grid), f, 1.0, 1e-3).deviation;
    };
    const double d1 = deviation(0.02);
    const double d2 = deviation(0.01);
    CHECK(d2 < 1e-3);
    CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.05));
}
