#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tdlpt/pulse.hpp"

using namespace tdlpt;

TEST_CASE("sin2 pulse shape") {
    const auto p = PulseProfile::sin2(0.056, 5, 0.03);
    const double tf = 2.0 * std::numbers::pi * 5 / 0.056;
    CHECK(p.duration() == doctest::Approx(tf));
    CHECK(p.peak_time() == doctest::Approx(0.5 * tf));
    CHECK(p.period() == doctest::Approx(2.0 * std::numbers::pi / 0.056));
    CHECK(p.envelope(p.peak_time()) == doctest::Approx(1.0));
    CHECK(std::abs(p.g(p.peak_time())) == doctest::Approx(1.0));
    CHECK(p.g(0.0) == 0.0);
    CHECK(p.g(-1.0) == 0.0);
    CHECK(p.g(tf + 1.0) == 0.0);
    const double t = 123.4;
    CHECK(p.g(t) == doctest::Approx(std::pow(std::sin(0.056 * t / 10.0), 2) * std::cos(0.056 * t)));
    CHECK(p.lambda() == 0.03);
    CHECK_THROWS_AS(PulseProfile::sin2(0.0, 5, 0.03), std::invalid_argument);
    CHECK_THROWS_AS(PulseProfile::sin2(0.056, 0, 0.03), std::invalid_argument);
}

TEST_CASE("windows") {
    const auto p = PulseProfile::sin2(0.5, 4, 0.03);
    const TimeWindow c = one_cycle_at_peak(p);
    CHECK(c.t0 == doctest::Approx(p.peak_time()));
    CHECK(c.length == doctest::Approx(p.period()));
    const TimeWindow f = full_pulse(p);
    CHECK(f.begin() == doctest::Approx(0.0));
    CHECK(f.end() == doctest::Approx(p.duration()));
}

TEST_CASE("scaled, custom and constant profiles") {
    const auto p = PulseProfile::sin2(0.5, 2, 0.03);
    CHECK(p.scaled(0.0).g(3.0) == 0.0);
    CHECK(p.scaled(2.0).g(3.0) == doctest::Approx(2.0 * p.g(3.0)));
    CHECK(p.scaled(2.0).scale() == 2.0);
    CHECK(p.with_lambda(0.1).lambda() == 0.1);

    const auto c = PulseProfile::custom({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0}, 0.01);
    CHECK(c.g(0.5) == doctest::Approx(0.5));
    CHECK(c.g(2.5) == 0.0);
    CHECK_THROWS_AS(PulseProfile::custom({0.0, 0.0}, {1.0, 1.0}, 0.01), std::invalid_argument);
    CHECK(PulseProfile::constant(0.3, 5.0, 0.01).g(2.0) == doctest::Approx(0.3));

    const auto a = PulseProfile::adiabatic(0.3, 0.01);
    CHECK(a.g(-100.0) == doctest::Approx(std::cos(-30.0)));
}

TEST_CASE("intensity to field amplitude") {
    CHECK(field_amplitude_from_intensity_au(1.0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(field_amplitude_from_intensity_wcm2(kAtomicIntensityWcm2 * 0.0009) == doctest::Approx(0.03).epsilon(1e-6));
    CHECK_THROWS_AS(field_amplitude_from_intensity_wcm2(-1.0), std::invalid_argument);
}
