#include "tdlpt/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace tdlpt {

namespace {
constexpr double kEpsilon0 = 8.8541878128e-12;  // F/m
constexpr double kLightSpeed = 299792458.0;     // m/s
}  // namespace

double field_amplitude_from_intensity_wcm2(double intensity_wcm2) {
    if (intensity_wcm2 < 0.0) throw std::invalid_argument("intensity must be non-negative");
    const double intensity_wm2 = intensity_wcm2 * 1e4;
    return std::sqrt(2.0 * intensity_wm2 / (kEpsilon0 * kLightSpeed)) / kAtomicFieldVm;
}

double field_amplitude_from_intensity_au(double intensity_au) {
    return field_amplitude_from_intensity_wcm2(intensity_au * kAtomicIntensityWcm2);
}

PulseProfile PulseProfile::sin2(double omega, int n_cycles, double lambda) {
    if (!(omega > 0.0)) throw std::invalid_argument("pulse frequency must be positive");
    if (n_cycles < 1) throw std::invalid_argument("pulse needs at least one cycle");
    PulseProfile p;
    p.kind_ = Kind::Sin2Envelope;
    p.omega_ = omega;
    p.n_cycles_ = n_cycles;
    p.lambda_ = lambda;
    return p;
}

PulseProfile PulseProfile::adiabatic(double omega, double lambda) {
    if (!(omega > 0.0)) throw std::invalid_argument("pulse frequency must be positive");
    PulseProfile p;
    p.kind_ = Kind::AdiabaticMonochromatic;
    p.omega_ = omega;
    p.n_cycles_ = 0;
    p.lambda_ = lambda;
    return p;
}

PulseProfile PulseProfile::custom(std::vector<double> times, std::vector<double> values, double lambda) {
    if (times.size() != values.size() || times.size() < 2) {
        throw std::invalid_argument("custom pulse needs matching time/value tables of length >= 2");
    }
    if (!std::is_sorted(times.begin(), times.end(), std::less_equal<>{}) ||
        std::adjacent_find(times.begin(), times.end()) != times.end()) {
        throw std::invalid_argument("custom pulse times must be strictly increasing");
    }
    PulseProfile p;
    p.kind_ = Kind::CustomTable;
    p.lambda_ = lambda;
    p.times_ = std::move(times);
    p.values_ = std::move(values);
    return p;
}

PulseProfile PulseProfile::constant(double value, double duration, double lambda) {
    if (!(duration > 0.0)) throw std::invalid_argument("pulse duration must be positive");
    return custom({0.0, duration}, {value, value}, lambda);
}

double PulseProfile::envelope(double t) const {
    switch (kind_) {
        case Kind::Sin2Envelope: {
            if (t < 0.0 || t > duration()) return 0.0;
            const double s = std::sin(omega_ * t / (2.0 * n_cycles_));
            return s * s;
        }
        case Kind::AdiabaticMonochromatic:
            return 1.0;
        case Kind::CustomTable:
            return t < times_.front() || t > times_.back() ? 0.0 : 1.0;
    }
    return 0.0;
}

double PulseProfile::g(double t) const {
    switch (kind_) {
        case Kind::Sin2Envelope:
            return scale_ * envelope(t) * std::cos(omega_ * t);
        case Kind::AdiabaticMonochromatic:
            return scale_ * std::cos(omega_ * t);
        case Kind::CustomTable: {
            if (t < times_.front() || t > times_.back()) return 0.0;
            auto it = std::upper_bound(times_.begin(), times_.end(), t);
            if (it == times_.end()) return scale_ * values_.back();
            const auto k = static_cast<std::size_t>(it - times_.begin());
            const double w = (t - times_[k - 1]) / (times_[k] - times_[k - 1]);
            return scale_ * ((1.0 - w) * values_[k - 1] + w * values_[k]);
        }
    }
    return 0.0;
}

double PulseProfile::duration() const {
    switch (kind_) {
        case Kind::Sin2Envelope:
            return 2.0 * std::numbers::pi * n_cycles_ / omega_;
        case Kind::AdiabaticMonochromatic:
            return period();
        case Kind::CustomTable:
            return times_.back();
    }
    return 0.0;
}

double PulseProfile::peak_time() const {
    switch (kind_) {
        case Kind::Sin2Envelope:
            return std::numbers::pi * n_cycles_ / omega_;
        case Kind::AdiabaticMonochromatic:
            return 0.5 * period();
        case Kind::CustomTable: {
            auto it = std::max_element(values_.begin(), values_.end(),
                                       [](double a, double b) { return std::abs(a) < std::abs(b); });
            return times_[static_cast<std::size_t>(it - values_.begin())];
        }
    }
    return 0.0;
}

double PulseProfile::period() const {
    if (!(omega_ > 0.0)) throw std::logic_error("pulse has no carrier frequency");
    return 2.0 * std::numbers::pi / omega_;
}

PulseProfile PulseProfile::with_lambda(double lambda) const {
    PulseProfile p = *this;
    p.lambda_ = lambda;
    return p;
}

PulseProfile PulseProfile::scaled(double factor) const {
    PulseProfile p = *this;
    p.scale_ *= factor;
    return p;
}

std::string PulseProfile::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::Sin2Envelope:
            os << "sin2(omega=" << omega_ << ", N=" << n_cycles_ << ")";
            break;
        case Kind::AdiabaticMonochromatic:
            os << "adiabatic(omega=" << omega_ << ")";
            break;
        case Kind::CustomTable:
            os << "table(" << times_.size() << " samples)";
            break;
    }
    if (scale_ != 1.0) os << "*" << scale_;
    return os.str();
}

TimeWindow one_cycle_at_peak(const PulseProfile& pulse) {
    return {pulse.peak_time(), pulse.period()};
}

TimeWindow full_pulse(const PulseProfile& pulse) {
    const double tf = pulse.duration();
    return {0.5 * tf, tf};
}

}  // namespace tdlpt
