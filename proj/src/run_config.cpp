#include "tdlpt/run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

namespace tdlpt {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    std::istringstream in(v);
    in.imbue(std::locale::classic());
    double out = 0.0;
    in >> out;
    if (v.empty() || in.fail() || !in.eof() || !std::isfinite(out)) {
        throw ConfigError("config key '" + key + "': expected a number, got '" + value + "'");
    }
    return out;
}

long to_integer(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    long out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
        throw ConfigError("config key '" + key + "': expected an integer, got '" + value + "'");
    }
    return out;
}

bool to_bool(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("config key '" + key + "': expected true or false, got '" + value + "'");
}

std::string format(double v) {
    std::ostringstream out;
    out.imbue(std::locale::classic());
    out.precision(12);
    out << v;
    return out.str();
}

}  // namespace

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const long v = to_integer("cycles", item);
        if (v < 1 || v > 100000) throw ConfigError("cycle counts must lie in [1, 100000]");
        out.push_back(static_cast<int>(v));
    }
    if (out.empty()) throw ConfigError("empty cycle list");
    return out;
}

void apply_setting(RunConfig& c, const std::string& raw_key, const std::string& value) {
    const std::string key = trim(raw_key);
    const std::string v = trim(value);
    if (key == "system") {
        if (v == "harmonic") c.system = SystemKind::Harmonic;
        else if (v == "hydrogen") c.system = SystemKind::Hydrogen;
        else throw ConfigError("system must be 'harmonic' or 'hydrogen'");
    } else if (key == "omega") {
        c.omega = to_double(key, v);
    } else if (key == "n_cycles") {
        c.n_cycles = static_cast<int>(to_integer(key, v));
    } else if (key == "lambda") {
        c.lambda = to_double(key, v);
    } else if (key == "intensity_wcm2") {
        c.intensity_wcm2 = to_double(key, v);
    } else if (key == "field_scale") {
        c.field_scale = to_double(key, v);
    } else if (key == "cycles") {
        c.cycles = parse_int_list(v);
    } else if (key == "r_min") {
        c.r_min = to_double(key, v);
    } else if (key == "r_max") {
        c.r_max = to_double(key, v);
    } else if (key == "dr") {
        c.dr = to_double(key, v);
    } else if (key == "dt") {
        c.dt = to_double(key, v);
    } else if (key == "stride") {
        const long s = to_integer(key, v);
        if (s < 1) throw ConfigError("stride must be positive");
        c.stride = static_cast<std::size_t>(s);
    } else if (key == "window") {
        if (v == "one_cycle_at_peak") c.window = WindowKind::OneCycleAtPeak;
        else if (v == "full_pulse") c.window = WindowKind::FullPulse;
        else if (v == "custom") c.window = WindowKind::Custom;
        else throw ConfigError("window must be one_cycle_at_peak, full_pulse or custom");
    } else if (key == "window_t0") {
        c.window_t0 = to_double(key, v);
    } else if (key == "window_length") {
        c.window_length = to_double(key, v);
    } else if (key == "normalization") {
        if (v == "carrier") c.normalization = FieldNormalization::Carrier;
        else if (v == "window_mean") c.normalization = FieldNormalization::WindowMean;
        else throw ConfigError("normalization must be 'carrier' or 'window_mean'");
    } else if (key == "output_dir") {
        if (v.empty()) throw ConfigError("output_dir must not be empty");
        c.output_dir = v;
    } else if (key == "jobs") {
        const long j = to_integer(key, v);
        if (j < 0) throw ConfigError("jobs must be non-negative");
        c.jobs = static_cast<std::size_t>(j);
    } else if (key == "record_wall_time") {
        c.record_wall_time = to_bool(key, v);
    } else if (key == "oracle_tdse") {
        c.oracle_tdse = to_bool(key, v);
    } else if (key == "l_max") {
        c.l_max = static_cast<int>(to_integer(key, v));
    } else if (key == "oracle_dr") {
        c.oracle_dr = to_double(key, v);
    } else if (key == "oracle_dt") {
        c.oracle_dt = to_double(key, v);
    } else if (key == "x_max") {
        c.x_max = to_double(key, v);
    } else if (key == "dx") {
        c.dx = to_double(key, v);
    } else if (key == "tolerance") {
        c.tolerance = to_double(key, v);
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

std::pair<std::string, std::string> split_assignment(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + text + "'");
    return {trim(text.substr(0, eq)), trim(text.substr(eq + 1))};
}

RunConfig parse_config(std::istream& in, RunConfig base) {
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        try {
            const auto [key, value] = split_assignment(line);
            apply_setting(base, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return base;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in, std::move(base));
}

void RunConfig::validate() const {
    if (omega && !(*omega > 0.0)) throw ConfigError("omega must be positive");
    if (n_cycles && *n_cycles < 1) throw ConfigError("n_cycles must be at least 1");
    if (!(lambda >= 0.0)) throw ConfigError("lambda must be non-negative");
    if (!std::isfinite(field_scale)) throw ConfigError("field_scale must be finite");
    if (intensity_wcm2 && !(*intensity_wcm2 >= 0.0)) throw ConfigError("intensity must be non-negative");
    if (!(dr > 0.0)) throw ConfigError("dr must be positive");
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    if (system == SystemKind::Hydrogen) {
        if (!(r_min >= 0.0)) throw ConfigError("r_min must be non-negative");
        if (!(r_max > r_min + 2.0 * dr)) throw ConfigError("r_max must exceed r_min by at least two steps");
    }
    if (window == WindowKind::Custom && !(window_length > 0.0)) {
        throw ConfigError("custom window needs window_length > 0");
    }
    if (l_max < 2) throw ConfigError("l_max must be at least 2");
    if (!(oracle_dr > 0.0) || !(oracle_dt > 0.0)) throw ConfigError("oracle steps must be positive");
    if (!(x_max > 0.0) || !(dx > 0.0) || dx * 2.0 >= x_max) throw ConfigError("bad oscillator grid");
    if (!(tolerance > 0.0)) throw ConfigError("tolerance must be positive");
}

double RunConfig::effective_omega() const {
    if (omega) return *omega;
    return system == SystemKind::Harmonic ? 0.5 : HydrogenDefaults::omega;
}

int RunConfig::effective_cycles(int command_default) const { return n_cycles ? *n_cycles : command_default; }

double RunConfig::field_amplitude() const {
    return intensity_wcm2 ? field_amplitude_from_intensity_wcm2(*intensity_wcm2) : lambda;
}

PulseProfile RunConfig::pulse(int cycles_value) const {
    const PulseProfile p = PulseProfile::sin2(effective_omega(), cycles_value, field_amplitude());
    return field_scale == 1.0 ? p : p.scaled(field_scale);
}

TimeWindow RunConfig::window_for(const PulseProfile& p) const {
    switch (window) {
        case WindowKind::OneCycleAtPeak:
            return one_cycle_at_peak(p);
        case WindowKind::FullPulse:
            return full_pulse(p);
        case WindowKind::Custom:
            return {window_t0, window_length};
    }
    return one_cycle_at_peak(p);
}

std::vector<std::pair<std::string, std::string>> RunConfig::snapshot() const {
    std::vector<std::pair<std::string, std::string>> out;
    out.emplace_back("system", system == SystemKind::Harmonic ? "harmonic" : "hydrogen");
    out.emplace_back("omega", format(effective_omega()));
    out.emplace_back("n_cycles", n_cycles ? std::to_string(*n_cycles) : "default");
    out.emplace_back("lambda", format(field_amplitude()));
    if (intensity_wcm2) out.emplace_back("intensity_wcm2", format(*intensity_wcm2));
    out.emplace_back("field_scale", format(field_scale));
    std::string list;
    for (std::size_t k = 0; k < cycles.size(); ++k) list += (k ? ";" : "") + std::to_string(cycles[k]);
    out.emplace_back("cycles", list);
    out.emplace_back("r_min", format(r_min));
    out.emplace_back("r_max", format(r_max));
    out.emplace_back("dr", format(dr));
    out.emplace_back("dt", format(dt));
    out.emplace_back("stride", std::to_string(stride));
    const char* win = window == WindowKind::OneCycleAtPeak ? "one_cycle_at_peak"
                      : window == WindowKind::FullPulse    ? "full_pulse"
                                                           : "custom";
    out.emplace_back("window", win);
    if (window == WindowKind::Custom) {
        out.emplace_back("window_t0", format(window_t0));
        out.emplace_back("window_length", format(window_length));
    }
    out.emplace_back("normalization", normalization == FieldNormalization::Carrier ? "carrier" : "window_mean");
    out.emplace_back("oracle_tdse", oracle_tdse ? "true" : "false");
    out.emplace_back("l_max", std::to_string(l_max));
    out.emplace_back("oracle_dr", format(oracle_dr));
    out.emplace_back("oracle_dt", format(oracle_dt));
    out.emplace_back("x_max", format(x_max));
    out.emplace_back("dx", format(dx));
    out.emplace_back("tolerance", format(tolerance));
    return out;
}

}  // namespace tdlpt
