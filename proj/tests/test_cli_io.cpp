#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "tdlpt/commands.hpp"

using namespace tdlpt;

namespace {

// Small hydrogen setup so command-level tests stay fast.
RunConfig quick_hydrogen() {
    RunConfig c;
    c.omega = 0.5;
    c.n_cycles = 1;
    c.r_max = 20.0;
    c.dt = 5e-3;
    c.stride = 20;
    return c;
}

std::string temp_dir(const std::string& name) {
    const auto p = std::filesystem::temp_directory_path() / ("tdlpt_test_" + name);
    std::filesystem::remove_all(p);
    return p.string();
}

}  // namespace

TEST_CASE("config defaults") {
    const RunConfig c;
    CHECK(c.effective_omega() == 0.056);
    CHECK(c.dr == 0.1);
    CHECK(c.dt == 0.001);
    CHECK(c.r_min == 1e-6);
    CHECK(c.r_max == 40.0);
    CHECK(c.lambda == 0.03);
    CHECK_NOTHROW(c.validate());
    RunConfig h;
    h.system = SystemKind::Harmonic;
    CHECK(h.effective_omega() == 0.5);
}

TEST_CASE("config parsing is strict") {
    std::istringstream ok("# comment\nsystem = harmonic\n\nomega=0.3 # trailing\ncycles = 5, 10\noracle_tdse = true\n");
    const RunConfig c = parse_config(ok);
    CHECK(c.system == SystemKind::Harmonic);
    CHECK(c.effective_omega() == 0.3);
    CHECK(c.cycles == std::vector<int>{5, 10});
    CHECK(c.oracle_tdse);

    std::istringstream unknown("dr = 0.1\nfoo = 1\n");
    try {
        parse_config(unknown);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    std::istringstream bad_number("dt = 0.0.1\n");
    CHECK_THROWS_AS(parse_config(bad_number), ConfigError);
    std::istringstream no_equals("dt 0.1\n");
    CHECK_THROWS_AS(parse_config(no_equals), ConfigError);
    CHECK_THROWS_AS(load_config_file("/nonexistent/tdlpt.cfg"), ConfigError);

    RunConfig v;
    apply_setting(v, "dr", "-1");
    CHECK_THROWS_AS(v.validate(), ConfigError);
    CHECK_THROWS_AS(parse_int_list("5,,10"), ConfigError);
    CHECK(split_assignment(" a = b ") == std::pair<std::string, std::string>{"a", "b"});
}

TEST_CASE("intensity overrides lambda") {
    RunConfig c;
    apply_setting(c, "intensity_wcm2", "3.15850e13");
    CHECK(c.field_amplitude() == doctest::Approx(0.03).epsilon(1e-4));
    CHECK(c.pulse(5).lambda() == doctest::Approx(0.03).epsilon(1e-4));
}

TEST_CASE("numbers are written with 12 significant digits") {
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(1e-20) == "1e-20");
    CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("records round-trip exactly") {
    ResultRecord r = make_record(RunConfig{}.snapshot(), {"t", "x", "status"});
    r.add_meta("summary.note", "a = b");
    r.add_row({"0", format_number(std::sqrt(2.0)), "ok"});
    r.add_row({"1", "nan", "error: something; else"});
    const std::string text = emit(r);
    CHECK(parse_record(text) == r);
    CHECK(r.meta("schema") == kCsvSchema);
    CHECK(r.meta("config.dr") == "0.1");
    CHECK(r.number(0, "x") == doctest::Approx(std::sqrt(2.0)));
    CHECK_THROWS_AS(r.add_row({"1", "2"}), RecordError);
    CHECK_THROWS_AS(r.add_row({"1", "2,3", "x"}), RecordError);
    CHECK_THROWS_AS(r.column("missing"), RecordError);

    const std::string dir = temp_dir("records");
    write_record_file(r, dir + "/sub/r.csv");
    CHECK(read_record_file(dir + "/sub/r.csv") == r);
    std::filesystem::remove_all(dir);
}

TEST_CASE("golden header rows") {
    const RunConfig c = quick_hydrogen();
    const HydrogenRun run = run_hydrogen(c, 1);
    const std::string text = emit(hydrogen_series_record(c, run));
    CHECK(text.find("# schema = tdlpt-csv/1\n# code_version = 0.1.0\n") == 0);
    CHECK(text.find("\nt,g,re_E2,im_E2,dipole\n") != std::string::npos);

    const ResultRecord t1 = table1_record(c, {});
    CHECK(t1.columns == std::vector<std::string>{"N", "E2_cycle", "alpha", "E2_pulse", "E2_cycle_im", "E2_pulse_im",
                                                 "ref_E2_cycle", "ref_alpha", "ref_E2_pulse", "rel_dev_E2_cycle",
                                                 "rel_dev_alpha", "rel_dev_E2_pulse", "status"});
    CHECK(t1.meta("reference.provenance") == kTable1Provenance);
}

TEST_CASE("identical configs give bit-identical CSV") {
    const RunConfig c = quick_hydrogen();
    const std::string a = emit(hydrogen_series_record(c, run_hydrogen(c, 1)));
    const std::string b = emit(hydrogen_series_record(c, run_hydrogen(c, 1)));
    CHECK(a == b);
}

TEST_CASE("zero-amplitude pulse gives identically zero observables") {
    RunConfig c = quick_hydrogen();
    c.field_scale = 0.0;
    const ResultRecord r = hydrogen_series_record(c, run_hydrogen(c, 1));
    REQUIRE(r.rows.size() > 2);
    for (std::size_t k = 0; k < r.rows.size(); ++k) {
        for (const char* col : {"g", "re_E2", "im_E2", "dipole"}) CHECK(r.number(k, col) == 0.0);
    }
}

TEST_CASE("sweep rows come back in N order and failures stay per row") {
    RunConfig c = quick_hydrogen();
    c.jobs = 3;
    const auto rows = run_table1(c, {3, 1, 2});
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].n_cycles == 3);
    CHECK(rows[1].n_cycles == 1);
    CHECK(rows[2].n_cycles == 2);
    for (const auto& r : rows) CHECK(r.ok);

    Table1Row failed;
    failed.n_cycles = 5;
    failed.error = "step 12, non-finite";
    const ResultRecord rec = table1_record(c, {rows[0], failed});
    CHECK(rec.rows[0][rec.column("status")] == "no_reference");
    CHECK(rec.rows[1][rec.column("status")] == "error: step 12; non-finite");
    CHECK(rec.rows[1][rec.column("E2_cycle")] == "nan");
    CHECK(rec.number(1, "ref_E2_cycle") == -1.067);
}

TEST_CASE("table 1 fixture") {
    CHECK(table1_reference().size() == 6);
    CHECK(table1_reference_for(50)->alpha == 4.583);
    CHECK_FALSE(table1_reference_for(7).has_value());
}

TEST_CASE("exit codes") {
    std::ostringstream out, err;
    CHECK(run_guarded([] { return CommandResult{}; }, out, err) == kExitOk);
    CHECK(run_guarded([]() -> CommandResult { throw ConfigError("x"); }, out, err) == kExitConfigError);
    CHECK(run_guarded([]() -> CommandResult { throw NumericalError("x"); }, out, err) == kExitNumericalFailure);

    RunConfig c = quick_hydrogen();
    c.output_dir = temp_dir("fig2");
    CHECK(run_guarded([&] { return cmd_figure_data(c, "fig2"); }, out, err) == kExitConfigError);
    CHECK(run_guarded([&] { return cmd_figure_data(c, "fig3"); }, out, err) == kExitConfigError);
    CHECK(run_guarded([&] { return cmd_ho_verify(c); }, out, err) == kExitConfigError);

    RunConfig h;
    h.system = SystemKind::Harmonic;
    h.output_dir = c.output_dir;
    CHECK(run_guarded([&] { return cmd_ho_shift(h, 0.5); }, out, err) == kExitOk);
    CHECK(run_guarded([&] { return cmd_ho_shift(h, 1.0); }, out, err) == kExitConfigError);
    CHECK(run_guarded([&] { return cmd_ho_verify(h); }, out, err) == kExitOk);
    h.dt = 0.1;
    CHECK(run_guarded([&] { return cmd_ho_verify(h); }, out, err) == kExitThresholdBreach);
    std::filesystem::remove_all(c.output_dir);
}

TEST_CASE("oscillator verification at lambda = 0 is exact") {
    RunConfig h;
    h.system = SystemKind::Harmonic;
    h.lambda = 0.0;
    const HoVerifyReport rep = ho_verify(h);
    CHECK(rep.pass);
    CHECK(rep.max_deviation == 0.0);
}

TEST_CASE("fig1 data: Re E2 extremum near the pulse peak") {
    RunConfig c;
    c.n_cycles = 5;
    c.output_dir = temp_dir("fig1");
    std::ostringstream out, err;
    REQUIRE(run_guarded([&] { return cmd_figure_data(c, "fig1"); }, out, err) == kExitOk);
    const ResultRecord r = read_record_file(c.output_dir + "/fig1_N5.csv");
    CHECK(r.columns == std::vector<std::string>{"t", "g", "re_E2", "im_E2"});
    std::size_t best = 0;
    for (std::size_t k = 0; k < r.rows.size(); ++k) {
        if (std::abs(r.number(k, "re_E2")) > std::abs(r.number(best, "re_E2"))) best = k;
    }
    const PulseProfile p = c.pulse(5);
    CHECK(std::abs(r.number(best, "t") - p.peak_time()) <= p.period());
    std::filesystem::remove_all(c.output_dir);
}
