#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "jacobi_spectra/config.hpp"
#include "jacobi_spectra/csv.hpp"
#include "jacobi_spectra/run.hpp"

using namespace jacobi_spectra;

namespace {

const char* harper_text = R"(# sample configuration
n = 12
schedule = 64, 128   # trailing comment

[potential]
kind = CosineComposed
coeffs = 0, 2
theta = 1
)";

std::string config_error_key(Command command, const ConfigEntries& entries) {
  try {
    build_run_config(command, entries);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "";
}

ConfigEntries harper_entries() { return parse_config_text(harper_text); }

std::string value_of(const std::vector<std::pair<std::string, std::string>>& kv, const std::string& key) {
  for (const auto& [k, v] : kv) {
    if (k == key) return v;
  }
  return "<missing>";
}

}  // namespace

TEST_CASE("config text parsing") {
  const auto e = harper_entries();
  CHECK(e.at("n") == "12");
  CHECK(e.at("schedule") == "64, 128");
  CHECK(e.at("potential.kind") == "CosineComposed");
  CHECK(e.at("potential.coeffs") == "0, 2");
  CHECK(e.count("kind") == 0);
  CHECK_THROWS_AS(parse_config_text("[solver]\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("n 12\n"), ConfigError);
}

TEST_CASE("overrides replace file values") {
  auto e = harper_entries();
  apply_override(e, "n=40");
  apply_override(e, "potential.theta = pi/3");
  CHECK(e.at("n") == "40");
  CHECK(e.at("potential.theta") == "pi/3");
  CHECK_THROWS_AS(apply_override(e, "n"), ConfigError);
  const auto c = build_run_config(Command::Eigs, e);
  CHECK(c.n == 40);
  CHECK(c.potential.theta == Angle::pi_fraction(1.0, 3.0));
}

TEST_CASE("angle expressions") {
  CHECK(parse_angle("1").value() == 1.0);
  CHECK(parse_angle("pi").hi == std::numbers::pi);
  CHECK(parse_angle("2*pi/7").value() == doctest::Approx(2.0 * std::numbers::pi / 7.0).epsilon(1e-15));
  CHECK(parse_angle("0.5*pi").value() == doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-15));
  CHECK(parse_angle("3/4").value() == 0.75);
  CHECK_THROWS(parse_angle("pi*pi"));
  CHECK_THROWS(parse_angle("1/pi"));
  CHECK_THROWS(parse_angle("1/0"));
  CHECK_THROWS(parse_angle("abc"));
  CHECK_THROWS(parse_angle(""));
  CHECK_THROWS(parse_angle("1+0.5"));
  CHECK(parse_angle("1e-3").value() == 1e-3);
  CHECK(parse_angle("2.5e+1").value() == 25.0);
  const Angle two_word = parse_angle("1.0471975511965979-1.072081766451091e-16");
  CHECK(two_word.hi == 1.0471975511965979);
  CHECK(two_word.lo == -1.072081766451091e-16);
}

TEST_CASE("defaults") {
  auto e = harper_entries();
  e.erase("n");
  e.erase("schedule");
  const auto c = build_run_config(Command::Cdf, e);
  CHECK(c.n == 100);
  CHECK(c.schedule == std::vector<Index>{256, 512, 1024, 2048});
  CHECK(c.m_schedule == std::vector<Index>{128, 256, 512});
  CHECK(c.tol == 1e-10);
  CHECK(c.K == 6);
  CHECK(c.window_radius == 100000);
  CHECK(c.grid.points == 2001);
  CHECK(c.grid.min == doctest::Approx(-4.2));
  CHECK(c.grid.max == doctest::Approx(4.2));

  const auto flat = build_run_config(Command::Eigs, {{"potential.kind", "Constant"}});
  CHECK(flat.potential.value == 0.0);
}

TEST_CASE("config errors name the offending key") {
  auto e = harper_entries();
  auto with = [&](const std::string& k, const std::string& v) {
    auto copy = e;
    copy[k] = v;
    return copy;
  };
  CHECK(config_error_key(Command::Cdf, with("schedule", "")) == "schedule");
  CHECK(config_error_key(Command::Cdf, with("schedule", "128, 64")) == "schedule");
  CHECK(config_error_key(Command::Eigs, with("n", "0")) == "n");
  CHECK(config_error_key(Command::Eigs, with("n", "ten")) == "n");
  CHECK(config_error_key(Command::Eigs, with("tol", "-1")) == "tol");
  CHECK(config_error_key(Command::Eigs, with("bogus", "1")) == "bogus");
  CHECK(config_error_key(Command::Eigs, with("potential.value", "1")) == "potential.value");
  CHECK(config_error_key(Command::Eigs, with("potential.theta", "pi*pi")) == "potential.theta");
  CHECK(config_error_key(Command::Eigs, with("potential.kind", "Quadratic")) == "potential.kind");
  CHECK(config_error_key(Command::Moments, with("window_radius", "3")) == "window_radius");
  CHECK(config_error_key(Command::Cdf, with("grid", "-1, 1, 101")) == "grid");
  CHECK(config_error_key(Command::Spectrum, with("grid", "0, 0, 1")) == "grid");
  CHECK(config_error_key(Command::Butterfly, e) == "output");
  CHECK(config_error_key(Command::Butterfly, {{"potential.kind", "Constant"}, {"output", "x"}}) ==
        "potential.kind");
  CHECK(config_error_key(Command::Eigs, {{"potential.kind", "Explicit"},
                                         {"potential.samples", "1, 2, 3"},
                                         {"potential.origin", "1"},
                                         {"n", "5"}}) == "potential.samples");
  CHECK_THROWS_AS(command_from_string("plot"), ConfigError);
  CHECK(command_from_string("spectrum") == Command::Spectrum);
}

TEST_CASE("describe echoes every result-relevant key") {
  auto e = harper_entries();
  e["threads"] = "3";
  e["output"] = "/tmp/somewhere.csv";
  const auto kv = describe(build_run_config(Command::Cdf, e));
  CHECK(value_of(kv, "command") == "cdf");
  CHECK(value_of(kv, "potential.kind") == "CosineComposed");
  CHECK(value_of(kv, "potential.coeffs") == "0, 2");
  CHECK(value_of(kv, "schedule") == "64, 128");
  CHECK(value_of(kv, "tol") == "1e-10");
  CHECK(value_of(kv, "threads") == "<missing>");
  CHECK(value_of(kv, "output") == "<missing>");

  // The echoed theta reproduces the same angle.
  auto third = harper_entries();
  third["potential.theta"] = "pi/3";
  const auto theta_text = value_of(describe(build_run_config(Command::Eigs, third)), "potential.theta");
  const Angle back = parse_angle(theta_text);
  CHECK(back.hi == Angle::pi_fraction(1.0, 3.0).hi);
  CHECK(back.lo == Angle::pi_fraction(1.0, 3.0).lo);

  // Trig terms echo back through the config parser unchanged.
  ConfigEntries trig{{"potential.kind", "TrigPolynomial"}, {"potential.terms", "1 1 0; 0.5 pi/3 0.2"}};
  const auto first = build_run_config(Command::Eigs, trig);
  trig["potential.terms"] = value_of(describe(first), "potential.terms");
  const auto second = build_run_config(Command::Eigs, trig);
  REQUIRE(second.potential.terms.size() == 2);
  CHECK(second.potential.terms[1].frequency == first.potential.terms[1].frequency);
  CHECK(describe(second) == describe(first));
}

TEST_CASE("eigs output carries the header and certified values") {
  const auto c = build_run_config(Command::Eigs, {{"potential.kind", "Constant"}, {"n", "10"}});
  const auto out = execute(c);
  REQUIRE(out.files.size() == 1);
  const std::string& text = out.files[0].content;
  CHECK(text.rfind(std::string("# ") + version_string + "\n", 0) == 0);
  CHECK(text.find("# n = 10\n") != std::string::npos);
  std::istringstream in(text);
  const auto list = read_eigenvalues_csv(in);
  REQUIRE(list.values.size() == 10);
  for (std::size_t i = 0; i < 10; ++i) {
    const double exact = 2.0 * std::cos(static_cast<double>(10 - i) * std::numbers::pi / 11.0);
    CHECK(std::abs(list.values[i] - exact) <= 1e-10);
  }
}

TEST_CASE("periodic potentials get a note") {
  auto e = harper_entries();
  e["potential.theta"] = "pi/3";
  CHECK(execute(build_run_config(Command::Eigs, e)).summary.find("period 6") != std::string::npos);
  CHECK(execute(build_run_config(Command::Eigs, harper_entries())).summary.find("no period") != std::string::npos);
}

TEST_CASE("execute output does not depend on the thread count") {
  const std::vector<std::pair<Command, ConfigEntries>> cases{
      {Command::Eigs, harper_entries()},
      {Command::Cdf, harper_entries()},
      {Command::Spectrum, harper_entries()},
      {Command::Gaps, harper_entries()},
      {Command::Moments, [] {
         auto e = harper_entries();
         e["window_radius"] = "2000";
         return e;
       }()},
      {Command::Crosscheck, harper_entries()},
  };
  for (const auto& [command, entries] : cases) {
    auto one = entries;
    one["threads"] = "1";
    auto eight = entries;
    eight["threads"] = "8";
    const auto a = execute(build_run_config(command, one));
    const auto b = execute(build_run_config(command, eight));
    REQUIRE(a.files.size() == b.files.size());
    for (std::size_t i = 0; i < a.files.size(); ++i) CHECK(a.files[i].content == b.files[i].content);
    CHECK(a.summary == b.summary);
  }
}

TEST_CASE("run maps certification failures to exit 3") {
  auto e = harper_entries();
  e["tol"] = "1e-17";
  std::ostringstream out, err;
  CHECK(run(build_run_config(Command::Eigs, e), out, err) == exit_numerical_error);
  CHECK(out.str().empty());
  CHECK_FALSE(err.str().empty());
}

TEST_CASE("butterfly writes one report per theta and an index") {
  const auto dir = std::filesystem::temp_directory_path() / "jacobi_spectra_butterfly_test";
  std::filesystem::remove_all(dir);
  auto e = harper_entries();
  e["output"] = dir.string();
  e["theta_grid"] = "0.5, 1.5, 3";
  e["grid"] = "-4.2, 4.2, 85";
  std::ostringstream out, err;
  REQUIRE(run(build_run_config(Command::Butterfly, e), out, err) == exit_ok);
  CHECK(std::filesystem::exists(dir / "index.csv"));
  CHECK(std::filesystem::exists(dir / "theta_0000.csv"));
  CHECK(std::filesystem::exists(dir / "theta_0002.csv"));
  CHECK_FALSE(std::filesystem::exists(dir / "theta_0003.csv"));
  std::ifstream index(dir / "index.csv");
  std::string all((std::istreambuf_iterator<char>(index)), {});
  CHECK(all.find("index,theta,file,in_fraction,interior_gaps") != std::string::npos);
  std::filesystem::remove_all(dir);
}
