#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <stdexcept>

#include "run_config.hpp"

using namespace tvcli;

TEST_CASE("default config round-trips through text") {
  const RunConfig cfg;
  const std::string text = cfg.to_text();
  CHECK(RunConfig::parse(text) == cfg);
  CHECK(RunConfig::parse(text).to_text() == text);
}

TEST_CASE("non-default config round-trips") {
  RunConfig cfg;
  cfg.nu = {4, 3, 2, 1, 1, 0, -1, -2};
  cfg.chi_sign = 1;
  cfg.chi_power = {0.1, -2.5e-7};
  cfg.s = {{0.5, 0.0}, {1.0 / 3.0, 0.25}, {-0.125, 10.0}};
  cfg.seed = 18446744073709551615ULL;
  cfg.samples = 123;
  cfg.trials = 7;
  cfg.quad_nodes = 8000;
  cfg.quad_t_lo = -45.5;
  cfg.quad_t_hi = 12.0;
  cfg.quad_tolerance = 3e-12;
  cfg.output = "out/result.json";
  const std::string text = cfg.to_text();
  const RunConfig back = RunConfig::parse(text);
  CHECK(back == cfg);
  CHECK(back.to_text() == text);
}

TEST_CASE("canonical file is reproduced byte for byte") {
  const std::string text =
      "nu = 2 1 1 0\n"
      "chi_sign = 1\n"
      "chi_power = 0.5,0\n"
      "s = 0.5,0 1.25,-3\n"
      "seed = 9\n"
      "samples = 1000\n"
      "trials = 50\n"
      "quad_nodes = 4000\n"
      "quad_t_lo = -30\n"
      "quad_t_hi = 10\n"
      "quad_tolerance = 1e-10\n"
      "output =\n";
  CHECK(RunConfig::parse(text).to_text() == text);
}

TEST_CASE("comments, blank lines and partial files") {
  const RunConfig cfg = RunConfig::parse("# header\n\n  nu = 1, 0  \nseed=5\n");
  CHECK(cfg.nu == std::vector<long>{1, 0});
  CHECK(cfg.seed == 5);
  CHECK(cfg.samples == RunConfig{}.samples);
}

TEST_CASE("bad input names the line") {
  CHECK_THROWS_AS(RunConfig::parse("nu 2 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(RunConfig::parse("colour = red\n"), std::invalid_argument);
  CHECK_THROWS_AS(RunConfig::parse("seed = -3\n"), std::invalid_argument);
  CHECK_THROWS_AS(RunConfig::parse("s = 1,x\n"), std::invalid_argument);
  try {
    (void)RunConfig::parse("seed = 1\nsamples = many\n");
    FAIL("expected an error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("number formatting is shortest round-trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(-30.0) == "-30");
  CHECK(parse_double(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(parse_complex("2") == Complex(2.0, 0.0));
  CHECK(format_complex({1.5, -2.0}) == "1.5,-2");
}
