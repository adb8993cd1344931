#include <cmath>

#include "doctest.h"
#include "hopsim/designspace.hpp"

using namespace hopsim;

TEST_CASE("level counts") {
  CHECK(levels_analog(9, 8, 8, true) == 585226);  // 9*255*255 + 1
  CHECK(levels_hybrid(9, 1, true) == 10);
  CHECK(levels_hybrid(1, 1, false) == 1);
}

TEST_CASE("enob of the published design points") {
  CHECK(enob(levels_analog(9, 8, 8, true)) ==
        doctest::Approx(19.2).epsilon(0.05 / 19.2));
  CHECK(enob(levels_hybrid(9, 8, true)) ==
        doctest::Approx(11.2).epsilon(0.05 / 11.2));
  CHECK(enob(levels_hybrid(9, 1, true)) ==
        doctest::Approx(3.3).epsilon(0.05 / 3.3));
  // Equation-literal variant drops the zero level.
  CHECK(enob(levels_hybrid(9, 1, false)) ==
        doctest::Approx(std::log2(9.0)));
}

TEST_CASE("adc max rate") {
  CHECK(adc_max_rate(levels_hybrid(9, 8, true), 5e12) ==
        doctest::Approx(2.2e9).epsilon(0.02));
  CHECK(adc_max_rate(levels_analog(9, 8, 8, true), 5e12) ==
        doctest::Approx(8.5e6).epsilon(0.02));
  CHECK(adc_max_rate(1, 5e12) == doctest::Approx(5e12));
}

TEST_CASE("system speed is the lesser of the two rates") {
  double analog3 = adc_max_rate(levels_analog(9, 3, 3, true), 5e12);
  CHECK(system_speed(analog3, 40e9) == doctest::Approx(11.3e9).epsilon(0.01));
  double hybrid2 = adc_max_rate(levels_hybrid(9, 2, true), 5e12);
  CHECK(system_speed(hybrid2, 40e9) == doctest::Approx(40e9));
  CHECK(system_speed(7e9, 7e9) == doctest::Approx(7e9));
}

TEST_CASE("tops formulas") {
  double analog3_speed =
      system_speed(adc_max_rate(levels_analog(9, 3, 3, true), 5e12), 40e9);
  CHECK(tops_analog(9, analog3_speed) == doctest::Approx(0.1).epsilon(0.05));

  double hybrid8_speed =
      system_speed(adc_max_rate(levels_hybrid(9, 8, true), 5e12), 40e9);
  CHECK(tops_hybrid(9, hybrid8_speed, 8) ==
        doctest::Approx(2.5e-3).epsilon(0.05));

  double hybrid1_speed =
      system_speed(adc_max_rate(levels_hybrid(9, 1, true), 5e12), 40e9);
  CHECK(tops_hybrid(9, hybrid1_speed, 8) ==
        doctest::Approx(4.5e-2).epsilon(0.05));
}

TEST_CASE("tops is independent of lanes once the ADC limits the speed") {
  // L cancels: more lanes -> more levels -> proportionally slower ADC.
  for (int l : {3, 9, 27, 81}) {
    double speed = adc_max_rate(levels_analog(l, 4, 4, false), 5e12);
    double t = tops_analog(l, speed);
    double t9 = tops_analog(9, adc_max_rate(levels_analog(9, 4, 4, false),
                                            5e12));
    CHECK(t == doctest::Approx(t9).epsilon(1e-12));
  }
}

TEST_CASE("analog enob dominates hybrid enob, equal only at 1-bit input") {
  for (int n = 1; n <= 8; ++n) {
    CHECK(enob(levels_analog(9, 1, n, true)) ==
          doctest::Approx(enob(levels_hybrid(9, n, true))));
    for (int m = 2; m <= 8; ++m)
      CHECK(enob(levels_analog(9, m, n, true)) >
            enob(levels_hybrid(9, n, true)));
  }
}

TEST_CASE("adc rate strictly decreases with level count") {
  double prev = adc_max_rate(1, 5e12);
  for (std::int64_t levels = 2; levels < 1000; levels += 37) {
    double r = adc_max_rate(levels, 5e12);
    CHECK(r < prev);
    prev = r;
  }
}

TEST_CASE("table generation reproduces the published columns") {
  DesignTables t = generate_tables(40e9, 8, 9, 5e12, true);
  REQUIRE(t.analog.size() == 8);
  REQUIRE(t.hybrid.size() == 8);

  const double analog_enob[] = {3.3, 6.4, 8.8, 11.0, 13.1, 15.1, 17.1, 19.2};
  const double hybrid_enob[] = {3.3, 4.8, 6.0, 7.1, 8.1, 9.1, 10.2, 11.2};
  const double analog_tops[] = {3.6e-1, 3.6e-1, 1e-1, 2.2e-2,
                                5.2e-3, 1.2e-3, 3.1e-4, 8e-5};
  const double hybrid_tops[] = {4.5e-2, 4.5e-2, 4.5e-2, 4.1e-2,
                                2e-2, 9.9e-3, 4.9e-3, 2.5e-3};
  for (int i = 0; i < 8; ++i) {
    CHECK(std::fabs(t.analog[static_cast<std::size_t>(i)].enob_raw -
                    analog_enob[i]) < 0.05);
    CHECK(std::fabs(t.hybrid[static_cast<std::size_t>(i)].enob_raw -
                    hybrid_enob[i]) < 0.05);
    CHECK(std::fabs(t.analog[static_cast<std::size_t>(i)].tops -
                    analog_tops[i]) /
              analog_tops[i] <
          0.05);
    CHECK(std::fabs(t.hybrid[static_cast<std::size_t>(i)].tops -
                    hybrid_tops[i]) /
              hybrid_tops[i] <
          0.05);
  }
  CHECK(t.tops_crossing_precision == 3);
}

TEST_CASE("table output is deterministic and byte-stable") {
  DesignTables a = generate_tables(40e9);
  DesignTables b = generate_tables(40e9);
  CHECK(design_csv(a.analog) == design_csv(b.analog));
  CHECK(design_json(a) == design_json(b));
  CHECK(design_csv(a.analog).find("scheme,precision_bits") == 0);
}

TEST_CASE("rate formatting mimics the published rounding") {
  CHECK(format_rate(11.312e9) == "11.3 GHz");
  CHECK(format_rate(8.5437e6) == "8.5 MHz");
  CHECK(format_rate(500e9) == "500 GHz");
}
