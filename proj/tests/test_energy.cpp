#include <doctest.h>

#include <cmath>
#include <random>

#include "regionsim/energy.hpp"
#include "regionsim/error.hpp"

using namespace regionsim;

namespace {

// Draw in watts from first principles: dBm grid, then linear in radiated mW.
double draw_oracle(std::size_t level) {
  const double dbm = -20.0 + 32.0 * static_cast<double>(level) / 9.0;
  const double mw = std::pow(10.0, dbm / 10.0);
  const double lo = std::pow(10.0, -2.0);
  const double hi = std::pow(10.0, 1.2);
  return (60.0 + 100.0 * (mw - lo) / (hi - lo)) / 1000.0;
}

}  // namespace

TEST_CASE("params: ten levels from -20 to 12 dBm") {
  const EnergyParams p;
  const auto levels = p.levels_dbm();
  CHECK(levels.front() == doctest::Approx(-20.0));
  CHECK(levels.back() == doctest::Approx(12.0));
  for (std::size_t i = 1; i < kPowerLevels; ++i) CHECK(levels[i] > levels[i - 1]);
  EnergyParams bad;
  bad.p_sleep_w = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("tx: 1000 bits at the top level cost 3.2 mJ") {
  const EnergyParams p;
  CHECK(tx_energy(1000, 9, p) == doctest::Approx(0.0032).epsilon(1e-12));
}

TEST_CASE("tx: bottom over top level is 60/160") {
  const EnergyParams p;
  CHECK(tx_energy(4096, 0, p) / tx_energy(4096, 9, p) == doctest::Approx(60.0 / 160.0).epsilon(1e-12));
}

TEST_CASE("tx: draw matches the interpolation at every level and is monotone") {
  const EnergyParams p;
  for (std::size_t l = 0; l < kPowerLevels; ++l) {
    CHECK(radio_draw_w(l, p) == doctest::Approx(draw_oracle(l)).epsilon(1e-12));
    if (l > 0) CHECK(radio_draw_w(l, p) > radio_draw_w(l - 1, p));
    CHECK(tx_energy(3000, l, p) == doctest::Approx(3 * tx_energy(1000, l, p)).epsilon(1e-12));
  }
}

TEST_CASE("tx: invalid level and zero bits are rejected") {
  const EnergyParams p;
  CHECK_THROWS_AS(tx_energy(1000, 10, p), Error);
  CHECK_THROWS_AS(tx_energy(0, 3, p), Error);
}

TEST_CASE("rx: 1000 bits cost 2.4 mJ and less than top-level tx") {
  const EnergyParams p;
  CHECK(rx_energy(1000, p) == doctest::Approx(0.0024).epsilon(1e-12));
  CHECK(rx_energy(1000, p) < tx_energy(1000, 9, p));
  CHECK_THROWS_AS(rx_energy(0, p), Error);
}

TEST_CASE("levels: ranges scale with the path-loss exponent") {
  const EnergyParams p;
  CHECK(level_range(9, 60.0, p) == 60.0);
  // 32 dB below the top level with alpha = 2 is a factor 10^1.6 in distance.
  CHECK(level_range(0, 60.0, p) == doctest::Approx(60.0 / std::pow(10.0, 1.6)).epsilon(1e-12));
  CHECK(min_level_for_distance(60.0, 60.0, p) == 9u);
  CHECK(min_level_for_distance(0.5, 60.0, p) == 0u);
  CHECK_FALSE(min_level_for_distance(60.01, 60.0, p).has_value());
  CHECK_THROWS_AS(hop_energy(1000, 61.0, 60.0, p), Error);
  CHECK(hop_energy(1000, 60.0, 60.0, p) == doctest::Approx(0.0032 + 0.0024).epsilon(1e-12));
}

TEST_CASE("ledger: sleep 60 s costs 30 mJ, sense 10 s costs 120 mJ") {
  const EnergyParams p;
  EnergyLedger ledger(2, p);
  ledger.accrue(0, DutyMode::Sleep, 60.0);
  ledger.accrue(1, DutyMode::Sense, 10.0);
  CHECK(ledger.spent(0, EnergyMode::Sleep) == doctest::Approx(0.030).epsilon(1e-12));
  CHECK(ledger.spent(1, EnergyMode::Sense) == doctest::Approx(0.120).epsilon(1e-12));
  CHECK(ledger.remaining(0) == doctest::Approx(100.0 - 0.030).epsilon(1e-12));
}

TEST_CASE("ledger: zero duration leaves it unchanged, negative is rejected") {
  EnergyLedger ledger(1, EnergyParams{});
  ledger.accrue(0, DutyMode::Sense, 0.0);
  CHECK(ledger.spent(0) == 0.0);
  CHECK(ledger.remaining(0) == 100.0);
  CHECK_THROWS_AS(ledger.accrue(0, DutyMode::Sense, -1.0), Error);
  CHECK_THROWS_AS(ledger.charge(0, EnergyMode::Tx, -1.0), Error);
}

TEST_CASE("ledger: lazy accrual follows mode switches") {
  const EnergyParams p;
  EnergyLedger ledger(1, p);
  ledger.switch_mode(0, DutyMode::Sense, 10.0);  // slept 0..10
  ledger.switch_mode(0, DutyMode::Sleep, 30.0);  // sensed 10..30
  ledger.accrue_to(0, 50.0);                     // slept 30..50
  CHECK(ledger.spent(0, EnergyMode::Sleep) == doctest::Approx(30 * 0.0005).epsilon(1e-12));
  CHECK(ledger.spent(0, EnergyMode::Sense) == doctest::Approx(20 * 0.012).epsilon(1e-12));
  CHECK(ledger.timeline().size() == 2);
  CHECK(ledger.depletion_time(0).value() == doctest::Approx(50.0 + ledger.remaining(0) / 0.0005));
}

TEST_CASE("ledger: a depleted node stops accruing") {
  EnergyParams p;
  p.battery_j = 1.0;
  EnergyLedger ledger(1, p, DutyMode::Sense);
  ledger.accrue_to(0, 200.0);
  CHECK(ledger.depleted(0));
  ledger.mark_dead(0, 200.0);
  const double spent = ledger.spent(0);
  ledger.accrue_to(0, 400.0);
  ledger.charge(0, EnergyMode::Tx, 0.5);
  CHECK(ledger.spent(0) == spent);
  CHECK_FALSE(ledger.alive(0));
}

TEST_CASE("ledger: conservation and monotone spend under random operations") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  EnergyParams p;
  p.battery_j = 5.0;
  EnergyLedger ledger(8, p);
  std::vector<std::array<double, kEnergyModes>> last(8);
  double now = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const auto node = static_cast<std::uint32_t>(rng() % 8);
    now += u(rng);
    switch (rng() % 4) {
      case 0: ledger.charge(node, EnergyMode::Tx, tx_energy(1024, rng() % 10, p)); break;
      case 1: ledger.charge(node, EnergyMode::Rx, rx_energy(1024, p)); break;
      case 2: ledger.switch_mode(node, rng() % 2 ? DutyMode::Sense : DutyMode::Sleep, now); break;
      default: ledger.accrue_all(now); break;
    }
    for (std::uint32_t n = 0; n < 8; ++n) {
      for (std::size_t m = 0; m < kEnergyModes; ++m) {
        const double s = ledger.spent(n, static_cast<EnergyMode>(m));
        CHECK(s >= last[n][m]);
        last[n][m] = s;
      }
    }
  }
  CHECK(ledger.conservation_error() <= 1e-9);
  for (std::uint32_t n = 0; n < 8; ++n) {
    CHECK(std::abs(ledger.budget() - ledger.remaining(n) - ledger.spent(n)) <= 1e-9);
  }
  double sum = 0.0;
  for (std::uint32_t n = 0; n < 8; ++n) sum += ledger.spent(n);
  CHECK(ledger.total() == doctest::Approx(sum).epsilon(1e-12));
}

TEST_CASE("N_min: 160 m square with 40 m sensing needs 11 sensors") {
  CHECK(min_sensor_count(25600.0, 40.0) == 11);
}

TEST_CASE("N_min: area of 3R^2/2 needs exactly one") {
  for (double r : {1.0, 4.0, 10.0, 25.0}) CHECK(min_sensor_count(1.5 * r * r, r) == 1);
}

TEST_CASE("N_min: linear in area, monotone in both arguments") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> area(1e3, 1e6);
  std::uniform_real_distribution<double> range(1.0, 30.0);
  for (int i = 0; i < 2000; ++i) {
    const double a = area(rng);
    const double r = range(rng);
    const double exact = 2.0 * a / (3.0 * r * r);
    CHECK(min_sensor_count(a, r) == static_cast<std::uint64_t>(std::ceil(exact)));
    CHECK(min_sensor_count(2 * a, r) >= min_sensor_count(a, r));
    CHECK(min_sensor_count(2 * a, r) <= 2 * min_sensor_count(a, r));
    CHECK(min_sensor_count(a, r * 1.1) <= min_sensor_count(a, r));
  }
  // Pre-ceiling doubling: exact multiples stay exact.
  CHECK(min_sensor_count(2 * 150.0 * 10, 10.0) == 2 * min_sensor_count(150.0 * 10, 10.0));
}

TEST_CASE("N_min: sensing range must be below the area side") {
  CHECK_THROWS_AS(min_sensor_count(25600.0, 160.0), Error);
  CHECK_THROWS_AS(min_sensor_count(0.0, 10.0), Error);
  CHECK_THROWS_AS(min_sensor_count(100.0, 0.0), Error);
}

TEST_CASE("scaling diagnostics: flat lifetime and constant S_i pass") {
  const std::vector<Lemma4Point> pts{{35, 8400, 40}, {70, 8400, 40}, {105, 8400, 40}, {140, 8400, 40}};
  const auto r = lemma4_diagnostics(pts);
  CHECK(r.passed());
  CHECK(r.energy_cv == 0.0);
  CHECK(r.slope == doctest::Approx(0.0));
}

TEST_CASE("scaling diagnostics: linear lifetime passes, super-linear fails") {
  const std::vector<Lemma4Point> linear{{35, 100, 10}, {70, 200, 10}, {105, 300, 10}, {140, 400, 10}};
  CHECK(lemma4_diagnostics(linear).lifetime_linear);
  CHECK(lemma4_diagnostics(linear).r_squared == doctest::Approx(1.0));
  const std::vector<Lemma4Point> quad{{35, 100, 10}, {70, 400, 10}, {105, 900, 10}, {140, 1600, 10}};
  CHECK_FALSE(lemma4_diagnostics(quad).lifetime_linear);
}

TEST_CASE("scaling diagnostics: S_i proportional to N fails the constancy check") {
  const std::vector<Lemma4Point> pts{{35, 8400, 35}, {70, 8400, 70}, {105, 8400, 105}, {140, 8400, 140}};
  const auto r = lemma4_diagnostics(pts);
  CHECK_FALSE(r.energy_constant);
  CHECK_FALSE(r.passed());
}

TEST_CASE("scaling diagnostics: fewer than three points are rejected") {
  const std::vector<Lemma4Point> pts{{35, 1, 1}, {70, 1, 1}};
  CHECK_THROWS_AS(lemma4_diagnostics(pts), Error);
}

TEST_CASE("savings") {
  CHECK(energy_savings(38.0, 100.0) == doctest::Approx(62.0));
  CHECK(energy_savings(100.0, 100.0) == 0.0);
  CHECK(energy_savings(120.0, 100.0) == doctest::Approx(-20.0));
  CHECK_THROWS_AS(energy_savings(1.0, 0.0), Error);
}
