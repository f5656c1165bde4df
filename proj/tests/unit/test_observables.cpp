#include <doctest.h>

#include <cmath>

#include "tdse/observables.hpp"

using tdse::complex;

TEST_CASE("total_norm") {
  const auto g = tdse::build_grid(0.0, 1.1, 0.1);  // 12 points, 10 interior
  CHECK(tdse::total_norm(tdse::WaveField::zeros(g)) == 0.0);
  std::vector<complex> ones(g.n_points(), 1.0);
  ones.front() = ones.back() = 0.0;
  CHECK(tdse::total_norm(tdse::WaveField(g, ones)) == doctest::Approx(1.0).epsilon(1e-14));
  // boundary values are excluded
  std::vector<complex> edges(g.n_points());
  edges.front() = edges.back() = 5.0;
  CHECK(tdse::total_norm(tdse::WaveField(g, edges)) == 0.0);

  const auto wide = tdse::build_grid(-20.0, 20.0, 0.05);
  CHECK(tdse::total_norm(tdse::gaussian_packet(wide, 1.0, 1.5, 0.4)) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("current_at") {
  const auto g = tdse::build_grid(-1.0, 1.0, 0.05);
  std::vector<complex> wave(g.n_points()), real(g.n_points());
  for (std::size_t j = 0; j < g.n_points(); ++j) {
    wave[j] = tdse::plane_wave_value(1.0, 2.4, g.position(j), 0.3);
    real[j] = std::cos(3.0 * g.position(j));
  }
  const tdse::WaveField w(g, wave);
  CHECK(tdse::current_at(w, 10) == doctest::Approx(4.7884882915567744).epsilon(1e-13));
  CHECK(tdse::current_at(tdse::WaveField(g, real), 10) == 0.0);

  // amplitude scales as |A|^2, direction flips with k
  std::vector<complex> back(g.n_points());
  for (std::size_t j = 0; j < g.n_points(); ++j) back[j] = tdse::plane_wave_value(2.0, -2.4, g.position(j), 0.0);
  CHECK(tdse::current_at(tdse::WaveField(g, back), 20) == doctest::Approx(-4.0 * 4.7884882915567744).epsilon(1e-13));

  CHECK_THROWS_AS(tdse::current_at(w, 0), std::out_of_range);
  CHECK_THROWS_AS(tdse::current_at(w, g.last()), std::out_of_range);
}

TEST_CASE("extract_rt") {
  const auto full = tdse::extract_rt(4.8, 0.0, 2.4, 1.0);
  CHECK(full.T == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(full.R == 0.0);

  const auto tr = tdse::extract_rt(2.0117, -2.7883, 2.4, 1.0);
  CHECK(tr.T == doctest::Approx(0.4191).epsilon(1e-4));
  CHECK(tr.R == doctest::Approx(0.5809).epsilon(1e-4));

  const auto scaled = tdse::extract_rt(2.0117 * 2.0, -2.7883 * 2.0, 2.4, complex(1.0, 1.0));
  CHECK(scaled.T == doctest::Approx(tr.T));

  CHECK_THROWS_AS(tdse::extract_rt(1.0, 1.0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(tdse::extract_rt(1.0, 1.0, 1.0, 0.0), std::invalid_argument);
}

namespace {

tdse::CurrentSeries series_of(std::size_t n, double dt, double (*f)(double)) {
  tdse::CurrentSeries s(5, dt);
  for (std::size_t i = 0; i < n; ++i) s.append(static_cast<double>(i) * dt, f(static_cast<double>(i) * dt));
  return s;
}

}  // namespace

TEST_CASE("CurrentSeries enforces a uniform time step") {
  tdse::CurrentSeries s(3, 0.01);
  s.append(0.0, 1.0);
  s.append(0.01, 1.0);
  CHECK_THROWS_AS(s.append(0.03, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(s.append(0.01, 1.0), std::invalid_argument);
  CHECK(s.size() == 2);
  CHECK(s.mean(0, 2) == 1.0);
  CHECK_THROWS_AS(s.mean(1, 2), std::out_of_range);
}

TEST_CASE("steady_state_time") {
  const auto flat = series_of(1000, 0.01, [](double) { return 3.0; });
  REQUIRE(tdse::steady_state_time(flat, 100, 1e-3).has_value());
  CHECK(*tdse::steady_state_time(flat, 100, 1e-3) == doctest::Approx(1.0));
  CHECK(*tdse::steady_current(flat, 100, 1e-3) == 3.0);

  const auto ramp = series_of(1000, 0.01, [](double t) { return 1.0 + t; });
  CHECK_FALSE(tdse::steady_state_time(ramp, 100, 1e-3).has_value());
  CHECK_FALSE(tdse::steady_current(ramp, 100, 1e-3).has_value());

  // relaxation: exp(-t) decay onto 2; settles once the window means agree to 1e-3
  const auto relax = series_of(2000, 0.01, [](double t) { return 2.0 - std::exp(-t); });
  const auto t_s = tdse::steady_state_time(relax, 100, 1e-3);
  REQUIRE(t_s.has_value());
  CHECK(*t_s == doctest::Approx(7.0));

  const auto short_series = series_of(150, 0.01, [](double) { return 1.0; });
  CHECK_FALSE(tdse::steady_state_time(short_series, 100, 1e-3).has_value());
  CHECK_THROWS_AS(tdse::steady_state_time(flat, 1, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(tdse::steady_state_time(flat, 100, 0.0), std::invalid_argument);
}

TEST_CASE("steady_state_time with a reference scale") {
  // A current settling at ~1e-4 with 1e-6 wiggles never settles relative to itself...
  const auto tiny = series_of(2000, 0.01, [](double t) { return 1e-4 + 1e-6 * std::sin(0.37 * t); });
  CHECK_FALSE(tdse::steady_state_time(tiny, 100, 1e-3).has_value());
  // ...but does relative to an incident current of 4.8.
  CHECK(tdse::steady_state_time(tiny, 100, 1e-3, 4.8).has_value());
}
