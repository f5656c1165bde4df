#include "tdse/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tdse {

double total_norm(const WaveField& field) {
  const auto psi = field.values();
  double sum = 0.0;
  for (std::size_t j = 1; j + 1 < psi.size(); ++j) sum += std::norm(psi[j]);
  return field.grid().dx() * sum;
}

double current_at(const WaveField& field, std::size_t j) {
  if (j == 0 || j + 1 >= field.size()) {
    throw std::out_of_range("current_at: index " + std::to_string(j) + " is not interior");
  }
  const complex diff = (field[j + 1] - field[j - 1]) / (2.0 * field.grid().dx());
  return 2.0 * std::imag(std::conj(field[j]) * diff);
}

TransmissionReflection extract_rt(double j_transmitted, double j_reflected, double k, complex amplitude) {
  const double a2 = std::norm(amplitude);
  if (!(k > 0.0)) throw std::invalid_argument("extract_rt: k must be positive");
  if (!(a2 > 0.0)) throw std::invalid_argument("extract_rt: amplitude must be nonzero");
  const double incident = 2.0 * k * a2;
  return {j_transmitted / incident, -j_reflected / incident};
}

void CurrentSeries::append(double t, double current) {
  if (!samples_.empty()) {
    const double expected = samples_.back().first + dt_;
    if (!(t > samples_.back().first) || std::abs(t - expected) > 1e-9 * std::max(1.0, std::abs(t))) {
      throw std::invalid_argument("CurrentSeries: sample times must advance by dt");
    }
  }
  samples_.emplace_back(t, current);
}

double CurrentSeries::mean(std::size_t first, std::size_t count) const {
  if (count == 0 || first + count > samples_.size()) {
    throw std::out_of_range("CurrentSeries::mean: window outside the series");
  }
  double sum = 0.0;
  for (std::size_t i = first; i < first + count; ++i) sum += samples_[i].second;
  return sum / static_cast<double>(count);
}

std::optional<double> steady_state_time(const CurrentSeries& series, std::size_t window, double tol,
                                        double reference) {
  if (window < 2) throw std::invalid_argument("steady_state_time: window must be >= 2");
  if (!(tol > 0.0)) throw std::invalid_argument("steady_state_time: tol must be positive");
  const std::size_t n_windows = series.size() / window;
  if (n_windows < 2) return std::nullopt;

  std::vector<double> means(n_windows);
  for (std::size_t w = 0; w < n_windows; ++w) means[w] = series.mean(w * window, window);

  // Walk backwards to find the start of the trailing run of settled pairs.
  std::size_t first_settled = n_windows - 1;
  for (std::size_t w = n_windows - 1; w-- > 0;) {
    const double scale = std::max({std::abs(means[w]), std::abs(means[w + 1]), reference});
    if (std::abs(means[w + 1] - means[w]) <= tol * scale) {
      first_settled = w;
    } else {
      break;
    }
  }
  if (first_settled == n_windows - 1) return std::nullopt;
  return series.samples()[(first_settled + 1) * window].first;
}

std::optional<double> steady_current(const CurrentSeries& series, std::size_t window, double tol,
                                     double reference) {
  if (!steady_state_time(series, window, tol, reference)) return std::nullopt;
  return series.mean(series.size() - window, window);
}

}  // namespace tdse
