#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "tdse/grid.hpp"

namespace tdse {

/// dx * sum_{j=1}^{N-1} |psi_j|^2.
double total_norm(const WaveField& field);

/// Probability current at an interior index from the central difference:
///   J_j = 2 Im( conj(psi_j) (psi_{j+1} - psi_{j-1}) / (2 dx) ).
/// Throws std::out_of_range for j = 0, j >= N.
double current_at(const WaveField& field, std::size_t j);

struct TransmissionReflection {
  double T;
  double R;
};

/// T = J_T / (2k|A|^2), R = -J_R / (2k|A|^2). Throws std::invalid_argument for
/// k <= 0 or A = 0.
TransmissionReflection extract_rt(double j_transmitted, double j_reflected, double k, complex amplitude);

/// Current samples at one probe; sample times advance by exactly dt.
class CurrentSeries {
 public:
  CurrentSeries(std::size_t probe_index, double dt) : probe_index_(probe_index), dt_(dt) {}

  /// Throws std::invalid_argument unless t continues the series by one dt.
  void append(double t, double current);

  std::size_t probe_index() const noexcept { return probe_index_; }
  double dt() const noexcept { return dt_; }
  const std::vector<std::pair<double, double>>& samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }

  /// Mean current over samples [first, first + count).
  double mean(std::size_t first, std::size_t count) const;

 private:
  std::size_t probe_index_;
  double dt_;
  std::vector<std::pair<double, double>> samples_;
};

/// Splits the series into consecutive windows of `window` samples and returns the
/// time at the start of the earliest window after which every pair of consecutive
/// window means differs by less than `tol` relative to the larger magnitude.
/// std::nullopt when that never happens (or fewer than two windows exist).
/// A positive `reference` floors the magnitude used for the relative test, so a
/// current that settles near zero can be judged against e.g. the incident current.
std::optional<double> steady_state_time(const CurrentSeries& series, std::size_t window, double tol,
                                        double reference = 0.0);

/// Mean of the last `window` samples, provided the series has reached steady
/// state; std::nullopt otherwise.
std::optional<double> steady_current(const CurrentSeries& series, std::size_t window, double tol,
                                     double reference = 0.0);

}  // namespace tdse
