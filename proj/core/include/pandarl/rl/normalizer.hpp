#pragma once

#include <span>
#include <vector>

namespace pandarl::rl {

// Running per-coordinate mean/variance with a raw input clip before the
// statistics and a symmetric clip after standardization. With no data yet it
// is the identity (up to the clips).
class Normalizer {
 public:
  Normalizer() = default;
  explicit Normalizer(int dim, double raw_clip = 200.0, double norm_clip = 5.0);

  void observe(std::span<const double> x);
  void normalize(std::span<const double> x, std::span<double> out) const;
  std::vector<double> normalize(std::span<const double> x) const;

  int dim() const { return dim_; }
  double count() const { return count_; }
  double mean(int i) const { return mean_[static_cast<std::size_t>(i)]; }
  // Variance floored at kVarianceFloor, i.e. std never drops below 0.01.
  double variance(int i) const;
  double raw_clip() const { return raw_clip_; }
  double norm_clip() const { return norm_clip_; }

  // Checkpoint access.
  const std::vector<double>& raw_mean() const { return mean_; }
  const std::vector<double>& raw_m2() const { return m2_; }
  void restore(double count, std::vector<double> mean, std::vector<double> m2);

  static constexpr double kVarianceFloor = 1e-4;

 private:
  int dim_ = 0;
  double raw_clip_ = 200.0;
  double norm_clip_ = 5.0;
  double count_ = 0.0;
  std::vector<double> mean_;
  std::vector<double> m2_;  // sum of squared deviations (Welford)
};

}  // namespace pandarl::rl
