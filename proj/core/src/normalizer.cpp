#include "pandarl/rl/normalizer.hpp"

#include <cmath>
#include <stdexcept>

#include "pandarl/math.hpp"

namespace pandarl::rl {

Normalizer::Normalizer(int dim, double raw_clip, double norm_clip)
    : dim_(dim),
      raw_clip_(raw_clip),
      norm_clip_(norm_clip),
      mean_(static_cast<std::size_t>(dim), 0.0),
      m2_(static_cast<std::size_t>(dim), 0.0) {}

void Normalizer::observe(std::span<const double> x) {
  if (static_cast<int>(x.size()) != dim_) {
    throw std::invalid_argument("Normalizer::observe: dimension mismatch");
  }
  count_ += 1.0;
  for (int i = 0; i < dim_; ++i) {
    const double v = clamp(x[static_cast<std::size_t>(i)], -raw_clip_, raw_clip_);
    const double delta = v - mean_[static_cast<std::size_t>(i)];
    mean_[static_cast<std::size_t>(i)] += delta / count_;
    m2_[static_cast<std::size_t>(i)] += delta * (v - mean_[static_cast<std::size_t>(i)]);
  }
}

double Normalizer::variance(int i) const {
  if (count_ < 1.0) return 1.0;
  const double var = m2_[static_cast<std::size_t>(i)] / count_;
  return std::max(var, kVarianceFloor);
}

void Normalizer::normalize(std::span<const double> x, std::span<double> out) const {
  if (static_cast<int>(x.size()) != dim_ || out.size() != x.size()) {
    throw std::invalid_argument("Normalizer::normalize: dimension mismatch");
  }
  for (int i = 0; i < dim_; ++i) {
    const double v = clamp(x[static_cast<std::size_t>(i)], -raw_clip_, raw_clip_);
    const double mu = count_ < 1.0 ? 0.0 : mean_[static_cast<std::size_t>(i)];
    const double sd = std::sqrt(variance(i));
    out[static_cast<std::size_t>(i)] = clamp((v - mu) / sd, -norm_clip_, norm_clip_);
  }
}

std::vector<double> Normalizer::normalize(std::span<const double> x) const {
  std::vector<double> out(x.size());
  normalize(x, out);
  return out;
}

void Normalizer::restore(double count, std::vector<double> mean, std::vector<double> m2) {
  if (static_cast<int>(mean.size()) != dim_ || static_cast<int>(m2.size()) != dim_) {
    throw std::invalid_argument("Normalizer::restore: dimension mismatch");
  }
  count_ = count;
  mean_ = std::move(mean);
  m2_ = std::move(m2);
}

}  // namespace pandarl::rl
