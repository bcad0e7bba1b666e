#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pandarl/nn/mat.hpp"
#include "pandarl/rng.hpp"

namespace pandarl::nn {

// Output head: critics are linear, actors bound their mean through tanh.
enum class Head { linear, bounded };

struct AdamConfig {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct LayerGrads {
  Mat w;
  std::vector<double> b;
};

struct Grads {
  std::vector<LayerGrads> layers;
};

// Scratch for one forward/backward pass; reusing it across calls keeps the
// training loop allocation-free.
struct Workspace {
  std::vector<Mat> acts;  // acts[0] = input, acts[i+1] = output of layer i
  Mat delta_a;
  Mat delta_b;
};

// Fully connected network with rectifier hidden layers. Weights are stored
// (fan_in x fan_out) so both passes run as row-major matrix products.
class Mlp {
 public:
  struct Layer {
    Mat w;
    std::vector<double> b;
    Mat m_w, v_w;                 // Adam first/second moments
    std::vector<double> m_b, v_b;
  };

  Mlp() = default;

  // dims = {input, hidden..., output}; init is uniform fan-in scaling.
  static Mlp make(const std::vector<int>& dims, Head head, Rng& rng);

  int input_dim() const { return layers_.empty() ? 0 : layers_.front().w.rows(); }
  int output_dim() const { return layers_.empty() ? 0 : layers_.back().w.cols(); }
  std::vector<int> dims() const;
  Head head() const { return head_; }
  std::uint64_t adam_steps() const { return adam_steps_; }

  // Batch forward; the result lives in ws.acts.back() until the next call.
  // Throws std::invalid_argument on an input width mismatch.
  const Mat& forward(const Mat& x, Workspace& ws) const;

  // Single-sample convenience wrapper.
  std::vector<double> forward(std::span<const double> x, Workspace& ws) const;

  // Reverse-mode pass for the forward cached in ws. upstream is dL/doutput
  // (including any batch scaling); fills parameter gradients and, when dx is
  // given, the gradient with respect to the input.
  void backward(const Workspace& ws, const Mat& upstream, Grads& grads, Mat* dx = nullptr) const;

  // Bias-corrected Adam over all parameters. Throws std::invalid_argument
  // when any gradient is non-finite; parameters are untouched in that case.
  void adam_step(const Grads& grads, const AdamConfig& cfg);

  // this = tau * this + (1 - tau) * online, elementwise over weights and
  // biases. Throws std::invalid_argument on a shape mismatch.
  void polyak_from(const Mlp& online, double tau);

  std::size_t parameter_count() const;

  std::vector<Layer>& layers() { return layers_; }
  const std::vector<Layer>& layers() const { return layers_; }
  void set_head(Head head) { head_ = head; }
  void set_adam_steps(std::uint64_t n) { adam_steps_ = n; }

 private:
  std::vector<Layer> layers_;
  Head head_ = Head::linear;
  std::uint64_t adam_steps_ = 0;
};

inline void polyak_update(Mlp& target, const Mlp& online, double tau) {
  target.polyak_from(online, tau);
}

void resize_like(Grads& grads, const Mlp& net);

}  // namespace pandarl::nn
