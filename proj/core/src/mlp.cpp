#include "pandarl/nn/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace pandarl::nn {

namespace {

bool all_finite(const double* p, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(p[i])) return false;
  }
  return true;
}

void adam_update(double* theta, double* m, double* v, const double* g, std::size_t n,
                 const AdamConfig& cfg, double bc1, double bc2) {
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
    v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
    const double m_hat = m[i] / bc1;
    const double v_hat = v[i] / bc2;
    theta[i] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
  }
}

}  // namespace

Mlp Mlp::make(const std::vector<int>& dims, Head head, Rng& rng) {
  if (dims.size() < 2) throw std::invalid_argument("Mlp::make: need at least two dims");
  Mlp net;
  net.head_ = head;
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    Layer layer;
    const int fan_in = dims[i];
    const int fan_out = dims[i + 1];
    layer.w.resize(fan_in, fan_out);
    layer.b.assign(static_cast<std::size_t>(fan_out), 0.0);
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (std::size_t j = 0; j < layer.w.size(); ++j) {
      layer.w.data()[j] = rng.uniform(-bound, bound);
    }
    for (double& b : layer.b) b = rng.uniform(-bound, bound);
    layer.m_w.resize(fan_in, fan_out);
    layer.m_w.fill(0.0);
    layer.v_w.resize(fan_in, fan_out);
    layer.v_w.fill(0.0);
    layer.m_b.assign(layer.b.size(), 0.0);
    layer.v_b.assign(layer.b.size(), 0.0);
    net.layers_.push_back(std::move(layer));
  }
  return net;
}

std::vector<int> Mlp::dims() const {
  std::vector<int> d;
  if (layers_.empty()) return d;
  d.push_back(layers_.front().w.rows());
  for (const Layer& l : layers_) d.push_back(l.w.cols());
  return d;
}

const Mat& Mlp::forward(const Mat& x, Workspace& ws) const {
  if (x.cols() != input_dim()) {
    throw std::invalid_argument("Mlp::forward: input width " + std::to_string(x.cols()) +
                                " != " + std::to_string(input_dim()));
  }
  ws.acts.resize(layers_.size() + 1);
  ws.acts[0].resize(x.rows(), x.cols());
  std::copy(x.data(), x.data() + x.size(), ws.acts[0].data());

  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const Layer& l = layers_[i];
    gemm_nn(ws.acts[i], l.w, ws.acts[i + 1]);
    add_row_vector(ws.acts[i + 1], l.b);
    const bool last = i + 1 == layers_.size();
    if (!last) {
      relu_inplace(ws.acts[i + 1]);
    } else if (head_ == Head::bounded) {
      tanh_inplace(ws.acts[i + 1]);
    }
  }
  return ws.acts.back();
}

std::vector<double> Mlp::forward(std::span<const double> x, Workspace& ws) const {
  Mat in(1, static_cast<int>(x.size()));
  std::copy(x.begin(), x.end(), in.data());
  const Mat& out = forward(in, ws);
  return std::vector<double>(out.data(), out.data() + out.cols());
}

void Mlp::backward(const Workspace& ws, const Mat& upstream, Grads& grads, Mat* dx) const {
  resize_like(grads, *this);
  const int batch = ws.acts[0].rows();
  if (upstream.rows() != batch || upstream.cols() != output_dim()) {
    throw std::invalid_argument("Mlp::backward: upstream shape mismatch");
  }

  Workspace& mws = const_cast<Workspace&>(ws);
  Mat* delta = &mws.delta_a;
  Mat* delta_next = &mws.delta_b;

  delta->resize(batch, upstream.cols());
  std::copy(upstream.data(), upstream.data() + upstream.size(), delta->data());
  if (head_ == Head::bounded) {
    const Mat& y = ws.acts.back();
    for (std::size_t i = 0; i < delta->size(); ++i) {
      const double t = y.data()[i];
      delta->data()[i] *= 1.0 - t * t;
    }
  }

  for (int i = static_cast<int>(layers_.size()) - 1; i >= 0; --i) {
    const Layer& l = layers_[static_cast<std::size_t>(i)];
    LayerGrads& lg = grads.layers[static_cast<std::size_t>(i)];
    gemm_tn(ws.acts[static_cast<std::size_t>(i)], *delta, lg.w);
    column_sums(*delta, lg.b);

    const bool propagate = i > 0 || dx != nullptr;
    if (!propagate) break;
    gemm_nt(*delta, l.w, *delta_next);
    if (i > 0) {
      // Rectifier mask from the cached post-activation.
      const Mat& act = ws.acts[static_cast<std::size_t>(i)];
      for (std::size_t j = 0; j < delta_next->size(); ++j) {
        if (act.data()[j] <= 0.0) delta_next->data()[j] = 0.0;
      }
    }
    std::swap(delta, delta_next);
  }
  if (dx != nullptr) {
    dx->resize(batch, input_dim());
    std::copy(delta->data(), delta->data() + delta->size(), dx->data());
  }
}

void Mlp::adam_step(const Grads& grads, const AdamConfig& cfg) {
  if (grads.layers.size() != layers_.size()) {
    throw std::invalid_argument("adam_step: gradient/parameter layer count mismatch");
  }
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const LayerGrads& lg = grads.layers[i];
    if (!all_finite(lg.w.data(), lg.w.size()) || !all_finite(lg.b.data(), lg.b.size())) {
      throw std::invalid_argument("adam_step: non-finite gradient");
    }
  }
  ++adam_steps_;
  const double corr1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(adam_steps_));
  const double corr2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(adam_steps_));
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    Layer& l = layers_[i];
    const LayerGrads& lg = grads.layers[i];
    adam_update(l.w.data(), l.m_w.data(), l.v_w.data(), lg.w.data(), l.w.size(), cfg, corr1,
                corr2);
    adam_update(l.b.data(), l.m_b.data(), l.v_b.data(), lg.b.data(), l.b.size(), cfg, corr1,
                corr2);
  }
}

void Mlp::polyak_from(const Mlp& online, double tau) {
  if (dims() != online.dims()) {
    throw std::invalid_argument("polyak_from: shape mismatch");
  }
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    Layer& t = layers_[i];
    const Layer& o = online.layers_[i];
    for (std::size_t j = 0; j < t.w.size(); ++j) {
      t.w.data()[j] = tau * t.w.data()[j] + (1.0 - tau) * o.w.data()[j];
    }
    for (std::size_t j = 0; j < t.b.size(); ++j) {
      t.b[j] = tau * t.b[j] + (1.0 - tau) * o.b[j];
    }
  }
}

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (const Layer& l : layers_) n += l.w.size() + l.b.size();
  return n;
}

void resize_like(Grads& grads, const Mlp& net) {
  grads.layers.resize(net.layers().size());
  for (std::size_t i = 0; i < grads.layers.size(); ++i) {
    const Mlp::Layer& l = net.layers()[i];
    grads.layers[i].w.resize(l.w.rows(), l.w.cols());
    grads.layers[i].b.assign(l.b.size(), 0.0);
  }
}

}  // namespace pandarl::nn
