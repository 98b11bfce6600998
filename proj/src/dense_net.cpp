#include <cmath>
#include <stdexcept>

#include "spinrl/nets.hpp"

namespace spinrl {

DenseNet::DenseNet(std::vector<int> layer_sizes, double mu_star)
    : layer_sizes_(std::move(layer_sizes)), mu_star_(mu_star) {
  if (layer_sizes_.size() < 2)
    throw std::invalid_argument("DenseNet: need at least input and output layers");
  for (int n : layer_sizes_)
    if (n < 1) throw std::invalid_argument("DenseNet: layer sizes must be positive");
  if (layer_sizes_.back() != 1)
    throw std::invalid_argument("DenseNet: single output neuron expected");
  if (!(mu_star_ > 0))
    throw std::invalid_argument("DenseNet: mu_star must be positive");

  std::size_t count = 0;
  for (std::size_t l = 1; l < layer_sizes_.size(); ++l)
    count += static_cast<std::size_t>(layer_sizes_[l]) * layer_sizes_[l - 1] +
             layer_sizes_[l];
  params_.assign(count, 0.0);
}

std::size_t DenseNet::weight_offset(int layer) const {
  std::size_t off = 0;
  for (int l = 1; l < layer; ++l)
    off += static_cast<std::size_t>(layer_sizes_[l]) * layer_sizes_[l - 1] +
           layer_sizes_[l];
  return off;
}

std::size_t DenseNet::bias_offset(int layer) const {
  return weight_offset(layer) +
         static_cast<std::size_t>(layer_sizes_[layer]) * layer_sizes_[layer - 1];
}

double DenseNet::forward(const std::vector<double>& input,
                         DenseCache* cache) const {
  if (input.size() != static_cast<std::size_t>(layer_sizes_.front()))
    throw std::invalid_argument("DenseNet::forward: input length mismatch");
  const int depth = static_cast<int>(layer_sizes_.size()) - 1;

  std::vector<double> a = input;
  if (cache) {
    cache->pre.assign(depth, {});
    cache->act.assign(depth + 1, {});
    cache->act[0] = input;
  }
  for (int l = 1; l <= depth; ++l) {
    const int n_out = layer_sizes_[l];
    const int n_in = layer_sizes_[l - 1];
    const double* w = params_.data() + weight_offset(l);
    const double* b = params_.data() + bias_offset(l);
    std::vector<double> z(n_out);
    for (int r = 0; r < n_out; ++r) {
      double s = b[r];
      const double* row = w + static_cast<std::size_t>(r) * n_in;
      for (int c = 0; c < n_in; ++c) s += row[c] * a[c];
      z[r] = s;
    }
    if (cache) cache->pre[l - 1] = z;
    std::vector<double> act(n_out);
    if (l < depth) {
      for (int r = 0; r < n_out; ++r) act[r] = z[r] > 0 ? z[r] : 0.0;
    } else {
      act[0] = mu_star_ * std::tanh(z[0]);
    }
    if (cache) cache->act[l] = act;
    a = std::move(act);
  }
  const double mu = a[0];
  if (cache) cache->mu = mu;
  return mu;
}

void DenseNet::backward(const DenseCache& cache, double seed,
                        std::vector<double>* grad) const {
  if (!grad || grad->size() != params_.size())
    throw std::invalid_argument("DenseNet::backward: gradient buffer mismatch");
  const int depth = static_cast<int>(layer_sizes_.size()) - 1;
  if (cache.pre.size() != static_cast<std::size_t>(depth))
    throw std::invalid_argument("DenseNet::backward: stale cache");

  // Output layer: mu = mu_star * tanh(z_L).
  const double t = std::tanh(cache.pre[depth - 1][0]);
  std::vector<double> dz{seed * mu_star_ * (1.0 - t * t)};

  for (int l = depth; l >= 1; --l) {
    const int n_out = layer_sizes_[l];
    const int n_in = layer_sizes_[l - 1];
    double* gw = grad->data() + weight_offset(l);
    double* gb = grad->data() + bias_offset(l);
    const std::vector<double>& a_prev = cache.act[l - 1];
    for (int r = 0; r < n_out; ++r) {
      double* grow = gw + static_cast<std::size_t>(r) * n_in;
      for (int c = 0; c < n_in; ++c) grow[c] += dz[r] * a_prev[c];
      gb[r] += dz[r];
    }
    if (l == 1) break;
    const double* w = params_.data() + weight_offset(l);
    std::vector<double> da(n_in, 0.0);
    for (int r = 0; r < n_out; ++r) {
      const double* row = w + static_cast<std::size_t>(r) * n_in;
      for (int c = 0; c < n_in; ++c) da[c] += row[c] * dz[r];
    }
    const std::vector<double>& z_prev = cache.pre[l - 2];
    std::vector<double> dz_prev(n_in);
    for (int c = 0; c < n_in; ++c)
      dz_prev[c] = z_prev[c] > 0 ? da[c] : 0.0;
    dz = std::move(dz_prev);
  }
}

std::vector<double> DenseNet::forward_sequence(
    const std::vector<std::vector<double>>& inputs) const {
  std::vector<double> mus;
  mus.reserve(inputs.size());
  for (const auto& x : inputs) mus.push_back(forward(x));
  return mus;
}

void DenseNet::backward_sequence(const std::vector<std::vector<double>>& inputs,
                                 const std::vector<double>& seeds,
                                 std::vector<double>* grad) const {
  if (inputs.size() != seeds.size())
    throw std::invalid_argument("DenseNet::backward_sequence: length mismatch");
  DenseCache cache;
  for (std::size_t t = 0; t < inputs.size(); ++t) {
    forward(inputs[t], &cache);
    backward(cache, seeds[t], grad);
  }
}

void DenseNet::init_params(Rng& rng) {
  const int depth = static_cast<int>(layer_sizes_.size()) - 1;
  for (int l = 1; l <= depth; ++l) {
    const int n_out = layer_sizes_[l];
    const int n_in = layer_sizes_[l - 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(n_in));
    double* w = params_.data() + weight_offset(l);
    for (int k = 0; k < n_out * n_in; ++k) w[k] = rng.uniform(-bound, bound);
    double* b = params_.data() + bias_offset(l);
    for (int r = 0; r < n_out; ++r) b[r] = 0.0;
  }
}

std::vector<std::uint32_t> DenseNet::arch() const {
  std::vector<std::uint32_t> a;
  for (int n : layer_sizes_) a.push_back(static_cast<std::uint32_t>(n));
  return a;
}

}  // namespace spinrl
