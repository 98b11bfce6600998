#include <cmath>
#include <stdexcept>

#include "spinrl/nets.hpp"

namespace spinrl {

namespace {
double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
}  // namespace

LstmNet::LstmNet(int n_in, int units, int dense_hidden, double mu_star)
    : n_in_(n_in), units_(units), dense_hidden_(dense_hidden),
      mu_star_(mu_star) {
  if (n_in_ < 1 || units_ < 1 || dense_hidden_ < 1)
    throw std::invalid_argument("LstmNet: sizes must be positive");
  if (!(mu_star_ > 0))
    throw std::invalid_argument("LstmNet: mu_star must be positive");
  const std::size_t gate_block =
      static_cast<std::size_t>(units_) * n_in_ +
      static_cast<std::size_t>(units_) * units_ + units_;
  const std::size_t count = 4 * gate_block +
                            static_cast<std::size_t>(dense_hidden_) * units_ +
                            dense_hidden_ + dense_hidden_ + 1;
  params_.assign(count, 0.0);
}

std::size_t LstmNet::gate_w(int gate) const {
  const std::size_t gate_block =
      static_cast<std::size_t>(units_) * n_in_ +
      static_cast<std::size_t>(units_) * units_ + units_;
  return static_cast<std::size_t>(gate) * gate_block;
}
std::size_t LstmNet::gate_u(int gate) const {
  return gate_w(gate) + static_cast<std::size_t>(units_) * n_in_;
}
std::size_t LstmNet::gate_b(int gate) const {
  return gate_u(gate) + static_cast<std::size_t>(units_) * units_;
}
std::size_t LstmNet::dense_w() const { return gate_w(4); }
std::size_t LstmNet::dense_b() const {
  return dense_w() + static_cast<std::size_t>(dense_hidden_) * units_;
}
std::size_t LstmNet::out_w() const { return dense_b() + dense_hidden_; }
std::size_t LstmNet::out_b() const { return out_w() + dense_hidden_; }

std::vector<double> LstmNet::forward(
    const std::vector<std::vector<double>>& inputs, LstmCache* cache) const {
  if (inputs.empty())
    throw std::invalid_argument("LstmNet::forward: empty sequence");
  for (const auto& x : inputs)
    if (x.size() != static_cast<std::size_t>(n_in_))
      throw std::invalid_argument("LstmNet::forward: input length mismatch");

  const int U = units_;
  const int H = dense_hidden_;
  std::vector<double> h(U, 0.0), c(U, 0.0);
  std::vector<double> mus;
  mus.reserve(inputs.size());
  if (cache) cache->steps.assign(inputs.size(), {});

  for (std::size_t t = 0; t < inputs.size(); ++t) {
    const std::vector<double>& x = inputs[t];
    std::vector<double> gates[4];
    for (int g = 0; g < 4; ++g) {
      const double* w = params_.data() + gate_w(g);
      const double* u = params_.data() + gate_u(g);
      const double* b = params_.data() + gate_b(g);
      std::vector<double> z(U);
      for (int r = 0; r < U; ++r) {
        double s = b[r];
        const double* wrow = w + static_cast<std::size_t>(r) * n_in_;
        for (int k = 0; k < n_in_; ++k) s += wrow[k] * x[k];
        const double* urow = u + static_cast<std::size_t>(r) * U;
        for (int k = 0; k < U; ++k) s += urow[k] * h[k];
        z[r] = (g == kCand) ? std::tanh(s) : sigmoid(s);
      }
      gates[g] = std::move(z);
    }
    std::vector<double> c_next(U), tanh_c(U), h_next(U);
    for (int r = 0; r < U; ++r) {
      c_next[r] = gates[kForget][r] * c[r] + gates[kInput][r] * gates[kCand][r];
      tanh_c[r] = std::tanh(c_next[r]);
      h_next[r] = gates[kOutput][r] * tanh_c[r];
    }

    std::vector<double> d(H);
    {
      const double* wd = params_.data() + dense_w();
      const double* bd = params_.data() + dense_b();
      for (int r = 0; r < H; ++r) {
        double s = bd[r];
        const double* row = wd + static_cast<std::size_t>(r) * U;
        for (int k = 0; k < U; ++k) s += row[k] * h_next[k];
        d[r] = std::tanh(s);
      }
    }
    double z_out = params_[out_b()];
    {
      const double* wo = params_.data() + out_w();
      for (int k = 0; k < H; ++k) z_out += wo[k] * d[k];
    }
    const double mu = mu_star_ * std::tanh(z_out);
    mus.push_back(mu);

    if (cache) {
      LstmStepCache& sc = cache->steps[t];
      sc.x = x;
      sc.h_prev = h;
      sc.c_prev = c;
      sc.i = gates[kInput];
      sc.f = gates[kForget];
      sc.g = gates[kCand];
      sc.o = gates[kOutput];
      sc.c = c_next;
      sc.tanh_c = tanh_c;
      sc.h = h_next;
      sc.dense_act = d;
      sc.out_pre = z_out;
      sc.mu = mu;
    }
    h = std::move(h_next);
    c = std::move(c_next);
  }
  return mus;
}

void LstmNet::backward(const LstmCache& cache, const std::vector<double>& seeds,
                       std::vector<double>* grad) const {
  if (!grad || grad->size() != params_.size())
    throw std::invalid_argument("LstmNet::backward: gradient buffer mismatch");
  if (cache.steps.size() != seeds.size())
    throw std::invalid_argument("LstmNet::backward: seed length mismatch");
  if (cache.steps.empty()) return;

  const int U = units_;
  const int H = dense_hidden_;
  std::vector<double> dh_next(U, 0.0), dc_next(U, 0.0);

  for (int t = static_cast<int>(cache.steps.size()) - 1; t >= 0; --t) {
    const LstmStepCache& sc = cache.steps[t];

    const double to = std::tanh(sc.out_pre);
    const double dz_out = seeds[t] * mu_star_ * (1.0 - to * to);
    {
      double* gwo = grad->data() + out_w();
      for (int k = 0; k < H; ++k) gwo[k] += dz_out * sc.dense_act[k];
      (*grad)[out_b()] += dz_out;
    }

    std::vector<double> dz_d(H);
    {
      const double* wo = params_.data() + out_w();
      for (int r = 0; r < H; ++r) {
        const double dd = wo[r] * dz_out;
        dz_d[r] = dd * (1.0 - sc.dense_act[r] * sc.dense_act[r]);
      }
      double* gwd = grad->data() + dense_w();
      double* gbd = grad->data() + dense_b();
      for (int r = 0; r < H; ++r) {
        double* row = gwd + static_cast<std::size_t>(r) * U;
        for (int k = 0; k < U; ++k) row[k] += dz_d[r] * sc.h[k];
        gbd[r] += dz_d[r];
      }
    }

    std::vector<double> dh(U, 0.0);
    {
      const double* wd = params_.data() + dense_w();
      for (int r = 0; r < H; ++r) {
        const double* row = wd + static_cast<std::size_t>(r) * U;
        for (int k = 0; k < U; ++k) dh[k] += row[k] * dz_d[r];
      }
      for (int k = 0; k < U; ++k) dh[k] += dh_next[k];
    }

    std::vector<double> dz[4];
    std::vector<double> dc(U);
    for (int r = 0; r < U; ++r)
      dc[r] = dh[r] * sc.o[r] * (1.0 - sc.tanh_c[r] * sc.tanh_c[r]) +
              dc_next[r];
    dz[kOutput].resize(U);
    dz[kForget].resize(U);
    dz[kInput].resize(U);
    dz[kCand].resize(U);
    for (int r = 0; r < U; ++r) {
      dz[kOutput][r] = dh[r] * sc.tanh_c[r] * sc.o[r] * (1.0 - sc.o[r]);
      dz[kForget][r] = dc[r] * sc.c_prev[r] * sc.f[r] * (1.0 - sc.f[r]);
      dz[kInput][r] = dc[r] * sc.g[r] * sc.i[r] * (1.0 - sc.i[r]);
      dz[kCand][r] = dc[r] * sc.i[r] * (1.0 - sc.g[r] * sc.g[r]);
    }

    std::fill(dh_next.begin(), dh_next.end(), 0.0);
    for (int g = 0; g < 4; ++g) {
      double* gw = grad->data() + gate_w(g);
      double* gu = grad->data() + gate_u(g);
      double* gb = grad->data() + gate_b(g);
      const double* u = params_.data() + gate_u(g);
      for (int r = 0; r < U; ++r) {
        const double d = dz[g][r];
        double* wrow = gw + static_cast<std::size_t>(r) * n_in_;
        for (int k = 0; k < n_in_; ++k) wrow[k] += d * sc.x[k];
        double* urow = gu + static_cast<std::size_t>(r) * U;
        for (int k = 0; k < U; ++k) urow[k] += d * sc.h_prev[k];
        gb[r] += d;
        const double* uprow = u + static_cast<std::size_t>(r) * U;
        for (int k = 0; k < U; ++k) dh_next[k] += uprow[k] * d;
      }
    }
    for (int r = 0; r < U; ++r) dc_next[r] = dc[r] * sc.f[r];
  }
}

std::vector<double> LstmNet::forward_sequence(
    const std::vector<std::vector<double>>& inputs) const {
  return forward(inputs);
}

void LstmNet::backward_sequence(const std::vector<std::vector<double>>& inputs,
                                const std::vector<double>& seeds,
                                std::vector<double>* grad) const {
  LstmCache cache;
  forward(inputs, &cache);
  backward(cache, seeds, grad);
}

void LstmNet::init_params(Rng& rng) {
  const double wb = 1.0 / std::sqrt(static_cast<double>(n_in_));
  const double ub = 1.0 / std::sqrt(static_cast<double>(units_));
  for (int g = 0; g < 4; ++g) {
    double* w = params_.data() + gate_w(g);
    for (int k = 0; k < units_ * n_in_; ++k) w[k] = rng.uniform(-wb, wb);
    double* u = params_.data() + gate_u(g);
    for (int k = 0; k < units_ * units_; ++k) u[k] = rng.uniform(-ub, ub);
    double* b = params_.data() + gate_b(g);
    const double bias = (g == kForget) ? 1.0 : 0.0;
    for (int r = 0; r < units_; ++r) b[r] = bias;
  }
  {
    double* wd = params_.data() + dense_w();
    for (int k = 0; k < dense_hidden_ * units_; ++k)
      wd[k] = rng.uniform(-ub, ub);
    double* bd = params_.data() + dense_b();
    for (int r = 0; r < dense_hidden_; ++r) bd[r] = 0.0;
  }
  {
    const double ob = 1.0 / std::sqrt(static_cast<double>(dense_hidden_));
    double* wo = params_.data() + out_w();
    for (int k = 0; k < dense_hidden_; ++k) wo[k] = rng.uniform(-ob, ob);
    params_[out_b()] = 0.0;
  }
}

std::vector<std::uint32_t> LstmNet::arch() const {
  return {static_cast<std::uint32_t>(n_in_), static_cast<std::uint32_t>(units_),
          static_cast<std::uint32_t>(dense_hidden_), 1u};
}

}  // namespace spinrl
