#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "spinrl/rng.hpp"

namespace spinrl {

enum class NetKind : std::uint32_t { Dense = 0, Lstm = 1 };

// (R / 2 sigma^2) * sum_i (a_i - mu_i)^2
double policy_cost(const std::vector<double>& mus,
                   const std::vector<double>& actions, double reward,
                   double sigma);

// theta <- theta - eta * grad
void sgd_step(std::vector<double>& params, const std::vector<double>& grads,
              double eta);

// Optional heavy-ball variant, off for faithful runs (momentum = 0 degrades
// to plain SGD).
class SgdMomentum {
 public:
  SgdMomentum(double eta, double momentum) : eta_(eta), momentum_(momentum) {}
  void step(std::vector<double>& params, const std::vector<double>& grads);

 private:
  double eta_;
  double momentum_;
  std::vector<double> velocity_;
};

// Common surface for both policy architectures. Parameters live in one flat
// vector so the optimizer and the snapshot format stay trivial; gradients
// returned by backward_sequence are aligned with params().
class PolicyNet {
 public:
  virtual ~PolicyNet() = default;

  virtual NetKind kind() const = 0;
  virtual int input_size() const = 0;
  virtual double mu_star() const = 0;
  virtual std::vector<double>& params() = 0;
  virtual const std::vector<double>& params() const = 0;
  std::size_t param_count() const { return params().size(); }

  // One policy mean per step. Recurrent state (if any) starts fresh.
  virtual std::vector<double> forward_sequence(
      const std::vector<std::vector<double>>& inputs) const = 0;

  // Gradient of sum_t seeds[t] * mu_t with respect to every parameter,
  // accumulated into grad (which must be param_count() long).
  virtual void backward_sequence(const std::vector<std::vector<double>>& inputs,
                                 const std::vector<double>& seeds,
                                 std::vector<double>* grad) const = 0;

  virtual void init_params(Rng& rng) = 0;

  // Architecture integers for the snapshot header.
  virtual std::vector<std::uint32_t> arch() const = 0;

  virtual std::unique_ptr<PolicyNet> clone() const = 0;
};

struct DenseCache {
  std::vector<std::vector<double>> pre;  // z per layer, 1..L
  std::vector<std::vector<double>> act;  // a per layer, 0..L (act[0] = input)
  double mu = 0.0;
};

// Feed-forward net: rectified-linear hidden layers, tanh output scaled by
// mu_star, so |mu| < mu_star always.
class DenseNet : public PolicyNet {
 public:
  DenseNet(std::vector<int> layer_sizes, double mu_star);

  double forward(const std::vector<double>& input,
                 DenseCache* cache = nullptr) const;
  // Accumulates d(seed * mu)/dtheta for one cached forward pass.
  void backward(const DenseCache& cache, double seed,
                std::vector<double>* grad) const;

  NetKind kind() const override { return NetKind::Dense; }
  int input_size() const override { return layer_sizes_.front(); }
  double mu_star() const override { return mu_star_; }
  std::vector<double>& params() override { return params_; }
  const std::vector<double>& params() const override { return params_; }
  std::vector<double> forward_sequence(
      const std::vector<std::vector<double>>& inputs) const override;
  void backward_sequence(const std::vector<std::vector<double>>& inputs,
                         const std::vector<double>& seeds,
                         std::vector<double>* grad) const override;
  void init_params(Rng& rng) override;
  std::vector<std::uint32_t> arch() const override;
  std::unique_ptr<PolicyNet> clone() const override {
    return std::make_unique<DenseNet>(*this);
  }

  const std::vector<int>& layer_sizes() const { return layer_sizes_; }

 private:
  std::size_t weight_offset(int layer) const;
  std::size_t bias_offset(int layer) const;

  std::vector<int> layer_sizes_;
  double mu_star_;
  std::vector<double> params_;
};

struct LstmStepCache {
  std::vector<double> x;
  std::vector<double> h_prev, c_prev;
  std::vector<double> i, f, g, o;
  std::vector<double> c, tanh_c, h;
  std::vector<double> dense_act;  // tanh of the dense-hidden pre-activation
  double out_pre = 0.0;
  double mu = 0.0;
};

struct LstmCache {
  std::vector<LstmStepCache> steps;
};

// Single LSTM layer, then a tanh dense hidden layer and a tanh output head
// scaled by mu_star. Backward is full backpropagation through time.
class LstmNet : public PolicyNet {
 public:
  LstmNet(int n_in, int units, int dense_hidden, double mu_star);

  std::vector<double> forward(const std::vector<std::vector<double>>& inputs,
                              LstmCache* cache = nullptr) const;
  void backward(const LstmCache& cache, const std::vector<double>& seeds,
                std::vector<double>* grad) const;

  NetKind kind() const override { return NetKind::Lstm; }
  int input_size() const override { return n_in_; }
  double mu_star() const override { return mu_star_; }
  std::vector<double>& params() override { return params_; }
  const std::vector<double>& params() const override { return params_; }
  std::vector<double> forward_sequence(
      const std::vector<std::vector<double>>& inputs) const override;
  void backward_sequence(const std::vector<std::vector<double>>& inputs,
                         const std::vector<double>& seeds,
                         std::vector<double>* grad) const override;
  void init_params(Rng& rng) override;
  std::vector<std::uint32_t> arch() const override;
  std::unique_ptr<PolicyNet> clone() const override {
    return std::make_unique<LstmNet>(*this);
  }

  int units() const { return units_; }
  int dense_hidden() const { return dense_hidden_; }

 private:
  // Gate order in the flat layout: input, forget, candidate, output; each
  // gate stores W (units x n_in), U (units x units), b (units). Then the
  // dense head W_d (dense_hidden x units), b_d, W_out (1 x dense_hidden),
  // b_out.
  enum Gate { kInput = 0, kForget = 1, kCand = 2, kOutput = 3 };
  std::size_t gate_w(int gate) const;
  std::size_t gate_u(int gate) const;
  std::size_t gate_b(int gate) const;
  std::size_t dense_w() const;
  std::size_t dense_b() const;
  std::size_t out_w() const;
  std::size_t out_b() const;

  int n_in_, units_, dense_hidden_;
  double mu_star_;
  std::vector<double> params_;
};

// Snapshot layout: magic "SPINRLN1", kind u32, mu_star f64, seed u64,
// arch length u32 + arch entries u32, param count u64, params f64.
// All integers and doubles little-endian.
void save_net(const PolicyNet& net, const std::string& path,
              std::uint64_t seed);
std::unique_ptr<PolicyNet> load_net(const std::string& path,
                                    std::uint64_t* seed_out = nullptr);

}  // namespace spinrl
