#include <cstring>
#include <fstream>
#include <stdexcept>

#include "spinrl/nets.hpp"

namespace spinrl {

double policy_cost(const std::vector<double>& mus,
                   const std::vector<double>& actions, double reward,
                   double sigma) {
  if (mus.size() != actions.size())
    throw std::invalid_argument("policy_cost: length mismatch");
  if (!(sigma > 0)) throw std::invalid_argument("policy_cost: sigma must be positive");
  double sum = 0.0;
  for (std::size_t i = 0; i < mus.size(); ++i) {
    const double d = actions[i] - mus[i];
    sum += d * d;
  }
  return reward * sum / (2.0 * sigma * sigma);
}

void sgd_step(std::vector<double>& params, const std::vector<double>& grads,
              double eta) {
  if (params.size() != grads.size())
    throw std::invalid_argument("sgd_step: shape mismatch");
  if (!(eta > 0)) throw std::invalid_argument("sgd_step: eta must be positive");
  for (std::size_t i = 0; i < params.size(); ++i) params[i] -= eta * grads[i];
}

void SgdMomentum::step(std::vector<double>& params,
                       const std::vector<double>& grads) {
  if (params.size() != grads.size())
    throw std::invalid_argument("SgdMomentum::step: shape mismatch");
  if (velocity_.empty()) velocity_.assign(params.size(), 0.0);
  if (velocity_.size() != params.size())
    throw std::invalid_argument("SgdMomentum::step: stale velocity buffer");
  for (std::size_t i = 0; i < params.size(); ++i) {
    velocity_[i] = momentum_ * velocity_[i] - eta_ * grads[i];
    params[i] += velocity_[i];
  }
}

namespace {
constexpr char kMagic[8] = {'S', 'P', 'I', 'N', 'R', 'L', 'N', '1'};

template <typename T>
void write_raw(std::ofstream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_raw(std::ifstream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw std::runtime_error("load_net: truncated snapshot");
  return value;
}
}  // namespace

void save_net(const PolicyNet& net, const std::string& path,
              std::uint64_t seed) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_net: cannot open " + path);
  out.write(kMagic, sizeof(kMagic));
  write_raw(out, static_cast<std::uint32_t>(net.kind()));
  write_raw(out, net.mu_star());
  write_raw(out, seed);
  const std::vector<std::uint32_t> arch = net.arch();
  write_raw(out, static_cast<std::uint32_t>(arch.size()));
  for (std::uint32_t a : arch) write_raw(out, a);
  const std::vector<double>& p = net.params();
  write_raw(out, static_cast<std::uint64_t>(p.size()));
  out.write(reinterpret_cast<const char*>(p.data()),
            static_cast<std::streamsize>(p.size() * sizeof(double)));
  if (!out) throw std::runtime_error("save_net: write failed for " + path);
}

std::unique_ptr<PolicyNet> load_net(const std::string& path,
                                    std::uint64_t* seed_out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_net: cannot open " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("load_net: bad magic in " + path);
  const auto kind = static_cast<NetKind>(read_raw<std::uint32_t>(in));
  const double mu_star = read_raw<double>(in);
  const std::uint64_t seed = read_raw<std::uint64_t>(in);
  const std::uint32_t arch_len = read_raw<std::uint32_t>(in);
  std::vector<std::uint32_t> arch(arch_len);
  for (auto& a : arch) a = read_raw<std::uint32_t>(in);

  std::unique_ptr<PolicyNet> net;
  if (kind == NetKind::Dense) {
    std::vector<int> sizes(arch.begin(), arch.end());
    net = std::make_unique<DenseNet>(sizes, mu_star);
  } else if (kind == NetKind::Lstm) {
    if (arch.size() != 4)
      throw std::runtime_error("load_net: bad recurrent architecture header");
    net = std::make_unique<LstmNet>(static_cast<int>(arch[0]),
                                    static_cast<int>(arch[1]),
                                    static_cast<int>(arch[2]), mu_star);
  } else {
    throw std::runtime_error("load_net: unknown network kind");
  }

  const std::uint64_t count = read_raw<std::uint64_t>(in);
  if (count != net->param_count())
    throw std::runtime_error("load_net: parameter count mismatch");
  std::vector<double>& p = net->params();
  in.read(reinterpret_cast<char*>(p.data()),
          static_cast<std::streamsize>(p.size() * sizeof(double)));
  if (!in) throw std::runtime_error("load_net: truncated parameters");
  if (seed_out) *seed_out = seed;
  return net;
}

}  // namespace spinrl
