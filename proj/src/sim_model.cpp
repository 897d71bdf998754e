#include "sim_model.hpp"

#include <cmath>
#include <string>

namespace chanest {

namespace {

bool is_power_of_two(int n) { return n >= 1 && (n & (n - 1)) == 0; }

constexpr double kInvSqrt2 = 0.70710678118654752440;

}  // namespace

PilotMatrix make_pilots(int k, int tau) {
  if (!is_power_of_two(tau)) {
    throw ConfigError("pilot_len: " + std::to_string(tau) +
                      " is not a power of two");
  }
  if (k < 1 || k > tau) {
    throw ConfigError("num_tx_users: " + std::to_string(k) +
                      " must be in [1, pilot_len=" + std::to_string(tau) + "]");
  }
  // Sylvester construction: H_1 = [1], H_2n = [[H, H], [H, -H]].
  std::vector<double> h(static_cast<std::size_t>(tau) * tau, 0.0);
  h[0] = 1.0;
  for (int size = 1; size < tau; size *= 2) {
    for (int i = 0; i < size; ++i) {
      for (int j = 0; j < size; ++j) {
        const double v = h[static_cast<std::size_t>(i) * tau + j];
        h[static_cast<std::size_t>(i) * tau + (j + size)] = v;
        h[static_cast<std::size_t>(i + size) * tau + j] = v;
        h[static_cast<std::size_t>(i + size) * tau + (j + size)] = -v;
      }
    }
  }
  CMatrix s(k, tau);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < tau; ++j) {
      s(i, j) = Complex{h[static_cast<std::size_t>(i) * tau + j], 0.0};
    }
  }
  return PilotMatrix{std::move(s)};
}

ChannelRealization draw_channel(const ScenarioConfig& cfg, RandomStream& rng) {
  CMatrix h(cfg.num_rx, cfg.num_tx_users);
  for (int i = 0; i < cfg.num_rx; ++i) {
    for (int j = 0; j < cfg.num_tx_users; ++j) {
      const double re = rng.gaussian() * kInvSqrt2;
      const double im = rng.gaussian() * kInvSqrt2;
      h(i, j) = Complex{re, im};
    }
  }
  return ChannelRealization{std::move(h)};
}

double noise_variance(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

ReceivedSignal transmit(const ChannelRealization& h, const PilotMatrix& s,
                        double snr_db, RandomStream& rng) {
  CMatrix y = matmul(h.h, s.s);
  const double noise_var = noise_variance(snr_db);
  if (noise_var > 0.0) {
    const double scale = std::sqrt(noise_var / 2.0);
    for (int i = 0; i < y.rows(); ++i) {
      for (int j = 0; j < y.cols(); ++j) {
        y(i, j) += Complex{rng.gaussian() * scale, rng.gaussian() * scale};
      }
    }
  }
  return ReceivedSignal{std::move(y), noise_var};
}

}  // namespace chanest
