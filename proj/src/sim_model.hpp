#pragma once

#include <cstdint>

#include "cmatrix.hpp"
#include "random.hpp"

namespace chanest {

/// One estimation scenario: P receive antennas listen to K single-antenna
/// users that each transmit a pilot sequence of tau BPSK symbols over a
/// flat slow-fading channel.
struct ScenarioConfig {
  int num_rx = 8;        // P
  int num_tx_users = 8;  // K
  int pilot_len = 8;     // tau; power of two, >= num_tx_users
  double snr_db = 10.0;
  std::uint64_t seed = 1;
};

/// K x tau pilot block with +/-1 entries and exactly orthogonal rows:
/// S * S^H == tau * I in integer arithmetic.
struct PilotMatrix {
  CMatrix s;
};

/// P x K channel draw; entries i.i.d. circularly-symmetric complex Gaussian
/// with unit variance (Rayleigh-fading magnitudes).
struct ChannelRealization {
  CMatrix h;
};

/// P x tau received pilot block plus the noise variance that produced it.
struct ReceivedSignal {
  CMatrix y;
  double noise_var = 0.0;
};

/// First k rows of the tau x tau Sylvester-Hadamard matrix. Throws
/// ConfigError if tau is not a power of two or k > tau.
PilotMatrix make_pilots(int k, int tau);

/// i.i.d. CN(0, 1) entries: real and imaginary parts each N(0, 1/2).
ChannelRealization draw_channel(const ScenarioConfig& cfg, RandomStream& rng);

/// Per-symbol noise variance 10^(-snr_db / 10); +infinity disables noise.
double noise_variance(double snr_db);

/// Y = H * S + N with N i.i.d. CN(0, noise_variance(snr_db)).
ReceivedSignal transmit(const ChannelRealization& h, const PilotMatrix& s,
                        double snr_db, RandomStream& rng);

}  // namespace chanest
