#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

#include "motifcut/common.hpp"

namespace motifcut {

// Inverse-CDF Laplace transform on the open interval (0, 1); u = 0.5 maps to
// exactly zero.  Exposed so tests can drive deterministic inputs.
double laplace_from_uniform(double u, double scale);

// Seeded RNG with independent substreams per noise family.  The same seed and
// call sequence reproduces the same draws bit for bit; the Laplace and
// Gaussian families never share engine state, so interleaving draws from one
// family does not perturb the other.
class NoiseStream {
  public:
    explicit NoiseStream(std::uint64_t seed);

    // One Laplace(scale) draw; scale must be positive and finite.
    double laplace(double scale);

    // One standard normal draw (Box-Muller; the spare is cached).
    double gaussian();

    // dim independent standard normals.
    Eigen::VectorXd gaussian_vector(int dim);

    // Uniform on [0, 1) from the auxiliary family (graph sampling, cut
    // sampling).  Not used by the privacy-critical paths.
    double uniform01();
    std::uint64_t uniform_bits();

    // Child stream keyed off this stream's seed; children with distinct keys
    // are independent of each other and of the parent.
    NoiseStream substream(std::uint64_t key) const;

    std::uint64_t seed() const { return seed_; }
    std::uint64_t laplace_draws() const { return laplace_draws_; }
    std::uint64_t gaussian_draws() const { return gaussian_draws_; }

  private:
    std::uint64_t seed_;
    std::mt19937_64 laplace_engine_;
    std::mt19937_64 gaussian_engine_;
    std::mt19937_64 uniform_engine_;
    std::uint64_t laplace_draws_{0};
    std::uint64_t gaussian_draws_{0};
    bool have_spare_{false};
    double spare_{0.0};
};

}  // namespace motifcut
