#include "motifcut/noise.hpp"

#include <cmath>

namespace motifcut {

namespace {

// splitmix64: decorrelates the per-family engine seeds from one master seed.
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t kLaplaceTag = 0x4c41500000000001ULL;
constexpr std::uint64_t kGaussianTag = 0x4755530000000002ULL;
constexpr std::uint64_t kUniformTag = 0x554e490000000003ULL;

// 53-bit mantissa mappings; the +0.5 variant keeps the value strictly inside
// (0, 1) for inverse-CDF use.
double to_unit_interval(std::uint64_t bits) { return (bits >> 11) * 0x1.0p-53; }
double to_open_unit_interval(std::uint64_t bits) {
    return ((bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

double laplace_from_uniform(double u, double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw ConfigError("laplace_from_uniform: scale must be positive and finite");
    if (!(u > 0.0) || !(u < 1.0))
        throw ConfigError("laplace_from_uniform: u must lie in (0, 1)");
    const double c = u - 0.5;
    if (c == 0.0) return 0.0;
    const double s = c > 0.0 ? 1.0 : -1.0;
    return -scale * s * std::log1p(-2.0 * std::abs(c));
}

NoiseStream::NoiseStream(std::uint64_t seed)
    : seed_(seed),
      laplace_engine_(splitmix64(seed ^ kLaplaceTag)),
      gaussian_engine_(splitmix64(seed ^ kGaussianTag)),
      uniform_engine_(splitmix64(seed ^ kUniformTag)) {}

double NoiseStream::laplace(double scale) {
    ++laplace_draws_;
    return laplace_from_uniform(to_open_unit_interval(laplace_engine_()), scale);
}

double NoiseStream::gaussian() {
    ++gaussian_draws_;
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // Box-Muller; u1 in (0, 1] keeps the log finite.
    const double u1 = 1.0 - to_unit_interval(gaussian_engine_());
    const double u2 = to_unit_interval(gaussian_engine_());
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
}

Eigen::VectorXd NoiseStream::gaussian_vector(int dim) {
    if (dim <= 0) throw ConfigError("gaussian_vector: dimension must be positive");
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v(i) = gaussian();
    return v;
}

double NoiseStream::uniform01() { return to_unit_interval(uniform_engine_()); }

std::uint64_t NoiseStream::uniform_bits() { return uniform_engine_(); }

NoiseStream NoiseStream::substream(std::uint64_t key) const {
    return NoiseStream(splitmix64(seed_ ^ splitmix64(key)));
}

}  // namespace motifcut
