#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "bussgang/errors.hpp"

namespace bussgang {

// Error function, evaluated locally (rational minimax approximations) so that
// results do not depend on the platform libm. Absolute error <= 1e-14.
// Odd symmetry is exact: erf(-x) is the bit-for-bit negation of erf(x).
double erf(double x) noexcept;

// Complementary error function, same implementation family as erf().
double erfc(double x) noexcept;

// Zero-mean Gaussian density (1 / (sigma sqrt(2 pi))) exp(-x^2 / (2 sigma^2)).
// Throws DomainError for sigma <= 0.
double normal_pdf(double x, double sigma);

// Controls for the adaptive quadrature used throughout the analytic modules.
struct QuadratureSpec {
  double relative_tolerance = 1e-9;
  int max_subdivisions = 1 << 20;
  double integration_halfwidth_sigmas = 8.0;

  void validate() const;  // throws DomainError on a bad field
};

// Adaptive Simpson integral of f over [a, b] to the given absolute tolerance.
// `breakpoints` are forced split points: the interval is partitioned there
// before refinement starts, so integrands with jump discontinuities (quantizer
// cell edges) converge at the usual rate. Within each resulting segment the
// leftmost sample is nudged just inside, so piecewise integrands whose pieces
// are left-open see their in-segment value.
// Throws ConvergenceError when the subdivision budget runs out first.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tolerance, int max_subdivisions,
                          std::span<const double> breakpoints = {});

// Integral of g(x) * normal_pdf(x - mean, sigma) over
// [mean - k sigma, mean + k sigma], k = spec.integration_halfwidth_sigmas.
// The window keeps tail mass below 1e-15 at the default k = 8, which is under
// every tolerance used here. The relative tolerance is converted to an
// absolute one using a coarse first pass over the segments.
double integrate_gaussian_expectation(const std::function<double(double)>& g, double mean,
                                      double sigma, const QuadratureSpec& spec = {},
                                      std::span<const double> breakpoints = {});

// Descriptor for a deterministic random stream. Equal (seed, stream_index)
// pairs reproduce identical sequences; distinct stream_index values give
// decorrelated substreams of the same seed.
//
// Substream rule: draw i of stream (seed, k) is
//     mix64(s0 + i * 0x9E3779B97F4A7C15)  with  s0 = mix64(seed) ^ mix64(k + C),
// where mix64 is the SplitMix64 finalizer. The generator state is therefore a
// pure function of (seed, k, i).
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_index = 0;
};

// Stateful view over an RngStream. Cheap to construct; not shared between
// threads (give each worker its own stream_index instead).
class SampleStream {
 public:
  explicit SampleStream(RngStream stream) noexcept;

  std::uint64_t next_u64() noexcept;
  double next_uniform() noexcept;  // in [0, 1)
  double next_normal() noexcept;   // standard normal (Box-Muller)

 private:
  std::uint64_t state_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

// n i.i.d. zero-mean Gaussian draws with standard deviation sigma.
// sigma == 0 yields the all-zero sequence. Throws DomainError for sigma < 0
// or n == 0.
std::vector<double> sample_normal(RngStream stream, double sigma, std::size_t n);

}  // namespace bussgang
