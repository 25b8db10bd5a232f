#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include "bussgang/decomposition.hpp"
#include "bussgang/quantizer.hpp"
#include "bussgang/signal_model.hpp"

namespace bussgang {

// One empirical quantity with its batch-means standard error.
struct McEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
};

// Empirical counterparts of the s-referenced coefficients and the SDNR they
// imply. All estimates come from one sample set under the same seed.
// sdnr_hat is the plug-in of the full-sample (alpha, gamma) into the
// gamma/alpha^2 form; when the sample shows zero distortion it is flagged
// infinite instead of overflowing. distortion_ratio_hat estimates
// gamma/alpha^2 - 1 itself, which stays well-defined in that regime.
struct McReport {
  McEstimate alpha_s_hat;
  McEstimate gamma_s_hat;
  McEstimate sdnr_hat;
  McEstimate distortion_ratio_hat;
  McEstimate distortion_signal_correlation;
  bool sdnr_infinite = false;
};

struct McOptions {
  int n_batches = 100;    // batch-means groups; also the parallel work units
  bool parallel = false;  // evaluate batches on a thread pool; same result either way
};

// Draws s ~ p_s and n ~ N(0, sigma_n^2) (substreams 2b and 2b+1 of `seed` for
// batch b), pushes x = s + n through the nonlinearity, and estimates
// alpha_s = sum ys / sum s^2, gamma_s = sum y^2 / sum s^2, the implied SDNR,
// and the correlation between the distortion y - alpha_s s and s (zero by
// construction of the estimator, up to rounding).
// Requires n_samples >= 10^4.
McReport estimate_coefficients(const std::function<double(double)>& nonlinearity,
                               const SignalDistribution& signal, double sigma_n,
                               std::size_t n_samples, std::uint64_t seed,
                               const McOptions& options = {});

McReport estimate_coefficients(const MidRiseQuantizer& q, const SignalDistribution& signal,
                               double sigma_n, std::size_t n_samples, std::uint64_t seed,
                               const McOptions& options = {});

// Uncoded binary transmission: +-A equiprobable, Gaussian noise, optional
// quantization, sign decision. With the same seed the per-sample decisions are
// identical with the quantizer on or off (the quantizer preserves sign), so
// the error counts match exactly.
struct BerResult {
  std::size_t error_count = 0;
  std::size_t n_samples = 0;
  double ber = 0.0;
  std::uint64_t seed = 0;
  bool quantizer_enabled = false;
};

BerResult ber_uncoded_binary(const MidRiseQuantizer& q, double amplitude, double sigma_n,
                             std::size_t n_samples, std::uint64_t seed, bool quantizer_enabled);

}  // namespace bussgang
