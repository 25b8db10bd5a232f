#include "bussgang/monte_carlo.hpp"

#include <cmath>
#include <future>
#include <limits>
#include <vector>

namespace bussgang {

namespace {

constexpr std::size_t kMinSamples = 10'000;

struct BatchSums {
  double ss = 0.0;  // sum s^2
  double ys = 0.0;  // sum y s
  double yy = 0.0;  // sum y^2
  std::size_t n = 0;
};

BatchSums run_batch(const std::function<double(double)>& f, const SignalDistribution& signal,
                    double sigma_n, std::size_t n, std::uint64_t seed, int batch_index) {
  // substream rule: batch b draws its signal from stream 2b and its noise
  // from stream 2b+1, so chunked and sequential execution agree exactly
  SampleStream sig({seed, 2ull * static_cast<std::uint64_t>(batch_index)});
  SampleStream noi({seed, 2ull * static_cast<std::uint64_t>(batch_index) + 1ull});
  const bool gaussian = signal.is_gaussian();
  const double sigma_s = gaussian ? signal.sigma_s() : 0.0;
  std::vector<double> levels, cdf;
  if (!gaussian) {
    double acc = 0.0;
    for (const auto& p : signal.points()) {
      levels.push_back(p.level);
      cdf.push_back(acc += p.prob);
    }
    cdf.back() = 1.0;
  }

  BatchSums out;
  out.n = n;
  for (std::size_t i = 0; i < n; ++i) {
    double s;
    if (gaussian) {
      s = sigma_s * sig.next_normal();
    } else {
      const double u = sig.next_uniform();
      std::size_t k = 0;
      while (u >= cdf[k]) ++k;
      s = levels[k];
    }
    const double x = sigma_n > 0.0 ? s + sigma_n * noi.next_normal() : s;
    const double y = f(x);
    out.ss += s * s;
    out.ys += y * s;
    out.yy += y * y;
  }
  return out;
}

// mean and standard error of a batch statistic
McEstimate batch_estimate(const std::vector<double>& batch_values, double full_value,
                          std::size_t n_samples, std::uint64_t seed) {
  const auto b = static_cast<double>(batch_values.size());
  double mean = 0.0;
  for (double v : batch_values) mean += v;
  mean /= b;
  double var = 0.0;
  for (double v : batch_values) var += (v - mean) * (v - mean);
  var /= (b - 1.0);
  return {full_value, std::sqrt(var / b), n_samples, seed};
}

}  // namespace

McReport estimate_coefficients(const std::function<double(double)>& nonlinearity,
                               const SignalDistribution& signal, double sigma_n,
                               std::size_t n_samples, std::uint64_t seed,
                               const McOptions& options) {
  if (sigma_n < 0.0) throw DomainError("sigma_n", "estimate_coefficients requires sigma_n >= 0");
  if (n_samples < kMinSamples)
    throw DomainError("n_samples", "estimate_coefficients requires n_samples >= 10000");
  const int nb = options.n_batches;
  if (nb < 2 || static_cast<std::size_t>(nb) > n_samples)
    throw DomainError("n_batches", "batch count must be in [2, n_samples]");

  // batch sizes differ by at most one; assignment depends only on indices
  std::vector<std::size_t> sizes(nb, n_samples / nb);
  for (std::size_t r = 0; r < n_samples % nb; ++r) ++sizes[r];

  std::vector<BatchSums> batches(nb);
  if (options.parallel) {
    std::vector<std::future<BatchSums>> futs;
    futs.reserve(nb);
    for (int b = 0; b < nb; ++b)
      futs.push_back(std::async(std::launch::async | std::launch::deferred,
                                [&, b] { return run_batch(nonlinearity, signal, sigma_n,
                                                          sizes[b], seed, b); }));
    for (int b = 0; b < nb; ++b) batches[b] = futs[b].get();
  } else {
    for (int b = 0; b < nb; ++b)
      batches[b] = run_batch(nonlinearity, signal, sigma_n, sizes[b], seed, b);
  }

  // merge in fixed batch order
  double ss = 0.0, ys = 0.0, yy = 0.0;
  std::vector<double> a_b(nb), g_b(nb), r_b(nb);
  for (int b = 0; b < nb; ++b) {
    ss += batches[b].ss;
    ys += batches[b].ys;
    yy += batches[b].yy;
    a_b[b] = batches[b].ys / batches[b].ss;
    g_b[b] = batches[b].yy / batches[b].ss;
    r_b[b] = g_b[b] / (a_b[b] * a_b[b]) - 1.0;
  }
  const double alpha = ys / ss;
  const double gamma = yy / ss;
  const double ratio = gamma / (alpha * alpha) - 1.0;

  McReport rep;
  rep.alpha_s_hat = batch_estimate(a_b, alpha, n_samples, seed);
  rep.gamma_s_hat = batch_estimate(g_b, gamma, n_samples, seed);
  rep.distortion_ratio_hat = batch_estimate(r_b, ratio, n_samples, seed);

  if (ratio <= 0.0) {
    rep.sdnr_infinite = true;
    rep.sdnr_hat = {std::numeric_limits<double>::infinity(), 0.0, n_samples, seed};
  } else {
    bool all_positive = true;
    std::vector<double> s_b(nb);
    for (int b = 0; b < nb; ++b) {
      if (r_b[b] <= 0.0) {
        all_positive = false;
        break;
      }
      s_b[b] = 1.0 / r_b[b];
    }
    if (all_positive) {
      rep.sdnr_hat = batch_estimate(s_b, 1.0 / ratio, n_samples, seed);
    } else {
      // some batches saw zero distortion; the reciprocal has no usable spread
      rep.sdnr_hat = {1.0 / ratio, std::numeric_limits<double>::infinity(), n_samples, seed};
    }
  }

  // distortion d = y - alpha s against s; zero up to rounding since alpha is
  // the least-squares gain of this very sample
  const double ds = ys - alpha * ss;
  const double dd = yy - 2.0 * alpha * ys + alpha * alpha * ss;
  const double corr = (dd > 0.0) ? ds / std::sqrt(dd * ss) : 0.0;
  rep.distortion_signal_correlation = {corr, 1.0 / std::sqrt(static_cast<double>(n_samples)),
                                       n_samples, seed};
  return rep;
}

McReport estimate_coefficients(const MidRiseQuantizer& q, const SignalDistribution& signal,
                               double sigma_n, std::size_t n_samples, std::uint64_t seed,
                               const McOptions& options) {
  return estimate_coefficients([q](double x) { return q(x); }, signal, sigma_n, n_samples, seed,
                               options);
}

BerResult ber_uncoded_binary(const MidRiseQuantizer& q, double amplitude, double sigma_n,
                             std::size_t n_samples, std::uint64_t seed, bool quantizer_enabled) {
  if (!(amplitude > 0.0)) throw DomainError("amplitude", "ber_uncoded_binary requires A > 0");
  if (sigma_n < 0.0) throw DomainError("sigma_n", "ber_uncoded_binary requires sigma_n >= 0");
  if (n_samples < kMinSamples)
    throw DomainError("n_samples", "ber_uncoded_binary requires n_samples >= 10000");

  SampleStream bits({seed, 0});
  SampleStream noi({seed, 1});
  std::size_t errors = 0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const bool sent_positive = bits.next_uniform() < 0.5;
    const double s = sent_positive ? amplitude : -amplitude;
    const double x = sigma_n > 0.0 ? s + sigma_n * noi.next_normal() : s;
    const double r = quantizer_enabled ? q(x) : x;
    const bool decided_positive = r > 0.0;
    if (decided_positive != sent_positive) ++errors;
  }
  return {errors, n_samples, static_cast<double>(errors) / static_cast<double>(n_samples), seed,
          quantizer_enabled};
}

}  // namespace bussgang
