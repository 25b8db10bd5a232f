#include "bussgang/decomposition.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace bussgang {

double mu_y_given_s(const MidRiseQuantizer& q, double sigma_n, double s) {
  if (sigma_n < 0.0) throw DomainError("sigma_n", "mu_y_given_s requires sigma_n >= 0");
  if (sigma_n == 0.0) return q(s);
  const int half = q.levels() / 2;
  const double d = q.delta();
  const double inv = 1.0 / (sigma_n * std::numbers::sqrt2);
  double acc = erf(s * inv);
  for (int i = 1; i <= half - 1; ++i) acc += erf((s - i * d) * inv) + erf((s + i * d) * inv);
  return 0.5 * d * acc;
}

double mu_y2_given_s(const MidRiseQuantizer& q, double sigma_n, double s) {
  if (sigma_n < 0.0) throw DomainError("sigma_n", "mu_y2_given_s requires sigma_n >= 0");
  if (sigma_n == 0.0) {
    const double y = q(s);
    return y * y;
  }
  const int half = q.levels() / 2;
  const double d = q.delta();
  const double inv = 1.0 / (sigma_n * std::numbers::sqrt2);
  double acc = 0.0;
  for (int i = 1; i <= half - 1; ++i) acc += i * (erf((s - i * d) * inv) - erf((s + i * d) * inv));
  const double sat = q.saturation();
  return sat * sat + d * d * acc;
}

Nonlinearity Nonlinearity::identity() {
  return {[](double x) { return x; }, {}};
}

Nonlinearity Nonlinearity::hard_limiter(double c) {
  return {[c](double x) { return x > 0.0 ? c : -c; }, {0.0}};
}

Nonlinearity Nonlinearity::from_quantizer(const MidRiseQuantizer& q) {
  return {[q](double x) { return q(x); }, q.threshold_values()};
}

GaussianMixture GaussianMixture::of(const SignalDistribution& signal, double sigma_n) {
  if (sigma_n < 0.0) throw DomainError("sigma_n", "input law requires sigma_n >= 0");
  GaussianMixture m;
  if (signal.is_gaussian()) {
    m.components.push_back({1.0, 0.0, std::hypot(signal.sigma_s(), sigma_n)});
    return m;
  }
  m.components.reserve(signal.points().size());
  for (const auto& p : signal.points()) m.components.push_back({p.prob, p.level, sigma_n});
  return m;
}

GaussianMixture GaussianMixture::single(double sigma) {
  if (!(sigma > 0.0)) throw DomainError("sigma", "gaussian input law requires sigma > 0");
  return {{{1.0, 0.0, sigma}}};
}

double GaussianMixture::second_moment() const {
  double acc = 0.0;
  for (const auto& c : components) acc += c.weight * (c.mean * c.mean + c.sigma * c.sigma);
  return acc;
}

double GaussianMixture::expectation(const std::function<double(double)>& g,
                                    const QuadratureSpec& spec,
                                    std::span<const double> breakpoints) const {
  double acc = 0.0;
  for (const auto& c : components) {
    if (c.sigma == 0.0)
      acc += c.weight * g(c.mean);
    else
      acc += c.weight * integrate_gaussian_expectation(g, c.mean, c.sigma, spec, breakpoints);
  }
  return acc;
}

double alpha_x(const Nonlinearity& nl, const GaussianMixture& p_x, const QuadratureSpec& spec) {
  const double m2 = p_x.second_moment();
  if (!(m2 > 0.0)) throw DomainError("input_power", "alpha_x requires E[x^2] > 0");
  const double exy =
      p_x.expectation([&](double x) { return x * nl.f(x); }, spec, nl.breakpoints);
  return exy / m2;
}

double gamma_x(const Nonlinearity& nl, const GaussianMixture& p_x, const QuadratureSpec& spec) {
  const double m2 = p_x.second_moment();
  if (!(m2 > 0.0)) throw DomainError("input_power", "gamma_x requires E[x^2] > 0");
  const double ey2 = p_x.expectation(
      [&](double x) {
        const double y = nl.f(x);
        return y * y;
      },
      spec, nl.breakpoints);
  return ey2 / m2;
}

namespace {

// outer expectation over the signal law of a per-point conditional moment
double signal_expectation(const SignalDistribution& signal, double sigma_n,
                          const MidRiseQuantizer& q, const QuadratureSpec& spec,
                          const std::function<double(double)>& per_point) {
  if (signal.is_gaussian()) {
    // the conditional moments are smooth in s except when sigma_n == 0,
    // where they inherit the quantizer jumps
    std::vector<double> brk;
    if (sigma_n == 0.0) brk = q.threshold_values();
    return integrate_gaussian_expectation(per_point, 0.0, signal.sigma_s(), spec, brk);
  }
  double acc = 0.0;
  for (const auto& p : signal.points()) acc += p.prob * per_point(p.level);
  return acc;
}

}  // namespace

double alpha_s(const MidRiseQuantizer& q, const SignalDistribution& signal, double sigma_n,
               const QuadratureSpec& spec) {
  if (sigma_n < 0.0) throw DomainError("sigma_n", "alpha_s requires sigma_n >= 0");
  const double p = signal.power();
  if (!(p > 0.0)) throw DomainError("signal_power", "alpha_s requires E[s^2] > 0");
  const double eys = signal_expectation(
      signal, sigma_n, q, spec, [&](double s) { return s * mu_y_given_s(q, sigma_n, s); });
  return eys / p;
}

double gamma_s(const MidRiseQuantizer& q, const SignalDistribution& signal, double sigma_n,
               const QuadratureSpec& spec) {
  if (sigma_n < 0.0) throw DomainError("sigma_n", "gamma_s requires sigma_n >= 0");
  const double p = signal.power();
  if (!(p > 0.0)) throw DomainError("signal_power", "gamma_s requires E[s^2] > 0");
  const double ey2 = signal_expectation(signal, sigma_n, q, spec,
                                        [&](double s) { return mu_y2_given_s(q, sigma_n, s); });
  return ey2 / p;
}

BussgangCoefficients s_referenced_coefficients(const MidRiseQuantizer& q,
                                               const SignalDistribution& signal, double sigma_n,
                                               const QuadratureSpec& spec) {
  return {alpha_s(q, signal, sigma_n, spec), gamma_s(q, signal, sigma_n, spec),
          Convention::SReferenced, signal.power()};
}

BussgangCoefficients x_referenced_coefficients(const MidRiseQuantizer& q,
                                               const SignalDistribution& signal, double sigma_n,
                                               const QuadratureSpec& spec) {
  const auto nl = Nonlinearity::from_quantizer(q);
  const auto px = GaussianMixture::of(signal, sigma_n);
  return {alpha_x(nl, px, spec), gamma_x(nl, px, spec), Convention::XReferenced,
          px.second_moment()};
}

double expected_yn(const Nonlinearity& nl, const SignalDistribution& signal, double sigma_n,
                   const QuadratureSpec& spec) {
  if (sigma_n < 0.0) throw DomainError("sigma_n", "expected_yn requires sigma_n >= 0");
  if (sigma_n == 0.0) return 0.0;  // n is identically zero

  auto inner = [&](double s) {
    // jump locations shifted into noise coordinates
    std::vector<double> brk;
    brk.reserve(nl.breakpoints.size());
    for (double t : nl.breakpoints) brk.push_back(t - s);
    return integrate_gaussian_expectation([&](double n) { return nl.f(s + n) * n; }, 0.0,
                                          sigma_n, spec, brk);
  };

  if (signal.is_gaussian())
    return integrate_gaussian_expectation(inner, 0.0, signal.sigma_s(), spec);
  double acc = 0.0;
  for (const auto& p : signal.points()) acc += p.prob * inner(p.level);
  return acc;
}

double expected_yn(const MidRiseQuantizer& q, const SignalDistribution& signal, double sigma_n,
                   const QuadratureSpec& spec) {
  return expected_yn(Nonlinearity::from_quantizer(q), signal, sigma_n, spec);
}

namespace {

SdnrReport make_report(const BussgangCoefficients& coeffs, Theorem theorem) {
  if (coeffs.alpha == 0.0)
    throw DomainError("alpha", "SDNR is undefined for a zero Bussgang gain");
  SdnrReport r;
  r.coefficients = coeffs;
  r.theorem_used = theorem;
  const double ratio = coeffs.gamma / (coeffs.alpha * coeffs.alpha) - 1.0;
  if (ratio <= 0.0) {
    r.infinite = true;
    r.sdnr_linear = std::numeric_limits<double>::infinity();
    r.sdnr_db = std::numeric_limits<double>::infinity();
    r.distortion_power = 0.0;
    return r;
  }
  r.sdnr_linear = 1.0 / ratio;
  r.sdnr_db = 10.0 * std::log10(r.sdnr_linear);
  r.distortion_power =
      (coeffs.gamma - coeffs.alpha * coeffs.alpha) * coeffs.reference_power;
  return r;
}

}  // namespace

SdnrReport sdnr_noiseless(const BussgangCoefficients& coeffs) {
  if (coeffs.convention != Convention::XReferenced)
    throw DomainError("convention", "sdnr_noiseless expects x-referenced coefficients");
  return make_report(coeffs, Theorem::T1);
}

SdnrReport sdnr_noisy(const BussgangCoefficients& coeffs) {
  if (coeffs.convention != Convention::SReferenced)
    throw DomainError("convention", "sdnr_noisy expects s-referenced coefficients");
  return make_report(coeffs, Theorem::T2);
}

SdnrReport sdnr_gaussian(const MidRiseQuantizer& q, double sigma_s, double sigma_n,
                         const QuadratureSpec& spec) {
  if (!(sigma_s > 0.0)) throw DomainError("sigma_s", "sdnr_gaussian requires sigma_s > 0");
  if (sigma_n < 0.0) throw DomainError("sigma_n", "sdnr_gaussian requires sigma_n >= 0");
  const auto nl = Nonlinearity::from_quantizer(q);
  const auto px = GaussianMixture::single(std::hypot(sigma_s, sigma_n));
  BussgangCoefficients cx{alpha_x(nl, px, spec), gamma_x(nl, px, spec), Convention::XReferenced,
                          px.second_moment()};
  return sdnr_gaussian_form(cx, (sigma_n * sigma_n) / (sigma_s * sigma_s));
}

SdnrReport sdnr_gaussian_form(const BussgangCoefficients& x_coeffs,
                              double noise_to_signal_power_ratio) {
  if (x_coeffs.convention != Convention::XReferenced)
    throw DomainError("convention", "sdnr_gaussian_form expects x-referenced coefficients");
  if (noise_to_signal_power_ratio < 0.0)
    throw DomainError("noise_to_signal_power_ratio", "power ratio must be >= 0");
  // the s-referenced pair implied when the gain carries over unchanged and the
  // power ratio rescales by E[x^2]/E[s^2]
  const double scale = 1.0 + noise_to_signal_power_ratio;
  BussgangCoefficients cs{x_coeffs.alpha, x_coeffs.gamma * scale, Convention::SReferenced,
                          x_coeffs.reference_power / scale};
  return make_report(cs, Theorem::T3);
}

}  // namespace bussgang
