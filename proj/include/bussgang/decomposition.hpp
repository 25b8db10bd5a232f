#pragma once

#include <functional>
#include <span>
#include <vector>

#include "bussgang/quantizer.hpp"
#include "bussgang/signal_model.hpp"
#include "bussgang/special_math.hpp"

namespace bussgang {

// Which variable a coefficient pair is referenced to: the total nonlinearity
// input x, or the signal component s of a noisy input x = s + n.
enum class Convention { XReferenced, SReferenced };

enum class Theorem { T1, T2, T3 };

// A Bussgang pair (alpha, gamma): gain E[y r]/E[r^2] and power ratio
// E[y^2]/E[r^2], where r is the reference variable named by `convention`.
// `reference_power` carries E[r^2] so distortion power is recoverable.
// Cauchy-Schwarz gives gamma >= alpha^2, with equality only at zero distortion.
struct BussgangCoefficients {
  double alpha = 0.0;
  double gamma = 0.0;
  Convention convention = Convention::XReferenced;
  double reference_power = 1.0;
};

// Signal-to-distortion(-plus-noise) ratio report. When the distortion power is
// exactly zero the ratio is reported through the `infinite` flag (sdnr_linear
// and sdnr_db are +inf), never as a floating-point overflow artifact.
struct SdnrReport {
  double sdnr_linear = 0.0;
  double sdnr_db = 0.0;
  bool infinite = false;
  BussgangCoefficients coefficients;
  Theorem theorem_used = Theorem::T1;
  double distortion_power = 0.0;
};

// Conditional mean of the quantizer output given the signal value,
//   mu_{y|s}(s) = (delta/2) sum_i erf((s - i delta) / (sigma_n sqrt 2)),
// one term per interior threshold, i in [-(M/2-1), M/2-1]. Odd and monotone
// nondecreasing in s, saturating at +-(M-1) delta / 2. The +-i terms are
// paired so the odd symmetry is exact in floating point.
// sigma_n == 0 degenerates to quantize(s) itself.
double mu_y_given_s(const MidRiseQuantizer& q, double sigma_n, double s);

// Conditional second moment,
//   mu_{y^2|s}(s) = (M-1)^2 delta^2 / 4 + delta^2 sum_i i erf((s - i delta) / (sigma_n sqrt 2)),
// same index range. Even in s, valued in (0, (M-1)^2 delta^2 / 4].
// sigma_n == 0 degenerates to quantize(s)^2.
double mu_y2_given_s(const MidRiseQuantizer& q, double sigma_n, double s);

// A memoryless nonlinearity together with the points where it jumps, so
// quadrature against it can split there.
struct Nonlinearity {
  std::function<double(double)> f;
  std::vector<double> breakpoints;

  static Nonlinearity identity();
  static Nonlinearity hard_limiter(double c);  // c * sign(x), with f(0) = -c
  static Nonlinearity from_quantizer(const MidRiseQuantizer& q);
};

// Finite Gaussian mixture, the input laws that arise here: a discrete signal
// plus Gaussian noise gives one component per signal point; a Gaussian signal
// plus noise collapses to a single zero-mean component. sigma == 0 components
// are point masses.
struct GaussianMixture {
  struct Component {
    double weight = 0.0;
    double mean = 0.0;
    double sigma = 0.0;
  };
  std::vector<Component> components;

  static GaussianMixture of(const SignalDistribution& signal, double sigma_n);
  static GaussianMixture single(double sigma);  // one zero-mean component

  double second_moment() const;  // E[x^2]
  double expectation(const std::function<double(double)>& g, const QuadratureSpec& spec = {},
                     std::span<const double> breakpoints = {}) const;
};

// x-referenced gain alpha_x = E[x f(x)] / E[x^2] for an arbitrary input law.
double alpha_x(const Nonlinearity& nl, const GaussianMixture& p_x,
               const QuadratureSpec& spec = {});

// x-referenced power ratio gamma_x = E[f(x)^2] / E[x^2].
double gamma_x(const Nonlinearity& nl, const GaussianMixture& p_x,
               const QuadratureSpec& spec = {});

// s-referenced gain alpha_s = E[y s] / E[s^2] for the quantizer driven by
// x = s + n. Discrete signals reduce to a finite sum over mu_y_given_s;
// Gaussian signals use an outer quadrature over s.
double alpha_s(const MidRiseQuantizer& q, const SignalDistribution& signal, double sigma_n,
               const QuadratureSpec& spec = {});

// s-referenced power ratio gamma_s = E[y^2] / E[s^2], same evaluation routes.
double gamma_s(const MidRiseQuantizer& q, const SignalDistribution& signal, double sigma_n,
               const QuadratureSpec& spec = {});

BussgangCoefficients s_referenced_coefficients(const MidRiseQuantizer& q,
                                               const SignalDistribution& signal, double sigma_n,
                                               const QuadratureSpec& spec = {});

BussgangCoefficients x_referenced_coefficients(const MidRiseQuantizer& q,
                                               const SignalDistribution& signal, double sigma_n,
                                               const QuadratureSpec& spec = {});

// Cross-moment E[y n] between the nonlinearity output and the noise component,
// evaluated directly (inner quadrature over the noise, outer sum or quadrature
// over the signal). Relates the two conventions:
// alpha_s = alpha_x (1 + sigma_n^2/E[s^2]) - E[yn]/E[s^2].
double expected_yn(const Nonlinearity& nl, const SignalDistribution& signal, double sigma_n,
                   const QuadratureSpec& spec = {});
double expected_yn(const MidRiseQuantizer& q, const SignalDistribution& signal, double sigma_n,
                   const QuadratureSpec& spec = {});

// Noiseless SDNR from an x-referenced pair: 1 / (gamma/alpha^2 - 1).
SdnrReport sdnr_noiseless(const BussgangCoefficients& coeffs);

// Noisy-case SDNR from an s-referenced pair: 1 / (gamma_s/alpha_s^2 - 1).
// This is the form that stays valid for non-Gaussian signals.
SdnrReport sdnr_noisy(const BussgangCoefficients& coeffs);

// Noisy Gaussian-signal SDNR, computed from the x-referenced pair of the
// combined input N(0, sqrt(sigma_s^2 + sigma_n^2)):
//   1 / ((gamma_x/alpha_x^2)(1 + sigma_n^2/sigma_s^2) - 1).
SdnrReport sdnr_gaussian(const MidRiseQuantizer& q, double sigma_s, double sigma_n,
                         const QuadratureSpec& spec = {});

// The same formula applied to externally supplied x-referenced coefficients.
// For non-Gaussian signals this is a mis-prediction; it is exposed so the gap
// against sdnr_noisy can be measured.
SdnrReport sdnr_gaussian_form(const BussgangCoefficients& x_coeffs,
                              double noise_to_signal_power_ratio);

}  // namespace bussgang
