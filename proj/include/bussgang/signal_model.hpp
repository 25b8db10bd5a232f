#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "bussgang/errors.hpp"
#include "bussgang/special_math.hpp"

namespace bussgang {

struct DiscretePoint {
  double level = 0.0;
  double prob = 0.0;
};

// Signal law p_s: either Gaussian with standard deviation sigma_s, or a finite
// discrete PMF. Binary and 4PAM are the discrete constructors used throughout;
// the general PMF admits arbitrary (including asymmetric) point sets.
class SignalDistribution {
 public:
  enum class Kind { Gaussian, Discrete };

  static SignalDistribution gaussian(double sigma_s);
  // +-A with probability 1/2 each
  static SignalDistribution binary(double amplitude);
  // +-A, +-3A with probability 1/4 each; mean square 5 A^2
  static SignalDistribution pam4(double amplitude);
  static SignalDistribution discrete(std::vector<DiscretePoint> points);

  // "level,prob" per line, '#' starts a comment; validated like discrete()
  static SignalDistribution load_pmf(std::istream& in);
  static SignalDistribution load_pmf_file(const std::string& path);

  Kind kind() const noexcept { return kind_; }
  bool is_gaussian() const noexcept { return kind_ == Kind::Gaussian; }
  const std::string& name() const noexcept { return name_; }

  double sigma_s() const;                          // Gaussian only
  const std::vector<DiscretePoint>& points() const;  // Discrete only

  double power() const noexcept { return power_; }  // E[s^2]
  double mean() const noexcept { return mean_; }    // E[s]

  // i.i.d. draws; deterministic given the stream descriptor
  std::vector<double> sample(RngStream stream, std::size_t n) const;

 private:
  SignalDistribution() = default;

  Kind kind_ = Kind::Gaussian;
  std::string name_;
  double sigma_s_ = 0.0;
  std::vector<DiscretePoint> points_;
  std::vector<double> cdf_;  // cumulative probabilities for inverse-CDF sampling
  double power_ = 0.0;
  double mean_ = 0.0;
};

// Zero-mean Gaussian noise with standard deviation sigma_n.
struct NoiseModel {
  double sigma_n = 0.0;

  void validate() const {
    if (sigma_n < 0.0) throw DomainError("sigma_n", "noise standard deviation must be >= 0");
  }
};

// Composite input x = s + n. E[x^2] = E[s^2] + sigma_n^2.
struct NoisyInput {
  SignalDistribution signal;
  NoiseModel noise;

  double power() const noexcept { return signal.power() + noise.sigma_n * noise.sigma_n; }
};

// E[s^2] / sigma_n^2; +infinity when sigma_n == 0.
double input_snr_linear(const SignalDistribution& d, const NoiseModel& noise);
double input_snr_db(const SignalDistribution& d, const NoiseModel& noise);

}  // namespace bussgang
