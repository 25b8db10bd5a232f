#include "bussgang/signal_model.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace bussgang {

namespace {

constexpr double kProbSumTolerance = 1e-12;

}  // namespace

SignalDistribution SignalDistribution::gaussian(double sigma_s) {
  if (!(sigma_s > 0.0)) throw DomainError("sigma_s", "gaussian signal requires sigma_s > 0");
  SignalDistribution d;
  d.kind_ = Kind::Gaussian;
  d.name_ = "gaussian";
  d.sigma_s_ = sigma_s;
  d.power_ = sigma_s * sigma_s;
  d.mean_ = 0.0;
  return d;
}

SignalDistribution SignalDistribution::binary(double amplitude) {
  if (!(amplitude > 0.0)) throw DomainError("amplitude", "binary signal requires A > 0");
  auto d = discrete({{-amplitude, 0.5}, {+amplitude, 0.5}});
  d.name_ = "binary";
  return d;
}

SignalDistribution SignalDistribution::pam4(double amplitude) {
  if (!(amplitude > 0.0)) throw DomainError("amplitude", "4PAM signal requires A > 0");
  auto d = discrete({{-3.0 * amplitude, 0.25},
                     {-amplitude, 0.25},
                     {+amplitude, 0.25},
                     {+3.0 * amplitude, 0.25}});
  d.name_ = "pam4";
  return d;
}

SignalDistribution SignalDistribution::discrete(std::vector<DiscretePoint> points) {
  if (points.empty()) throw DomainError("points", "discrete signal requires at least one point");
  double sum = 0.0;
  double power = 0.0;
  double mean = 0.0;
  for (const auto& p : points) {
    if (!(p.prob > 0.0)) throw DomainError("prob", "discrete probabilities must be > 0");
    if (!std::isfinite(p.level)) throw DomainError("level", "discrete levels must be finite");
    sum += p.prob;
    mean += p.prob * p.level;
    power += p.prob * p.level * p.level;
  }
  if (std::fabs(sum - 1.0) > kProbSumTolerance)
    throw DomainError("prob_sum", "discrete probabilities must sum to 1 within 1e-12");
  if (!(power > 0.0)) throw DomainError("signal_power", "signal power E[s^2] must be > 0");

  SignalDistribution d;
  d.kind_ = Kind::Discrete;
  d.name_ = "discrete";
  d.points_ = std::move(points);
  d.power_ = power;
  d.mean_ = mean;
  d.cdf_.reserve(d.points_.size());
  double acc = 0.0;
  for (const auto& p : d.points_) {
    acc += p.prob;
    d.cdf_.push_back(acc);
  }
  d.cdf_.back() = 1.0;  // absorb rounding so sampling never falls off the end
  return d;
}

SignalDistribution SignalDistribution::load_pmf(std::istream& in) {
  std::vector<DiscretePoint> points;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    // trim
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);

    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw DomainError("pmf_line", "pmf line " + std::to_string(lineno) +
                                        " is not of the form level,prob");
    std::size_t used = 0;
    double level = 0.0, prob = 0.0;
    try {
      level = std::stod(line.substr(0, comma), &used);
      prob = std::stod(line.substr(comma + 1), &used);
    } catch (const std::exception&) {
      throw DomainError("pmf_line",
                        "pmf line " + std::to_string(lineno) + " has an unparsable number");
    }
    points.push_back({level, prob});
  }
  return discrete(std::move(points));
}

SignalDistribution SignalDistribution::load_pmf_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("pmf_path", "cannot open pmf file: " + path);
  return load_pmf(in);
}

double SignalDistribution::sigma_s() const {
  if (kind_ != Kind::Gaussian)
    throw DomainError("kind", "sigma_s is only defined for gaussian signals");
  return sigma_s_;
}

const std::vector<DiscretePoint>& SignalDistribution::points() const {
  if (kind_ != Kind::Discrete)
    throw DomainError("kind", "points() is only defined for discrete signals");
  return points_;
}

std::vector<double> SignalDistribution::sample(RngStream stream, std::size_t n) const {
  if (n == 0) throw DomainError("n", "sample requires n >= 1");
  std::vector<double> out(n);
  SampleStream s(stream);
  if (kind_ == Kind::Gaussian) {
    for (double& v : out) v = sigma_s_ * s.next_normal();
    return out;
  }
  for (double& v : out) {
    const double u = s.next_uniform();
    std::size_t k = 0;
    while (u >= cdf_[k]) ++k;  // cdf_.back() == 1 > u
    v = points_[k].level;
  }
  return out;
}

double input_snr_linear(const SignalDistribution& d, const NoiseModel& noise) {
  noise.validate();
  if (noise.sigma_n == 0.0) return std::numeric_limits<double>::infinity();
  return d.power() / (noise.sigma_n * noise.sigma_n);
}

double input_snr_db(const SignalDistribution& d, const NoiseModel& noise) {
  return 10.0 * std::log10(input_snr_linear(d, noise));
}

}  // namespace bussgang
