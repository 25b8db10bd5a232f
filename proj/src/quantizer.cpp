#include "bussgang/quantizer.hpp"

#include <cmath>

namespace bussgang {

MidRiseQuantizer::MidRiseQuantizer(int bits, double delta) : bits_(bits), delta_(delta) {
  if (bits < 1 || bits > 20) throw DomainError("bits", "quantizer bits must be in [1, 20]");
  if (!(delta > 0.0)) throw DomainError("delta", "quantization interval must be > 0");
  levels_ = 1 << bits;
}

MidRiseQuantizer MidRiseQuantizer::from_levels(int levels, double delta) {
  if (levels < 2 || (levels & (levels - 1)) != 0)
    throw DomainError("levels", "quantizer level count must be a power of two >= 2");
  int bits = 0;
  while ((1 << bits) < levels) ++bits;
  return MidRiseQuantizer(bits, delta);
}

double MidRiseQuantizer::operator()(double x) const noexcept {
  // cell index by arithmetic, not search: cell k covers ((k-1) delta, k delta]
  // and maps to (k - 1/2) delta; clamping the index realizes saturation
  const double half = 0.5 * levels_;
  double k = std::ceil(x / delta_);
  k = std::min(std::max(k, 1.0 - half), half);
  return (k - 0.5) * delta_;
}

std::vector<double> MidRiseQuantizer::level_values() const {
  std::vector<double> out;
  out.reserve(levels_);
  for (int k = 1 - levels_ / 2; k <= levels_ / 2; ++k) out.push_back((k - 0.5) * delta_);
  return out;
}

std::vector<double> MidRiseQuantizer::threshold_values() const {
  std::vector<double> out;
  out.reserve(levels_ - 1);
  for (int j = 1 - levels_ / 2; j <= levels_ / 2 - 1; ++j) out.push_back(j * delta_);
  return out;
}

}  // namespace bussgang
