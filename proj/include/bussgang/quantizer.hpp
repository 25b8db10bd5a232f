#pragma once

#include <vector>

#include "bussgang/errors.hpp"

namespace bussgang {

// Memoryless mid-rise uniform quantizer with M = 2^m output levels spaced by
// the quantization interval delta. Output levels are the odd multiples
// { i delta / 2 : i odd, |i| <= M-1 }; decision thresholds are the integer
// multiples { j delta : |j| <= M/2 - 1 }. Inputs beyond +-(M-2) delta / 2
// saturate to the extreme levels.
//
// Cells are left-open, right-closed: a point exactly on threshold j delta
// belongs to the cell below it, so quantize(0) == -delta/2. Off thresholds the
// map is odd, and it preserves sign everywhere (there is no zero level).
class MidRiseQuantizer {
 public:
  MidRiseQuantizer(int bits, double delta);

  static MidRiseQuantizer from_levels(int levels, double delta);

  int bits() const noexcept { return bits_; }
  int levels() const noexcept { return levels_; }
  double delta() const noexcept { return delta_; }

  // largest representable magnitude, (M-1) delta / 2
  double saturation() const noexcept { return 0.5 * (levels_ - 1) * delta_; }
  // edge of the granular region, (M-2) delta / 2
  double granular_limit() const noexcept { return 0.5 * (levels_ - 2) * delta_; }

  double operator()(double x) const noexcept;

  std::vector<double> level_values() const;      // ascending, size M
  std::vector<double> threshold_values() const;  // ascending, size M-1

 private:
  int bits_;
  int levels_;
  double delta_;
};

}  // namespace bussgang
