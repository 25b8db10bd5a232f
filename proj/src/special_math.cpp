#include "bussgang/special_math.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace bussgang {

namespace {

// Rational minimax coefficients for erf/erfc after W. J. Cody,
// "Rational Chebyshev approximation for the error function",
// Math. Comp. 23 (1969). Same tables as netlib SPECFUN's CALERF.
constexpr double kErfA[5] = {3.1611237438705656, 113.864154151050156, 377.485237685302021,
                             3209.37758913846947, 0.185777706184603153};
constexpr double kErfB[4] = {23.6012909523441209, 244.024637934444173, 1282.61652607737228,
                             2844.23683343917062};
constexpr double kErfC[9] = {0.564188496988670089, 8.88314979438837594, 66.1191906371416295,
                             298.635138197400131,  881.95222124176909,  1712.04761263407058,
                             2051.07837782607147,  1230.33935479799725, 2.15311535474403846e-8};
constexpr double kErfD[8] = {15.7449261107098347, 117.693950891312499, 537.181101862009858,
                             1621.38957456669019, 3290.79923573345963, 4362.61909014324716,
                             3439.36767414372164, 1230.33935480374942};
constexpr double kErfP[6] = {0.305326634961232344, 0.360344899949804439, 0.125781726111229246,
                             0.0160837851487422766, 6.58749161529837803e-4, 0.0163153871373020978};
constexpr double kErfQ[5] = {2.56852019228982242, 1.87295284992346047, 0.527905102951428412,
                             0.0605183413124413191, 0.00233520497626869185};
constexpr double kInvSqrtPi = 0.56418958354775628695;
constexpr double kErfSmallThresh = 0.46875;
constexpr double kErfcUnderflow = 26.543;  // erfc(x) underflows to 0 beyond this

// erfc(y) for 0.46875 < y, via the two large-argument branches. The exp(-y^2)
// factor is split as exp(-t^2) * exp(-(y-t)(y+t)) with t = trunc(16 y)/16 to
// avoid the rounding of y^2 dominating the result.
double erfc_large(double y) noexcept {
  double result;
  if (y <= 4.0) {
    double num = kErfC[8] * y;
    double den = y;
    for (int i = 0; i < 7; ++i) {
      num = (num + kErfC[i]) * y;
      den = (den + kErfD[i]) * y;
    }
    result = (num + kErfC[7]) / (den + kErfD[7]);
  } else {
    if (y >= kErfcUnderflow) return 0.0;
    const double ysq = 1.0 / (y * y);
    double num = kErfP[5] * ysq;
    double den = ysq;
    for (int i = 0; i < 4; ++i) {
      num = (num + kErfP[i]) * ysq;
      den = (den + kErfQ[i]) * ysq;
    }
    result = ysq * (num + kErfP[4]) / (den + kErfQ[4]);
    result = (kInvSqrtPi - result) / y;
  }
  const double t = std::trunc(16.0 * y) / 16.0;
  const double del = (y - t) * (y + t);
  return std::exp(-t * t) * std::exp(-del) * result;
}

double erf_small(double x) noexcept {
  const double xsq = x * x;
  double num = kErfA[4] * xsq;
  double den = xsq;
  for (int i = 0; i < 3; ++i) {
    num = (num + kErfA[i]) * xsq;
    den = (den + kErfB[i]) * xsq;
  }
  return x * (num + kErfA[3]) / (den + kErfB[3]);
}

}  // namespace

double erf(double x) noexcept {
  const double y = std::fabs(x);
  if (y <= kErfSmallThresh) return erf_small(x);
  const double r = 1.0 - erfc_large(y);
  return x < 0.0 ? -r : r;
}

double erfc(double x) noexcept {
  const double y = std::fabs(x);
  double r = (y <= kErfSmallThresh) ? 1.0 - erf_small(y) : erfc_large(y);
  return x < 0.0 ? 2.0 - r : r;
}

double normal_pdf(double x, double sigma) {
  if (!(sigma > 0.0)) throw DomainError("sigma", "normal_pdf requires sigma > 0");
  const double z = x / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

void QuadratureSpec::validate() const {
  if (!(relative_tolerance > 0.0))
    throw DomainError("relative_tolerance", "quadrature relative_tolerance must be > 0");
  if (max_subdivisions < 1)
    throw DomainError("max_subdivisions", "quadrature max_subdivisions must be >= 1");
  if (!(integration_halfwidth_sigmas >= 4.0))
    throw DomainError("integration_halfwidth_sigmas",
                      "quadrature integration halfwidth must be >= 4 sigma");
}

namespace {

constexpr int kMaxDepth = 60;

struct SimpsonWorker {
  const std::function<double(double)>& f;
  long long splits_left;
  double unresolved = 0.0;  // accumulated |error estimate| of panels accepted early

  static double panel(double fa, double fm, double fb, double width) noexcept {
    return width * (fa + 4.0 * fm + fb) / 6.0;
  }

  double refine(double a, double b, double fa, double fm, double fb, double whole, double tol,
                int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = panel(fa, flm, fm, m - a);
    const double right = panel(fm, frm, fb, b - m);
    const double err = (left + right - whole) / 15.0;
    if (std::fabs(err) <= tol || depth >= kMaxDepth || splits_left <= 0 || m <= a || b <= m) {
      if (std::fabs(err) > tol) unresolved += std::fabs(err);
      return left + right + err;
    }
    --splits_left;
    return refine(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           refine(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
  }

  double segment(double a, double b, double tol) {
    // sample the left edge just inside the segment; see integrate_adaptive
    const double a_in = a + 1e-12 * (b - a);
    const double fa = f(a_in);
    const double fm = f(0.5 * (a + b));
    const double fb = f(b);
    return refine(a, b, fa, fm, fb, panel(fa, fm, fb, b - a), tol, 0);
  }
};

std::vector<double> split_points(double a, double b, std::span<const double> breakpoints) {
  std::vector<double> pts;
  pts.push_back(a);
  for (double p : breakpoints)
    if (p > a && p < b) pts.push_back(p);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tolerance, int max_subdivisions,
                          std::span<const double> breakpoints) {
  if (!(b > a)) throw DomainError("interval", "integration interval is empty or reversed");
  if (!(abs_tolerance > 0.0)) throw DomainError("abs_tolerance", "tolerance must be > 0");
  const auto pts = split_points(a, b, breakpoints);
  SimpsonWorker worker{f, max_subdivisions};
  const double seg_tol = abs_tolerance / static_cast<double>(pts.size() - 1);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) total += worker.segment(pts[i], pts[i + 1], seg_tol);
  if (worker.unresolved > abs_tolerance)
    throw ConvergenceError("adaptive quadrature did not reach the requested tolerance", total,
                           worker.unresolved);
  return total;
}

double integrate_gaussian_expectation(const std::function<double(double)>& g, double mean,
                                      double sigma, const QuadratureSpec& spec,
                                      std::span<const double> breakpoints) {
  spec.validate();
  if (!(sigma > 0.0)) throw DomainError("sigma", "gaussian expectation requires sigma > 0");
  const double half = spec.integration_halfwidth_sigmas * sigma;
  const double a = mean - half;
  const double b = mean + half;
  const double norm = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
  auto integrand = [&](double x) {
    const double z = (x - mean) / sigma;
    return g(x) * norm * std::exp(-0.5 * z * z);
  };

  // Seed the partition at sigma spacing so the first Simpson estimates already
  // resolve the Gaussian factor, then add the caller's jump locations.
  std::vector<double> seeded(breakpoints.begin(), breakpoints.end());
  for (int k = -7; k <= 7; ++k) seeded.push_back(mean + k * sigma);

  // Coarse scale estimate so the relative tolerance becomes an absolute one.
  // Each segment is sampled on a few panels and the panel magnitudes are
  // summed, so odd integrands do not cancel the scale away.
  const auto pts = split_points(a, b, seeded);
  double scale = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double lo = pts[i], hi = pts[i + 1];
    constexpr int kPanels = 8;
    const double w = (hi - lo) / kPanels;
    for (int p = 0; p < kPanels; ++p) {
      const double pa = lo + p * w;
      const double fa = integrand(p == 0 ? pa + 1e-12 * (hi - lo) : pa);
      const double rough = SimpsonWorker::panel(fa, integrand(pa + 0.5 * w), integrand(pa + w), w);
      scale += std::fabs(rough);
    }
  }
  const double abs_tol = spec.relative_tolerance * std::max(scale, 1e-30);
  return integrate_adaptive(integrand, a, b, abs_tol, spec.max_subdivisions, seeded);
}

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer
inline std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

}  // namespace

SampleStream::SampleStream(RngStream stream) noexcept
    : state_(mix64(stream.seed) ^ mix64(stream.stream_index + 0xD1B54A32D192ED03ull)) {}

std::uint64_t SampleStream::next_u64() noexcept {
  state_ += kGolden;
  return mix64(state_);
}

double SampleStream::next_uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SampleStream::next_normal() noexcept {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  const double u1 = 1.0 - next_uniform();  // (0, 1], keeps the log finite
  const double u2 = next_uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  cached_normal_ = r * std::sin(theta);
  has_cached_normal_ = true;
  return r * std::cos(theta);
}

std::vector<double> sample_normal(RngStream stream, double sigma, std::size_t n) {
  if (sigma < 0.0) throw DomainError("sigma", "sample_normal requires sigma >= 0");
  if (n == 0) throw DomainError("n", "sample_normal requires n >= 1");
  std::vector<double> out(n, 0.0);
  if (sigma == 0.0) return out;
  SampleStream s(stream);
  for (double& v : out) v = sigma * s.next_normal();
  return out;
}

}  // namespace bussgang
