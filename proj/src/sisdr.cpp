#include "gftse/sisdr.hpp"

#include <cmath>

#include "gftse/errors.hpp"

namespace gftse {

namespace {

struct Projection {
  double alpha;        // <est, ref> / ||ref||^2
  double target_en;    // ||alpha * ref||^2
  double error_en;     // ||est - alpha * ref||^2
};

Projection project(std::span<const double> estimate, std::span<const double> reference) {
  if (estimate.size() != reference.size())
    throw DimensionMismatch("si_sdr: sequence lengths differ");
  if (estimate.empty()) throw InvalidArgument("si_sdr: empty sequences");

  double dot = 0.0, ref_en = 0.0;
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    dot += estimate[i] * reference[i];
    ref_en += reference[i] * reference[i];
  }
  if (ref_en <= 0.0) throw InvalidArgument("si_sdr: reference has zero power");

  const double alpha = dot / ref_en;
  double err_en = 0.0;
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    const double e = estimate[i] - alpha * reference[i];
    err_en += e * e;
  }
  return {alpha, alpha * alpha * ref_en, err_en};
}

}  // namespace

double si_sdr(std::span<const double> estimate, std::span<const double> reference) {
  const Projection p = project(estimate, reference);
  const double num = std::max(p.target_en, kSiSdrEps);
  const double den = std::max(p.error_en, kSiSdrEps);
  return 10.0 * std::log10(num / den);
}

std::vector<double> si_sdr_gradient(std::span<const double> estimate,
                                    std::span<const double> reference) {
  const Projection p = project(estimate, reference);
  std::vector<double> grad(estimate.size(), 0.0);

  // Stationarity convention: inside the cap (estimate is a perfect rescale
  // of the reference) the gradient is zero.
  if (p.error_en <= kSiSdrEps) return grad;

  const double k = 20.0 / std::log(10.0);  // 10/ln10 * 2
  double ref_en = 0.0;
  for (double r : reference) ref_en += r * r;

  // The numerator log term contributes only above its guard.
  if (p.target_en > kSiSdrEps && p.alpha != 0.0) {
    const double c = k / (p.alpha * ref_en);
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += c * reference[i];
  }
  const double c = k / p.error_en;
  for (std::size_t i = 0; i < grad.size(); ++i)
    grad[i] -= c * (estimate[i] - p.alpha * reference[i]);
  return grad;
}

}  // namespace gftse
