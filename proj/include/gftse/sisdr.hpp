#pragma once

#include <span>
#include <vector>

namespace gftse {

// Epsilon guard on the projection-error energy; keeps the perfect-estimate
// case at a large finite value instead of +inf.
inline constexpr double kSiSdrEps = 1e-12;

// Scale-invariant SDR in dB: 10*log10(||a*s||^2 / ||e||^2) with
// a = <est, ref>/||ref||^2 and e = est - a*ref.  Both energies are clamped
// below by kSiSdrEps, so the result is finite for every finite input.
// Throws on length mismatch or zero-power reference.
double si_sdr(std::span<const double> estimate, std::span<const double> reference);

// d si_sdr / d estimate, per sample.  Zero inside the epsilon-capped regime
// (estimate already a perfect rescale of the reference).
std::vector<double> si_sdr_gradient(std::span<const double> estimate,
                                    std::span<const double> reference);

}  // namespace gftse
