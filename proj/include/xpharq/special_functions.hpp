#pragma once

#include <complex>

namespace xpharq {

using cplx = std::complex<double>;

/// Complex Gamma function (Lanczos g=7, reflection for Re z < 1/2).
cplx gamma_complex(cplx z);

/// Upper incomplete Gamma Gamma(a, b) = int_b^inf t^{a-1} e^{-t} dt for
/// complex order a and real b >= 0.
///
/// For b > 0 the integral is taken along the ray t = b + r e^{i theta}, with
/// theta tilted toward the sign of Im(a) so the t^{i Im a} factor decays
/// instead of oscillating, and r mapped by the exp-sinh transform. The
/// trapezoid step is halved until two levels agree to `rel_tol`. b = 0 falls
/// back to the complete Gamma function and needs Re(a) > 0.
cplx upper_incomplete_gamma(cplx a, double b, double rel_tol = 1e-12);

}  // namespace xpharq
