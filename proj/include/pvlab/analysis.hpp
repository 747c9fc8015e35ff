#pragma once

#include <functional>

#include "pvlab/field.hpp"

namespace pvlab {

// Conormal weight on [0,1]: exactly x1 near the interface, exactly 1-x1 near
// the wall, smooth, positive inside, |sigma'| <= 1.
double conormal_sigma(double x1);

enum class NormKind {
    Sobolev,      // full H^m with gamma weights
    Tangential,   // conormal Z-derivatives only
    Anisotropic   // Z^alpha d1^k with |alpha| + 2k <= m
};

// Discrete norm evaluation on slab fields.  gamma is the exponential weight
// parameter; gamma = 1 gives the plain norms.  Throws OrderTooHighForGrid if
// the stencil order is not supported by the grid.
double norm_eval(const Field& u, NormKind kind, int m, double gamma = 1.0);

// Fractional Sobolev norm of a torus function via its Fourier sum.
double fractional_norm(const TorusField& u, double s);

// Smoothing family S_theta: spectral multiplier in (cosine x1) x (Fourier x')
// space, equal to 1 up to |freq| = theta and 0 beyond 2*theta.
// Correction coefficients at the spectral noise floor are zeroed, so
// band-limited fields are reproduced exactly.
Field smooth_Stheta(const Field& u, double theta);
TorusField smooth_Stheta(const TorusField& u, double theta);

// theta-derivative of the smoothing family (for the commutator-type bounds).
Field smooth_Stheta_dtheta(const Field& u, double theta);

// Apply a radial gain g(freq) to every (cosine x1) x (Fourier x') coefficient.
Field radial_filter(const Field& u, const std::function<double(double)>& gain);

// Sharp projection onto transform modes with frequency <= cutoff.
Field band_limit(const Field& u, double cutoff);

} // namespace pvlab
