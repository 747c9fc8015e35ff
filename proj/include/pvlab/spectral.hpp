#pragma once

#include <complex>
#include <vector>

#include "pvlab/field.hpp"

namespace pvlab {

// Tangential directions are spectral (unit torus, modes e^{2pi i k.x'}),
// x1 is finite-difference.  Complex spectra are stored as n2 x (n3/2+1)
// half-plane arrays in FFTW r2c layout.
using Cplx = std::complex<double>;

struct TorusSpectrum {
    int n2 = 0, n3 = 0;
    std::vector<Cplx> c; // n2 * (n3/2+1)

    TorusSpectrum() = default;
    TorusSpectrum(int n2_, int n3_) : n2(n2_), n3(n3_), c(std::size_t(n2_) * (n3_ / 2 + 1)) {}
    Cplx& operator()(int j, int k) { return c[std::size_t(j) * (n3 / 2 + 1) + k]; }
    Cplx operator()(int j, int k) const { return c[std::size_t(j) * (n3 / 2 + 1) + k]; }
};

// Signed integer wavenumber for DFT index j on an n-point grid.
inline int wavenumber(int j, int n) { return (j <= n / 2) ? j : j - n; }

TorusSpectrum torus_fft(const TorusField& f);          // normalized: c_k are Fourier coefficients
TorusField torus_ifft(const TorusSpectrum& s);

// Spectral tangential derivatives; Nyquist modes are zeroed.
TorusField d_torus(const TorusField& f, int dir);      // dir: 2 or 3
Field d_tangential(const Field& f, int dir);

// Second-order x1 derivative: centered interior, one-sided ends.
Field d1(const Field& f);
std::vector<double> d1_line(const std::vector<double>& f, double h);

// Fractional Sobolev norm on the torus: sum (1+|k|^2)^s |c_k|^2.
double torus_hs_norm(const TorusField& f, double s);

// Even-extension cosine transform along x1 (DCT-II forward / DCT-III inverse,
// orthonormal-ish scaling handled internally).  Used by the smoothing operator.
std::vector<double> dct1d(const std::vector<double>& f);   // length n -> n coefficients
std::vector<double> idct1d(const std::vector<double>& c);

} // namespace pvlab
