#include "pvlab/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace pvlab {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Cached FFTW plans per torus shape.  Plans are created once with
// FFTW_ESTIMATE so results are reproducible run to run.
struct Plans {
    int n2, n3;
    std::vector<double> rbuf;
    std::vector<fftw_complex> cbuf;
    fftw_plan fwd, bwd;

    Plans(int n2_, int n3_) : n2(n2_), n3(n3_), rbuf(std::size_t(n2_) * n3_), cbuf(std::size_t(n2_) * (n3_ / 2 + 1)) {
        fwd = fftw_plan_dft_r2c_2d(n2, n3, rbuf.data(), cbuf.data(), FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_2d(n2, n3, cbuf.data(), rbuf.data(), FFTW_ESTIMATE);
    }
    ~Plans() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
    }
};

Plans& plans_for(int n2, int n3) {
    static std::map<std::pair<int, int>, std::unique_ptr<Plans>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(n2, n3);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, std::make_unique<Plans>(n2, n3)).first;
    return *it->second;
}

} // namespace

TorusSpectrum torus_fft(const TorusField& f) {
    Plans& p = plans_for(f.n2, f.n3);
    p.rbuf.assign(f.v.begin(), f.v.end());
    fftw_execute_dft_r2c(p.fwd, p.rbuf.data(), p.cbuf.data());
    TorusSpectrum s(f.n2, f.n3);
    const double scale = 1.0 / (double(f.n2) * f.n3);
    for (std::size_t m = 0; m < s.c.size(); ++m)
        s.c[m] = Cplx(p.cbuf[m][0], p.cbuf[m][1]) * scale;
    return s;
}

TorusField torus_ifft(const TorusSpectrum& s) {
    Plans& p = plans_for(s.n2, s.n3);
    for (std::size_t m = 0; m < s.c.size(); ++m) {
        p.cbuf[m][0] = s.c[m].real();
        p.cbuf[m][1] = s.c[m].imag();
    }
    fftw_execute_dft_c2r(p.bwd, p.cbuf.data(), p.rbuf.data());
    TorusField f(s.n2, s.n3);
    f.v.assign(p.rbuf.begin(), p.rbuf.end());
    return f;
}

TorusField d_torus(const TorusField& f, int dir) {
    TorusSpectrum s = torus_fft(f);
    const int n2 = f.n2, n3 = f.n3;
    for (int j = 0; j < n2; ++j) {
        const int k2 = wavenumber(j, n2);
        for (int k = 0; k <= n3 / 2; ++k) {
            const int k3 = k;
            int kk = (dir == 2) ? k2 : k3;
            if ((dir == 2 && (n2 % 2 == 0 && j == n2 / 2)) ||
                (dir == 3 && (n3 % 2 == 0 && k == n3 / 2)))
                kk = 0; // Nyquist has no well-defined odd derivative
            s(j, k) *= Cplx(0.0, kTwoPi * kk);
        }
    }
    return torus_ifft(s);
}

Field d_tangential(const Field& f, int dir) {
    Field out(f.grid);
    for (int i = 0; i < f.grid.g1.n; ++i)
        set_slice(out, i, d_torus(slice(f, i), dir));
    return out;
}

std::vector<double> d1_line(const std::vector<double>& f, double h) {
    const int n = int(f.size());
    std::vector<double> d(n);
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    for (int i = 1; i < n - 1; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    return d;
}

Field d1(const Field& f) {
    const Grid& g = f.grid;
    Field out(g);
    const double h = g.g1.h();
    const int n1 = g.g1.n;
    const std::size_t ns = std::size_t(g.n2) * g.n3;
    for (std::size_t m = 0; m < ns; ++m) {
        const double* base = f.v.data() + m;
        double* ob = out.v.data() + m;
        auto at = [&](int i) { return base[std::size_t(i) * ns]; };
        ob[0] = (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
        for (int i = 1; i < n1 - 1; ++i) ob[std::size_t(i) * ns] = (at(i + 1) - at(i - 1)) / (2.0 * h);
        ob[std::size_t(n1 - 1) * ns] = (3.0 * at(n1 - 1) - 4.0 * at(n1 - 2) + at(n1 - 3)) / (2.0 * h);
    }
    return out;
}

double torus_hs_norm(const TorusField& f, double s) {
    TorusSpectrum sp = torus_fft(f);
    const int n2 = f.n2, n3 = f.n3;
    double acc = 0.0;
    for (int j = 0; j < n2; ++j) {
        const int k2 = wavenumber(j, n2);
        for (int k = 0; k <= n3 / 2; ++k) {
            // r2c half-plane: modes with 0 < k3 < n3/2 represent conjugate pairs
            const bool interior = (k != 0) && !(n3 % 2 == 0 && k == n3 / 2);
            const double mult = interior ? 2.0 : 1.0;
            const double w = 1.0 + double(k2) * k2 + double(k) * k;
            acc += mult * std::pow(w, s) * std::norm(sp(j, k));
        }
    }
    return std::sqrt(acc);
}

std::vector<double> dct1d(const std::vector<double>& f) {
    const int n = int(f.size());
    std::vector<double> in(f), out(n);
    fftw_plan p = fftw_plan_r2r_1d(n, in.data(), out.data(), FFTW_REDFT10, FFTW_ESTIMATE);
    fftw_execute(p);
    fftw_destroy_plan(p);
    for (double& x : out) x /= 2.0 * n; // so that idct1d(dct1d(f)) == f
    return out;
}

std::vector<double> idct1d(const std::vector<double>& c) {
    const int n = int(c.size());
    std::vector<double> in(c), out(n);
    fftw_plan p = fftw_plan_r2r_1d(n, in.data(), out.data(), FFTW_REDFT01, FFTW_ESTIMATE);
    fftw_execute(p);
    fftw_destroy_plan(p);
    return out;
}

} // namespace pvlab
