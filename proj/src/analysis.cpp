#include "pvlab/analysis.hpp"

#include <cmath>
#include <functional>
#include <vector>

#include "pvlab/spectral.hpp"

namespace pvlab {
namespace {

double expstep_raw(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

// C-infinity step: 0 for t<=0, 1 for t>=1, symmetric about 1/2.
double smoothstep(double t) {
    const double a = expstep_raw(t), b = expstep_raw(1.0 - t);
    return a / (a + b);
}

double smoothstep_d(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    const double h = 1e-6;
    return (smoothstep(t + h) - smoothstep(t - h)) / (2.0 * h);
}

// integrand of the conormal weight in the blending zone
double sigma_slope(double x) { return 1.0 - 2.0 * smoothstep((x - 0.25) * 2.0); }

double sigma_blend(double x) {
    // composite Simpson on [0.25, x]; the integrand is smooth and cheap
    const int n = 64;
    const double h = (x - 0.25) / n;
    double s = sigma_slope(0.25) + sigma_slope(x);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * sigma_slope(0.25 + i * h);
    return 0.25 + s * h / 3.0;
}

} // namespace

double conormal_sigma(double x1) {
    if (x1 <= 0.25) return x1;
    if (x1 >= 0.75) return 1.0 - x1;
    // symmetric blend; evaluate on the shorter side for accuracy
    if (x1 <= 0.5) return sigma_blend(x1);
    return sigma_blend(1.0 - x1);
}

namespace {

Field apply_Z1(const Field& u) {
    Field d = d1(u);
    const Grid& g = u.grid;
    for (int i = 0; i < g.g1.n; ++i) {
        const double s = conormal_sigma(g.x1(i));
        const std::size_t off = g.idx(i, 0, 0);
        const std::size_t ns = std::size_t(g.n2) * g.n3;
        for (std::size_t m = 0; m < ns; ++m) d.v[off + m] *= s;
    }
    return d;
}

Field apply_multi(const Field& u, int a1, int a2, int a3, bool conormal, int kpre) {
    Field w = u;
    for (int r = 0; r < kpre; ++r) w = d1(w);            // plain d1^k first
    for (int r = 0; r < a1; ++r) w = conormal ? apply_Z1(w) : d1(w);
    for (int r = 0; r < a2; ++r) w = d_tangential(w, 2);
    for (int r = 0; r < a3; ++r) w = d_tangential(w, 3);
    return w;
}

} // namespace

double norm_eval(const Field& u, NormKind kind, int m, double gamma) {
    if (m < 0) throw OrderTooHighForGrid("norm_eval: negative order");
    const Grid& g = u.grid;
    if (m > 4 || g.g1.n < 2 * m + 3)
        throw OrderTooHighForGrid("norm_eval: order unsupported on this grid");
    if (gamma < 1.0) throw Error("norm_eval: gamma must be >= 1");

    double acc = 0.0;
    auto add = [&](const Field& w, int total_order) {
        const double gw = std::pow(gamma, 2.0 * (m - total_order));
        const double n = l2_norm(w);
        acc += gw * n * n;
    };

    if (kind == NormKind::Sobolev || kind == NormKind::Tangential) {
        const bool conormal = (kind == NormKind::Tangential);
        for (int a1 = 0; a1 <= m; ++a1)
            for (int a2 = 0; a1 + a2 <= m; ++a2)
                for (int a3 = 0; a1 + a2 + a3 <= m; ++a3)
                    add(apply_multi(u, a1, a2, a3, conormal, 0), a1 + a2 + a3);
    } else {
        for (int k = 0; 2 * k <= m; ++k)
            for (int a1 = 0; a1 + 2 * k <= m; ++a1)
                for (int a2 = 0; a1 + a2 + 2 * k <= m; ++a2)
                    for (int a3 = 0; a1 + a2 + a3 + 2 * k <= m; ++a3)
                        add(apply_multi(u, a1, a2, a3, true, k), a1 + a2 + a3 + 2 * k);
    }
    return std::sqrt(acc);
}

double fractional_norm(const TorusField& u, double s) { return torus_hs_norm(u, s); }

namespace {

double mollifier(double rho) {
    if (rho <= 1.0) return 1.0;
    if (rho >= 2.0) return 0.0;
    return 1.0 - smoothstep(rho - 1.0);
}

double mollifier_drho(double rho) {
    if (rho <= 1.0 || rho >= 2.0) return 0.0;
    return -smoothstep_d(rho - 1.0);
}

// shared transform-multiply-inverse driver; mult(freq) gives the coefficient
// factor *minus one* (so exact-passband corrections are exactly zero).
Field spectral_correction(const Field& u, const std::function<double(double)>& mult_minus1,
                          bool floor_noise) {
    const Grid& g = u.grid;
    const int n1 = g.g1.n;

    // tangential FFT per slice
    std::vector<TorusSpectrum> sp;
    sp.reserve(n1);
    for (int i = 0; i < n1; ++i) sp.push_back(torus_fft(slice(u, i)));

    // cosine transform along x1 per tangential mode, then multiply
    const int n3h = g.n3 / 2 + 1;
    std::vector<double> re(n1), im(n1);
    double cmax = 0.0;
    std::vector<std::vector<double>> cre(std::size_t(g.n2) * n3h), cim(std::size_t(g.n2) * n3h);
    for (int j = 0; j < g.n2; ++j)
        for (int k = 0; k < n3h; ++k) {
            for (int i = 0; i < n1; ++i) {
                re[i] = sp[i](j, k).real();
                im[i] = sp[i](j, k).imag();
            }
            auto& R = cre[std::size_t(j) * n3h + k];
            auto& I = cim[std::size_t(j) * n3h + k];
            R = dct1d(re);
            I = dct1d(im);
            for (int i = 0; i < n1; ++i)
                cmax = std::max({cmax, std::fabs(R[i]), std::fabs(I[i])});
        }
    const double floor = floor_noise ? 1e-14 * cmax : -1.0;

    for (int j = 0; j < g.n2; ++j) {
        const int k2 = wavenumber(j, g.n2);
        for (int k = 0; k < n3h; ++k) {
            auto& R = cre[std::size_t(j) * n3h + k];
            auto& I = cim[std::size_t(j) * n3h + k];
            for (int i = 0; i < n1; ++i) {
                const double freq = std::sqrt(0.25 * i * i + double(k2) * k2 + double(k) * k);
                const double f = mult_minus1(freq);
                R[i] *= f;
                I[i] *= f;
                if (std::fabs(R[i]) <= floor) R[i] = 0.0;
                if (std::fabs(I[i]) <= floor) I[i] = 0.0;
            }
        }
    }

    Field corr(g);
    TorusSpectrum layer(g.n2, g.n3);
    std::vector<std::vector<double>> rre(std::size_t(g.n2) * n3h), rim(std::size_t(g.n2) * n3h);
    for (int j = 0; j < g.n2; ++j)
        for (int k = 0; k < n3h; ++k) {
            rre[std::size_t(j) * n3h + k] = idct1d(cre[std::size_t(j) * n3h + k]);
            rim[std::size_t(j) * n3h + k] = idct1d(cim[std::size_t(j) * n3h + k]);
        }
    for (int i = 0; i < n1; ++i) {
        for (int j = 0; j < g.n2; ++j)
            for (int k = 0; k < n3h; ++k)
                layer(j, k) = Cplx(rre[std::size_t(j) * n3h + k][i], rim[std::size_t(j) * n3h + k][i]);
        set_slice(corr, i, torus_ifft(layer));
    }
    return corr;
}

} // namespace

Field smooth_Stheta(const Field& u, double theta) {
    if (theta <= 0.0) throw Error("smooth_Stheta: theta must be positive");
    Field corr = spectral_correction(
        u, [theta](double f) { return mollifier(f / theta) - 1.0; }, true);
    Field out = u;
    out += corr;
    return out;
}

Field smooth_Stheta_dtheta(const Field& u, double theta) {
    return spectral_correction(
        u, [theta](double f) { return mollifier_drho(f / theta) * (-f / (theta * theta)); }, false);
}

Field radial_filter(const Field& u, const std::function<double(double)>& gain) {
    Field out = u;
    out += spectral_correction(u, [&gain](double f) { return gain(f) - 1.0; }, false);
    return out;
}

Field band_limit(const Field& u, double cutoff) {
    return radial_filter(u, [cutoff](double f) { return f <= cutoff ? 1.0 : 0.0; });
}

TorusField smooth_Stheta(const TorusField& u, double theta) {
    if (theta <= 0.0) throw Error("smooth_Stheta: theta must be positive");
    TorusSpectrum sp = torus_fft(u);
    double cmax = 0.0;
    for (const Cplx& c : sp.c) cmax = std::max({cmax, std::fabs(c.real()), std::fabs(c.imag())});
    const double floor = 1e-14 * cmax;
    TorusSpectrum corr(u.n2, u.n3);
    for (int j = 0; j < u.n2; ++j) {
        const int k2 = wavenumber(j, u.n2);
        for (int k = 0; k <= u.n3 / 2; ++k) {
            const double f = std::sqrt(double(k2) * k2 + double(k) * k);
            Cplx c = sp(j, k) * (mollifier(f / theta) - 1.0);
            if (std::fabs(c.real()) <= floor) c = Cplx(0.0, c.imag());
            if (std::fabs(c.imag()) <= floor) c = Cplx(c.real(), 0.0);
            corr(j, k) = c;
        }
    }
    TorusField out = u;
    out += torus_ifft(corr);
    return out;
}

} // namespace pvlab
