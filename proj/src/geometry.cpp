#include "pvlab/geometry.hpp"

#include <cmath>

namespace pvlab {

double lift_bump(double s) {
    const double u = 2.0 * s;
    if (u * u >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

double lift_bump_d1(double s) {
    const double u = 2.0 * s;
    if (u * u >= 1.0) return 0.0;
    const double d = 1.0 - u * u;
    // d/ds exp(1 - 1/d) = exp(1-1/d) * (-2u/d^2) * 2
    return lift_bump(s) * (-4.0 * u / (d * d));
}

double lift_bump_d2(double s) {
    const double u = 2.0 * s;
    if (u * u >= 1.0) return 0.0;
    const double d = 1.0 - u * u;
    const double g = -4.0 * u / (d * d); // d/ds of (1 - 1/d) inner part times chain
    const double gp = (-4.0 / (d * d) - 4.0 * u * (2.0 / (d * d * d)) * 2.0 * u) * 2.0;
    return lift_bump(s) * (g * g) + lift_bump(s) * gp;
}

Field lift_front(const TorusField& phi, const Grid& grid, double max_slope) {
    if (phi.n2 != grid.n2 || phi.n3 != grid.n3)
        throw BadGrid("lift_front: front and grid torus shapes differ");

    TorusSpectrum sp = torus_fft(phi);
    const int n1 = grid.g1.n;
    const int n2 = grid.n2, n3 = grid.n3;

    Field psi(grid);
    TorusSpectrum layer(n2, n3);
    for (int i = 0; i < n1; ++i) {
        const double x1 = grid.x1(i);
        for (int j = 0; j < n2; ++j) {
            const int k2 = wavenumber(j, n2);
            for (int k = 0; k <= n3 / 2; ++k) {
                const double braket = std::sqrt(1.0 + double(k2) * k2 + double(k) * k);
                layer(j, k) = sp(j, k) * lift_bump(braket * x1);
            }
        }
        set_slice(psi, i, torus_ifft(layer));
    }

    // admissibility guard: the straightening stays a diffeomorphism only
    // while |d1 psi| is well below 1.
    Field dpsi = d1(psi);
    if (max_abs(dpsi) > max_slope)
        throw FrontTooLarge("lift_front: |d1 psi| exceeds slope bound");
    return psi;
}

MetricPack build_metric(const Field& psi, double floor_d1phi1) {
    MetricPack mp;
    mp.grid = psi.grid;
    mp.psi = psi;

    Field p1 = d1(psi);
    Field p2 = d_tangential(psi, 2);
    Field p3 = d_tangential(psi, 3);

    mp.d1phi1 = Field(psi.grid, 1.0);
    mp.d1phi1 += p1;
    for (double x : mp.d1phi1.v)
        if (x < floor_d1phi1)
            throw MetricDegenerate("build_metric: d1 Phi1 below floor");

    mp.normal = {Field(psi.grid, 1.0), Field(psi.grid), Field(psi.grid)};
    for (std::size_t m = 0; m < psi.size(); ++m) {
        mp.normal[1].v[m] = -p2.v[m];
        mp.normal[2].v[m] = -p3.v[m];
    }

    for (auto& row : mp.eta)
        for (auto& e : row) e = Field(psi.grid);
    for (auto& row : mp.A)
        for (auto& e : row) e = Field(psi.grid);

    for (std::size_t m = 0; m < psi.size(); ++m) {
        const double d = mp.d1phi1.v[m];
        const double s2 = p2.v[m], s3 = p3.v[m];
        // eta_hat rows: (1, -d2psi, -d3psi), (0, d, 0), (0, 0, d)
        mp.eta[0][0].v[m] = 1.0;
        mp.eta[0][1].v[m] = -s2;
        mp.eta[0][2].v[m] = -s3;
        mp.eta[1][1].v[m] = d;
        mp.eta[2][2].v[m] = d;
        // A = (1/d) eta eta^T
        const double a00 = (1.0 + s2 * s2 + s3 * s3) / d;
        mp.A[0][0].v[m] = a00;
        mp.A[0][1].v[m] = -s2;
        mp.A[1][0].v[m] = -s2;
        mp.A[0][2].v[m] = -s3;
        mp.A[2][0].v[m] = -s3;
        mp.A[1][1].v[m] = d;
        mp.A[2][2].v[m] = d;
    }
    return mp;
}

std::array<std::array<double, 3>, 3> MetricPack::eta_at(std::size_t m) const {
    std::array<std::array<double, 3>, 3> e{};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) e[r][c] = eta[r][c].v[m];
    return e;
}

std::array<std::array<double, 3>, 3> MetricPack::A_at(std::size_t m) const {
    std::array<std::array<double, 3>, 3> a{};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) a[r][c] = A[r][c].v[m];
    return a;
}

Vec3Field apply_eta(const MetricPack& mp, const Vec3Field& v) {
    Vec3Field out = make_vec3(mp.grid);
    for (std::size_t m = 0; m < mp.psi.size(); ++m) {
        const double d = mp.d1phi1.v[m];
        const double s2 = -mp.eta[0][1].v[m], s3 = -mp.eta[0][2].v[m];
        out[0].v[m] = v[0].v[m] - s2 * v[1].v[m] - s3 * v[2].v[m];
        out[1].v[m] = d * v[1].v[m];
        out[2].v[m] = d * v[2].v[m];
    }
    return out;
}

Vec3Field apply_eta_inv(const MetricPack& mp, const Vec3Field& v) {
    Vec3Field out = make_vec3(mp.grid);
    for (std::size_t m = 0; m < mp.psi.size(); ++m) {
        const double d = mp.d1phi1.v[m];
        const double s2 = -mp.eta[0][1].v[m], s3 = -mp.eta[0][2].v[m];
        out[1].v[m] = v[1].v[m] / d;
        out[2].v[m] = v[2].v[m] / d;
        out[0].v[m] = v[0].v[m] + s2 * out[1].v[m] + s3 * out[2].v[m];
    }
    return out;
}

Vec3Field apply_A(const MetricPack& mp, const Vec3Field& v) {
    Vec3Field out = make_vec3(mp.grid);
    for (std::size_t m = 0; m < mp.psi.size(); ++m) {
        for (int r = 0; r < 3; ++r) {
            double s = 0.0;
            for (int c = 0; c < 3; ++c) s += mp.A[r][c].v[m] * v[c].v[m];
            out[r].v[m] = s;
        }
    }
    return out;
}

MetricPack flat_metric(const Grid& g) {
    return build_metric(Field(g, 0.0));
}

} // namespace pvlab
