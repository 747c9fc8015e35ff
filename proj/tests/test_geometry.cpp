#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "pvlab/geometry.hpp"

using namespace pvlab;

namespace {
TorusField random_front(int n2, int n3, double amp, unsigned seed) {
    // band-limited random front: modes |k| <= 3
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    TorusField f(n2, n3);
    for (int k2 = -3; k2 <= 3; ++k2)
        for (int k3 = -3; k3 <= 3; ++k3) {
            if (k2 == 0 && k3 == 0) continue;
            const double a = amp * u(rng), b = amp * u(rng);
            for (int j = 0; j < n2; ++j)
                for (int k = 0; k < n3; ++k) {
                    const double th = 2.0 * M_PI * (k2 * f.x2(j) + k3 * f.x3(k));
                    f(j, k) += a * std::cos(th) + b * std::sin(th);
                }
        }
    return f;
}
} // namespace

TEST_CASE("bump kernel: center value, flat center, compact support") {
    CHECK(lift_bump(0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(lift_bump_d1(0.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(lift_bump(0.5) == 0.0);
    CHECK(lift_bump(-0.51) == 0.0);
    CHECK(lift_bump(0.49) > 0.0);
    // derivative formulas against central differences
    for (double s : {0.1, 0.2, -0.3, 0.42}) {
        const double h = 1e-6;
        const double fd1 = (lift_bump(s + h) - lift_bump(s - h)) / (2 * h);
        CHECK(lift_bump_d1(s) == doctest::Approx(fd1).epsilon(1e-7));
        const double fd2 = (lift_bump_d1(s + h) - lift_bump_d1(s - h)) / (2 * h);
        CHECK(lift_bump_d2(s) == doctest::Approx(fd2).epsilon(1e-6));
    }
}

TEST_CASE("lift_front: trace equality, linearity, vanishing at outer walls") {
    Grid gp = plasma_grid(33, 16, 16);
    TorusField f1 = random_front(16, 16, 0.003, 7);
    TorusField f2 = random_front(16, 16, 0.003, 13);
    Field psi1 = lift_front(f1, gp);
    Field psi2 = lift_front(f2, gp);

    // trace at x1 = 0 reproduces the front exactly (lifting kernel is 1 there)
    for (int j = 0; j < 16; ++j)
        for (int k = 0; k < 16; ++k)
            CHECK(psi1(0, j, k) == doctest::Approx(f1(j, k)).epsilon(1e-12));

    // linearity of the mode-wise construction
    TorusField fs = f1;
    fs += f2;
    Field psis = lift_front(fs, gp);
    Field diff = psis - psi1 - psi2;
    CHECK(max_abs(diff) < 1e-13);

    // support: psi == 0 at x1 = 1 and normal derivative vanishes at x1 = 0
    const int last = gp.g1.n - 1;
    for (int j = 0; j < 16; ++j)
        for (int k = 0; k < 16; ++k)
            CHECK(std::fabs(psi1(last, j, k)) < 1e-14);
    // the kernel is flat at x1 = 0, so the one-sided stencil value there is
    // pure truncation error and must fall off at 2nd order under refinement
    Field dpsi_c = d1(psi1);
    Grid gfine = plasma_grid(65, 16, 16);
    Field dpsi_f = d1(lift_front(f1, gfine));
    double ec = 0.0, ef = 0.0;
    for (int j = 0; j < 16; ++j)
        for (int k = 0; k < 16; ++k) {
            ec = std::max(ec, std::fabs(dpsi_c(0, j, k)));
            ef = std::max(ef, std::fabs(dpsi_f(0, j, k)));
        }
    CHECK(ef < ec / 3.0);
}

TEST_CASE("lift_front: decay scale shrinks with |k|") {
    Grid gp = plasma_grid(65, 16, 16);
    // single low mode vs single high mode: the high mode's lift must die off closer to the interface
    TorusField lo(16, 16), hi(16, 16);
    for (int j = 0; j < 16; ++j)
        for (int k = 0; k < 16; ++k) {
            lo(j, k) = 0.01 * std::cos(2.0 * M_PI * lo.x2(j));
            hi(j, k) = 0.01 * std::cos(2.0 * M_PI * 6.0 * hi.x2(j));
        }
    Field plo = lift_front(lo, gp), phi_ = lift_front(hi, gp);
    auto depth = [&](const Field& f) {
        for (int i = gp.g1.n - 1; i >= 0; --i)
            if (max_abs(slice(f, i)) > 1e-14) return gp.x1(i);
        return 0.0;
    };
    CHECK(depth(phi_) < depth(plo));
}

TEST_CASE("lift_front: rejects oversized fronts") {
    Grid gp = plasma_grid(33, 16, 16);
    TorusField big(16, 16);
    for (int j = 0; j < 16; ++j)
        for (int k = 0; k < 16; ++k) big(j, k) = 0.5 * std::cos(2.0 * M_PI * big.x2(j));
    CHECK_THROWS_AS(lift_front(big, gp), FrontTooLarge);
}

TEST_CASE("build_metric: determinant identity and SPD of A") {
    Grid gp = plasma_grid(17, 16, 16);
    TorusField f = random_front(16, 16, 0.004, 21);
    MetricPack mp = build_metric(lift_front(f, gp));

    for (std::size_t m = 0; m < mp.psi.size(); m += 37) {
        auto e = mp.eta_at(m);
        const double det = e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1]) -
                           e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0]) +
                           e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0]);
        const double d = mp.d1phi1.v[m];
        CHECK(det == doctest::Approx(d * d).epsilon(1e-12));

        auto a = mp.A_at(m);
        // symmetry and positive definiteness via leading minors
        CHECK(a[0][1] == doctest::Approx(a[1][0]).epsilon(1e-14));
        CHECK(a[0][2] == doctest::Approx(a[2][0]).epsilon(1e-14));
        CHECK(a[0][0] > 0.0);
        CHECK(a[0][0] * a[1][1] - a[0][1] * a[1][0] > 0.0);
        const double det3 = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                            a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                            a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
        CHECK(det3 > 0.0);
    }
}

TEST_CASE("metric apply/inverse round trip; flat metric is identity") {
    Grid gp = plasma_grid(17, 16, 16);
    TorusField f = random_front(16, 16, 0.004, 3);
    MetricPack mp = build_metric(lift_front(f, gp));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Vec3Field v = make_vec3(gp);
    for (int a = 0; a < 3; ++a)
        for (double& x : v[a].v) x = u(rng);
    Vec3Field w = apply_eta_inv(mp, apply_eta(mp, v));
    for (int a = 0; a < 3; ++a) {
        Field diff = w[a] - v[a];
        CHECK(max_abs(diff) < 1e-13);
    }

    MetricPack id = flat_metric(gp);
    Vec3Field vi = apply_eta(id, v);
    for (int a = 0; a < 3; ++a) {
        Field diff = vi[a] - v[a];
        CHECK(max_abs(diff) < 1e-14);
    }
}
