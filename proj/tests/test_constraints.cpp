#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "pvlab/constraints.hpp"

using namespace pvlab;

namespace {
const double PI = 3.14159265358979323846;

TorusField cosine_front(int n2, int n3, double amp) {
    TorusField f(n2, n3);
    for (int j = 0; j < n2; ++j)
        for (int k = 0; k < n3; ++k)
            f(j, k) = amp * std::cos(2 * PI * f.x2(j)) * std::sin(2 * PI * f.x3(k));
    return f;
}
} // namespace

TEST_CASE("constraint residuals vanish for metric-consistent fields") {
    Grid g = plasma_grid(17, 8, 8);
    MetricPack mp = build_metric(lift_front(cosine_front(8, 8, 0.01), g));

    // H = eta^{-1} (0,1,0): h = (0,1,0) exactly, so div h = 0, H_N = 0 node-wise
    Vec3Field hconst = make_vec3(g);
    for (std::size_t m = 0; m < hconst[0].size(); ++m) hconst[1].v[m] = 1.0;
    Vec3Field H = apply_eta_inv(mp, hconst);
    ConstraintReport rep = constraint_residuals(H, mp);
    CHECK(rep.div_h_max < 1e-12);
    CHECK(rep.HN_front_max < 1e-12);
    CHECK(rep.H1_wall_max < 1e-12);

    // a generic field does not satisfy the constraints
    Vec3Field bad = H;
    for (int i = 0; i < g.g1.n; ++i)
        for (int j = 0; j < 8; ++j)
            for (int k = 0; k < 8; ++k) bad[0](i, j, k) += 0.1 * std::sin(PI * g.x1(i)) * std::cos(2 * PI * g.x2(j));
    CHECK(constraint_residuals(bad, mp).worst() > 1e-3);
}

TEST_CASE("residual transport: zero data stays zero; constant source integrates exactly") {
    Grid g = plasma_grid(17, 8, 8);
    MetricPack mp = flat_metric(g);
    Field dtpsi(g);
    Vec3Field v = make_vec3(g);

    TransportResiduals r = zero_residuals(g);
    TransportSources s0 = zero_sources(g);
    for (int step = 0; step < 20; ++step)
        r = evolve_transport_residuals(r, v, mp, dtpsi, s0, 1e-2);
    CHECK(max_abs(r.a) < 1e-14);
    CHECK(max_abs(r.R) < 1e-14);
    CHECK(max_abs(r.Rp) < 1e-14);

    // v = 0, constant sources: residuals grow exactly linearly
    TransportSources s1 = zero_sources(g);
    for (double& x : s1.Fa.v) x = 0.3;
    for (std::size_t m = 0; m < s1.Q.v.size(); ++m) {
        s1.Q.v[m] = -0.2;
        s1.Qp.v[m] = 0.1;
    }
    TransportResiduals r1 = zero_residuals(g);
    const double dt = 1e-2;
    for (int step = 0; step < 50; ++step)
        r1 = evolve_transport_residuals(r1, v, mp, dtpsi, s1, dt);
    const double T = 50 * dt;
    for (std::size_t m = 0; m < r1.a.size(); ++m)
        CHECK(r1.a.v[m] == doctest::Approx(0.3 * T).epsilon(1e-12));
    for (std::size_t m = 0; m < r1.R.v.size(); ++m) {
        CHECK(r1.R.v[m] == doctest::Approx(-0.2 * T).epsilon(1e-12));
        CHECK(r1.Rp.v[m] == doctest::Approx(0.1 * T).epsilon(1e-12));
    }
}

TEST_CASE("residual transport: tangential advection on the front") {
    Grid g = plasma_grid(9, 32, 4);
    MetricPack mp = flat_metric(g);
    Field dtpsi(g);
    Vec3Field v = make_vec3(g);
    const double c = 0.7;
    for (double& x : v[1].v) x = c; // uniform tangential advection

    TransportResiduals r = zero_residuals(g);
    for (int j = 0; j < 32; ++j)
        for (int k = 0; k < 4; ++k) r.R(j, k) = std::sin(2 * PI * r.R.x2(j));

    const double dt = 2e-3;
    const int steps = 250; // T = 0.5, half a period of transit
    TransportResiduals rn = r;
    TransportSources s0 = zero_sources(g);
    for (int step = 0; step < steps; ++step)
        rn = evolve_transport_residuals(rn, v, mp, dtpsi, s0, dt);
    const double T = steps * dt;
    double err = 0.0;
    for (int j = 0; j < 32; ++j)
        err = std::max(err, std::fabs(rn.R(j, 0) - std::sin(2 * PI * (rn.R.x2(j) - c * T))));
    CHECK(err < 1e-6); // spectral in space, RK4 in time
}
