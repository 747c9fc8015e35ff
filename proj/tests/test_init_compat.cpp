#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "pvlab/init_compat.hpp"
#include "pvlab/interface.hpp"

using namespace pvlab;

namespace {
const double PI = 3.14159265358979323846;

// Equilibrium bundle plus a smooth velocity perturbation whose interface
// pressure trace stays consistent at order zero (q == 2 on the front, flat
// front, constant vacuum trace).
InitialDataBundle perturbed_bundle(int n1, int n2, int n3, double amp) {
    EquilibriumSetup eq = make_equilibrium(n1, n2, n3);
    const Grid& gp = eq.state.U[0].grid;
    State8 U0 = eq.state.U;
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j)
            for (int k = 0; k < n3; ++k) {
                const double x1 = gp.x1(i), x2 = gp.x2(j), x3 = gp.x3(k);
                const double w = std::sin(PI * x1); // vanishes at both walls
                U0[2](i, j, k) += amp * w * std::sin(2 * PI * x2) * std::cos(2 * PI * x3);
                U0[3](i, j, k) += amp * w * std::cos(2 * PI * x2 + 0.4);
                U0[1](i, j, k) += amp * std::sin(PI * x1) * std::sin(2 * PI * x3);
            }
    return make_bundle(Eos{}, U0, eq.state.phi, eq.jay, vacuum_grid(n1, n2, n3));
}
} // namespace

TEST_CASE("equilibrium cascade: all time jets vanish") {
    EquilibriumSetup eq = make_equilibrium(17, 8, 8);
    InitialDataBundle b =
        make_bundle(Eos{}, eq.state.U, eq.state.phi, eq.jay, vacuum_grid(17, 8, 8));
    derivative_cascade(b, 2);
    REQUIRE(b.U.size() == 3);
    REQUIRE(b.phi.size() == 3);
    REQUIRE(b.Hvac.size() == 3);
    for (int j = 1; j <= 2; ++j) {
        for (int c = 0; c < 8; ++c) CHECK(max_abs(b.U[j][c]) < 1e-11);
        CHECK(max_abs(b.phi[j]) < 1e-12);
        for (int c = 0; c < 3; ++c) CHECK(max_abs(b.Hvac[j][c]) < 1e-7);
    }
    // the order-zero vacuum jet is the elliptic response to the wall datum
    CHECK(max_abs(b.Hvac[0][0]) < 1e-9);
    const int top = b.gv.g1.n - 1;
    CHECK(b.Hvac[0][1](top, 0, 0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-9));
    CHECK(b.Hvac[0][2](top, 0, 0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("first jet equals the interior evolution operator at t = 0") {
    InitialDataBundle b = perturbed_bundle(17, 8, 8, 0.01);
    derivative_cascade(b, 1);
    // oracle: direct evaluation of dU/dt = -A0^{-1} (spatial operator)
    const Grid& gp = b.U[0][0].grid;
    MetricPack mp = build_metric(lift_front(b.phi[0], gp, 1e300));
    Field dtpsi = lift_front(b.phi[1], gp, 1e300);
    State8 oracle = plasma_rhs(b.U[0], b.eos, mp, dtpsi);
    for (int c = 0; c < 8; ++c)
        CHECK(max_abs(b.U[1][c] - oracle[c]) < 1e-12);
}

TEST_CASE("second jet matches coupled micro-stepping at interior nodes") {
    const int n1 = 33, n2 = 8, n3 = 8;
    InitialDataBundle b = perturbed_bundle(n1, n2, n3, 0.01);
    derivative_cascade(b, 2);

    CoupledOpts opts;
    opts.delta0 = 0.1;
    CoupledState s0{b.U[0], b.phi[0], 0.0};
    const double h = 1e-3;
    CoupledState fwd = coupled_step(s0, b.jay, h, opts);
    CoupledState bwd = coupled_step(s0, b.jay, -h, opts);

    // second difference (U(h) - 2 U(0) + U(-h)) / h^2; compare away from both
    // x1 boundaries where one step is independent of the boundary treatment
    double worst = 0.0, scale = 0.0;
    for (int c = 0; c < 8; ++c)
        for (int i = 12; i <= 20; ++i)
            for (int j = 0; j < n2; ++j)
                for (int k = 0; k < n3; ++k) {
                    const double dd =
                        (fwd.U[c](i, j, k) - 2 * s0.U[c](i, j, k) + bwd.U[c](i, j, k)) /
                        (h * h);
                    worst = std::max(worst, std::fabs(dd - b.U[2][c](i, j, k)));
                    scale = std::max(scale, std::fabs(b.U[2][c](i, j, k)));
                }
    CHECK(scale > 0.01); // the perturbation actually accelerates
    CHECK(worst < 1e-2 * scale + 1e-4);
}

TEST_CASE("compatibility report") {
    SUBCASE("equilibrium: pressure identity exact, wall clean") {
        EquilibriumSetup eq = make_equilibrium(17, 8, 8);
        InitialDataBundle b =
            make_bundle(Eos{}, eq.state.U, eq.state.phi, eq.jay, vacuum_grid(17, 8, 8));
        derivative_cascade(b, 2);
        CompatOrderReport rep = check_compat_order(b, 3);
        CHECK(rep.pressure[0] < 1e-10);
        CHECK(rep.pressure[1] < 1e-7);
        CHECK(rep.pressure[2] < 1e-7);
        for (double w : rep.wall_v1) CHECK(w < 1e-12);
        CHECK(rep.weighted_trace < 1e-12);
    }
    SUBCASE("a deliberate pressure offset is read back exactly") {
        EquilibriumSetup eq = make_equilibrium(17, 8, 8);
        State8 U0 = eq.state.U;
        for (std::size_t m = 0; m < U0[0].size(); ++m) U0[0].v[m] += 0.1;
        InitialDataBundle b =
            make_bundle(Eos{}, U0, eq.state.phi, eq.jay, vacuum_grid(17, 8, 8));
        derivative_cascade(b, 1);
        CompatOrderReport rep = check_compat_order(b, 1);
        CHECK(rep.pressure[0] == doctest::Approx(0.1).epsilon(1e-8));
    }
}

TEST_CASE("approximate solution and its residual") {
    SUBCASE("equilibrium: residual identically small, pressure condition exact") {
        EquilibriumSetup eq = make_equilibrium(17, 8, 8);
        InitialDataBundle b =
            make_bundle(Eos{}, eq.state.U, eq.state.phi, eq.jay, vacuum_grid(17, 8, 8));
        derivative_cascade(b, 2);
        ApproxSolution a = build_approximate_solution(b, 1.0);
        for (double t : {0.0, 0.05, 0.3, 0.7}) {
            CHECK(approx_residual_norm(a, t) < 1e-10);
            // interface pressure condition q = |Hvac|^2 / 2
            State8 U = approx_plasma(a, t);
            Vec3Field H = approx_vacuum(a, t);
            const int top = b.gv.g1.n - 1;
            double worst = 0.0;
            for (int j = 0; j < 8; ++j)
                for (int k = 0; k < 8; ++k) {
                    double e = 0.0;
                    for (int c = 0; c < 3; ++c) e += H[c](top, j, k) * H[c](top, j, k);
                    worst = std::max(worst, std::fabs(U[0](0, j, k) - 0.5 * e));
                }
            CHECK(worst < 1e-9);
        }
        CHECK(approx_residual_norm(a, -0.5) == 0.0);
    }

    SUBCASE("vacuum field at t = 0 reproduces the cascade's order-zero jet") {
        InitialDataBundle b = perturbed_bundle(17, 8, 8, 0.01);
        derivative_cascade(b, 2);
        ApproxSolution a = build_approximate_solution(b, 1.0);
        Vec3Field H0 = approx_vacuum(a, 0.0);
        for (int c = 0; c < 3; ++c) CHECK(max_abs(H0[c] - b.Hvac[0][c]) < 1e-10);
    }

    SUBCASE("perturbed data: residual decays at second order in time") {
        InitialDataBundle b = perturbed_bundle(17, 8, 8, 0.01);
        derivative_cascade(b, 2); // jets through the second derivative
        ApproxSolution a = build_approximate_solution(b, 1.0);
        std::vector<double> ts{1e-3, 3.16e-3, 1e-2, 3.16e-2, 1e-1};
        std::vector<double> fs;
        for (double t : ts) fs.push_back(approx_residual_norm(a, t));
        // least-squares slope of log f vs log t
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const int n = static_cast<int>(ts.size());
        for (int i = 0; i < n; ++i) {
            const double x = std::log(ts[i]), y = std::log(fs[i]);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        MESSAGE("residuals ", fs[0], " ", fs[2], " ", fs[4], " slope ", slope);
        CHECK(slope >= 1.8);
    }
}
