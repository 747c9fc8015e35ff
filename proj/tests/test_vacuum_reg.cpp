#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "pvlab/interface.hpp"
#include "pvlab/vacuum_elliptic.hpp"
#include "pvlab/vacuum_reg.hpp"

using namespace pvlab;

namespace {
const double PI = 3.14159265358979323846;

SecondarySymmetrizers constant_nu(const Grid& g, const MetricPack& mp, double n1,
                                  double n2, double n3, double eps) {
    SecondarySymmetrizers sym{g, eps, Vec3Field{Field(g, n1), Field(g, n2), Field(g, n3)},
                              &mp};
    return sym;
}
} // namespace

TEST_CASE("secondary symmetrizer matrices") {
    Grid g = vacuum_grid(9, 4, 4);
    MetricPack mp = flat_metric(g);
    const double eps = 0.2;

    SUBCASE("nu = 0: identity zeroth matrix and pure off-diagonal normal matrix") {
        SecondarySymmetrizers sym = constant_nu(g, mp, 0, 0, 0, eps);
        CHECK((sym.B0_at(0) - Mat6::Identity()).norm() == 0.0);
        Mat6 B1 = Mat6::Zero();
        B1(1, 5) = B1(5, 1) = -1.0 / eps;
        B1(2, 4) = B1(4, 2) = 1.0 / eps;
        CHECK((sym.B_at(0, 1) - B1).norm() == 0.0);
    }

    SUBCASE("symmetry and spectrum") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int trial = 0; trial < 20; ++trial) {
            const double n1 = u(rng), n2 = u(rng), n3 = u(rng);
            SecondarySymmetrizers sym = constant_nu(g, mp, n1, n2, n3, eps);
            const Mat6 B0 = sym.B0_at(0);
            CHECK((B0 - B0.transpose()).norm() == 0.0);
            for (int j = 1; j <= 3; ++j) {
                const Mat6 B = sym.B_at(0, j);
                CHECK((B - B.transpose()).norm() < 1e-14);
            }
            // eigenvalues {1, 1, 1 +- eps|nu|, 1 +- eps|nu|}
            Eigen::SelfAdjointEigenSolver<Mat6> es(B0, Eigen::EigenvaluesOnly);
            const double a = eps * std::sqrt(n1 * n1 + n2 * n2 + n3 * n3);
            const double want[6] = {1 - a, 1 - a, 1, 1, 1 + a, 1 + a};
            for (int c = 0; c < 6; ++c)
                CHECK(std::fabs(es.eigenvalues()(c) - want[c]) < 1e-12);
        }
    }

    SUBCASE("congruence preserves symmetry on a curved metric") {
        TorusField phi(g.n2, g.n3);
        for (int j = 0; j < g.n2; ++j)
            for (int k = 0; k < g.n3; ++k)
                phi(j, k) = 0.02 * std::sin(2 * PI * phi.x2(j)) +
                            0.015 * std::cos(2 * PI * phi.x3(k));
        MetricPack mpc = build_metric(lift_front(phi, g));
        TorusField v2(g.n2, g.n3, 0.3), v3(g.n2, g.n3, -0.2);
        SecondarySymmetrizers sym = assemble_secondary(mpc, v2, v3, phi, eps);
        for (std::size_t m = 0; m < sym.nu[0].size(); m += 7)
            for (int j = 0; j < 4; ++j) {
                const Mat6 M = sym.M_at(m, j);
                CHECK((M - M.transpose()).norm() < 1e-12);
            }
        // cutoff: nu vanishes at the wall, matches the interface values at x1=0
        for (int j = 0; j < g.n2; ++j)
            for (int k = 0; k < g.n3; ++k) {
                CHECK(sym.nu[1](0, j, k) == 0.0);
                CHECK(sym.nu[1](g.g1.n - 1, j, k) == doctest::Approx(0.3).epsilon(1e-12));
            }
    }
}

TEST_CASE("hyperbolicity report matches the eigenvalue formula") {
    Grid g = vacuum_grid(9, 4, 4);
    MetricPack mp = flat_metric(g);
    {
        SecondarySymmetrizers sym = constant_nu(g, mp, 0.3, 0.4, 0.0, 1.0); // |nu| = 0.5
        HyperbolicityReport rep = check_hyperbolicity(sym);
        CHECK(rep.min_margin == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(rep.min_eig_B0 == doctest::Approx(0.5).epsilon(1e-12));
    }
    {
        SecondarySymmetrizers sym = constant_nu(g, mp, 0.6, 0.8, 0.0, 1.0); // |nu| = 1
        HyperbolicityReport rep = check_hyperbolicity(sym);
        CHECK(std::fabs(rep.min_eig_B0) < 1e-12);
    }
    {
        SecondarySymmetrizers sym = constant_nu(g, mp, 0.9, 1.2, 0.0, 1.0); // |nu| = 1.5
        HyperbolicityReport rep = check_hyperbolicity(sym);
        CHECK(rep.min_eig_B0 < -0.4);
        RegState s{Vec3Field{Field(g), Field(g), Field(g)},
                   Vec3Field{Field(g), Field(g), Field(g)}, 1.0};
        RegBc bc{TorusField(g.n2, g.n3), TorusField(g.n2, g.n3),
                 TorusField(g.n2, g.n3), TorusField(g.n2, g.n3)};
        CHECK_THROWS_AS(step_regularized(s, sym, mp, bc, 1e-4, 0.0), HyperbolicityLost);
    }
}

TEST_CASE("regularized step: trivial data, wall fluxes, CFL guard") {
    Grid g = vacuum_grid(17, 8, 8);
    MetricPack mp = flat_metric(g);
    SecondarySymmetrizers sym = constant_nu(g, mp, 0, 0, 0, 0.1);
    RegBc bc{TorusField(g.n2, g.n3), TorusField(g.n2, g.n3),
             TorusField(g.n2, g.n3), TorusField(g.n2, g.n3)};
    const double dt = 2e-3;

    SUBCASE("zero fields stay zero with zero fluxes") {
        RegState s{Vec3Field{Field(g), Field(g), Field(g)},
                   Vec3Field{Field(g), Field(g), Field(g)}, 0.1};
        FluxReport fr;
        RegState s2 = step_regularized(s, sym, mp, bc, dt, 0.0, &fr);
        for (int c = 0; c < 3; ++c) {
            CHECK(max_abs(s2.H[c]) == 0.0);
            CHECK(max_abs(s2.E[c]) == 0.0);
        }
        CHECK(fr.Jminus == 0.0);
    }

    SUBCASE("homogeneous wall conditions kill both boundary integrals") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        RegState s{Vec3Field{Field(g), Field(g), Field(g)},
                   Vec3Field{Field(g), Field(g), Field(g)}, 0.1};
        for (int c = 0; c < 3; ++c)
            for (std::size_t m = 0; m < s.H[c].size(); ++m) {
                s.H[c].v[m] = u(rng);
                s.E[c].v[m] = u(rng);
            }
        TorusField qw(g.n2, g.n3), v1w(g.n2, g.n3); // v1 = 0 at the plasma wall
        for (std::size_t m = 0; m < qw.v.size(); ++m) qw.v[m] = 2.0 + 0.1 * u(rng);
        FluxReport fr;
        step_regularized(s, sym, mp, bc, dt, 0.0, &fr, &qw, &v1w);
        CHECK(std::fabs(fr.Jminus) < 1e-12);
        CHECK(std::fabs(fr.Jplus) < 1e-12);
    }

    SUBCASE("CFL guard") {
        RegState s{Vec3Field{Field(g), Field(g), Field(g)},
                   Vec3Field{Field(g), Field(g), Field(g)}, 0.1};
        CHECK_THROWS_AS(step_regularized(s, sym, mp, bc, 0.1, 0.0), CflViolation);
    }
}

TEST_CASE("discrete energy nearly conserved without damping") {
    Grid g = vacuum_grid(17, 8, 8);
    MetricPack mp = flat_metric(g);
    const double eps = 0.1;
    SecondarySymmetrizers sym = constant_nu(g, mp, 0, 0, 0, eps);
    RegBc bc{TorusField(g.n2, g.n3), TorusField(g.n2, g.n3),
             TorusField(g.n2, g.n3), TorusField(g.n2, g.n3)};

    // smooth interior pulse away from both boundaries
    auto init = [&]() {
        RegState s{Vec3Field{Field(g), Field(g), Field(g)},
                   Vec3Field{Field(g), Field(g), Field(g)}, eps};
        for (int i = 0; i < g.g1.n; ++i)
            for (int j = 0; j < g.n2; ++j)
                for (int k = 0; k < g.n3; ++k) {
                    const double w = std::pow(std::sin(PI * (g.x1(i) + 1.0)), 4);
                    s.H[1](i, j, k) = w * std::sin(2 * PI * g.x2(j));
                    s.E[2](i, j, k) = w * std::cos(2 * PI * g.x3(k));
                }
        return s;
    };

    auto drift = [&](double dt, int steps) {
        RegState s = init();
        const double e0 = reg_energy(s, sym, mp);
        for (int n = 0; n < steps; ++n) s = step_regularized(s, sym, mp, bc, dt, 0.0);
        return std::fabs(reg_energy(s, sym, mp) - e0) / e0;
    };

    const double d1v = drift(2e-3, 100);
    const double d2v = drift(1e-3, 200);
    CHECK(d1v < 1e-2);
    CHECK(d2v < d1v);
}

TEST_CASE("eps sweep: steady state approaches the elliptic solution monotonically") {
    const int n1 = 17, n2 = 8, n3 = 8;
    Grid g = vacuum_grid(n1, n2, n3);
    MetricPack mp = flat_metric(g);

    // elliptic reference on identical data: zero interior data, wall datum
    // jay = (0, 1, -sqrt3)  =>  H = (0, sqrt3, 1) exactly
    TorusVec3 jay{TorusField(n2, n3, 0.0), TorusField(n2, n3, 1.0),
                  TorusField(n2, n3, -std::sqrt(3.0))};
    VacuumData data = zero_vacuum_data(g);
    data.g5 = jay;
    VacuumSolution ref = solve_divcurl(data, mp, SolveOpts{});
    Vec3Field Href = vacuum_physical_field(ref.H, mp);

    // interface drive: tangential gradient of sin(2 pi x2), scaled by eps
    TorusField G2(n2, n3), G3(n2, n3);
    for (int j = 0; j < n2; ++j)
        for (int k = 0; k < n3; ++k) G2(j, k) = 2 * PI * std::cos(2 * PI * G2.x2(j));

    std::vector<double> disc;
    for (double eps : {0.1, 0.05, 0.025}) {
        SecondarySymmetrizers sym = constant_nu(g, mp, 0, 0, 0, eps);
        RegBc bc{TorusField(n2, n3, std::sqrt(3.0)), TorusField(n2, n3, 1.0),
                 eps * G2, eps * G3};
        RegState s{Href, Vec3Field{Field(g), Field(g), Field(g)}, eps};
        const double dt = 1.4 * eps / (16.0 + PI * n2 + PI * n3);
        RegState steady = run_to_steady(s, sym, mp, bc, dt, 1.0 / eps);
        double d = 0.0;
        for (int c = 0; c < 3; ++c) d = std::max(d, max_abs(steady.H[c] - Href[c]));
        disc.push_back(d);
    }
    CHECK(disc[0] > disc[1]);
    CHECK(disc[1] > disc[2]);
    CHECK(disc[2] > 0.0);
}
