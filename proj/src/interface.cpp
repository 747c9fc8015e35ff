#include "pvlab/interface.hpp"

#include <cmath>

#include "pvlab/spectral.hpp"

namespace pvlab {

Vec3Field vacuum_physical_field(const Vec3Field& Hs, const MetricPack& mp) {
    Vec3Field out = make_vec3(Hs[0].grid);
    for (std::size_t m = 0; m < Hs[0].size(); ++m) {
        const double d = mp.d1phi1.v[m];
        const double s2 = -mp.eta[0][1].v[m], s3 = -mp.eta[0][2].v[m];
        const double H1 = Hs[0].v[m] / d;
        out[0].v[m] = H1;
        out[1].v[m] = Hs[1].v[m] - H1 * s2;
        out[2].v[m] = Hs[2].v[m] - H1 * s3;
    }
    return out;
}

double BoundaryResiduals::max_abs_all() const {
    return std::max({max_abs(kinematic), max_abs(pressure), max_abs(normal),
                     max_abs(wall_v1), max_abs(wall_t2), max_abs(wall_t3)});
}

BoundaryResiduals boundary_operator(const State8& U, const TorusField& phi,
                                    const TorusField& dtphi,
                                    const Vec3Field& Hvac_straight,
                                    const MetricPack& mp_plasma, const MetricPack& mp_vac,
                                    const TorusVec3& jay) {
    (void)phi;
    const Grid& gp = U[0].grid;
    const Grid& gv = Hvac_straight[0].grid;
    const int vac_top = gv.g1.n - 1; // x1 = 0 on the vacuum side
    const int wall = gp.g1.n - 1;    // x1 = 1 on the plasma side

    BoundaryResiduals r{TorusField(gp.n2, gp.n3), TorusField(gp.n2, gp.n3),
                        TorusField(gp.n2, gp.n3), TorusField(gp.n2, gp.n3),
                        TorusField(gp.n2, gp.n3), TorusField(gp.n2, gp.n3)};

    Vec3Field v = {U[1], U[2], U[3]};
    Vec3Field u = apply_eta(mp_plasma, v);
    Vec3Field Hphys = vacuum_physical_field(Hvac_straight, mp_vac);
    Vec3Field hvac = apply_A(mp_vac, Hvac_straight);

    for (int j = 0; j < gp.n2; ++j)
        for (int k = 0; k < gp.n3; ++k) {
            r.kinematic(j, k) = dtphi(j, k) - u[0](0, j, k);
            const double K1 = Hphys[0](vac_top, j, k), K2 = Hphys[1](vac_top, j, k),
                         K3 = Hphys[2](vac_top, j, k);
            r.pressure(j, k) = U[0](0, j, k) - 0.5 * (K1 * K1 + K2 * K2 + K3 * K3);
            r.normal(j, k) = hvac[0](vac_top, j, k);
            r.wall_v1(j, k) = U[1](wall, j, k);
            r.wall_t2(j, k) = Hphys[2](0, j, k) - jay[1](j, k);
            r.wall_t3(j, k) = -Hphys[1](0, j, k) - jay[2](j, k);
        }
    return r;
}

double stability_margin(const State8& U, const Vec3Field& Hvac_straight,
                        const MetricPack& mp_plasma, const MetricPack& mp_vac) {
    (void)mp_plasma;
    const Grid& gp = U[0].grid;
    const Grid& gv = Hvac_straight[0].grid;
    const int vac_top = gv.g1.n - 1;
    Vec3Field Hphys = vacuum_physical_field(Hvac_straight, mp_vac);
    double margin = 1e300;
    for (int j = 0; j < gp.n2; ++j)
        for (int k = 0; k < gp.n3; ++k) {
            const double H2 = U[5](0, j, k), H3 = U[6](0, j, k);
            const double K2 = Hphys[1](vac_top, j, k), K3 = Hphys[2](vac_top, j, k);
            margin = std::min(margin, std::fabs(H2 * K3 - H3 * K2));
        }
    return margin;
}

namespace {

struct StageEval {
    State8 dU;
    TorusField dphi;
    VacuumSolution vac;
    MetricPack mp_p, mp_v;
};

Field lift_unbounded(const TorusField& f, const Grid& g) {
    return lift_front(f, g, 1e300);
}

StageEval coupled_rhs(const State8& U, const TorusField& phi, const TorusVec3& jay,
                      const CoupledOpts& opts, const Grid& gp, const Grid& gv) {
    StageEval ev;
    ev.mp_p = build_metric(lift_front(phi, gp, opts.front_bound));
    ev.mp_v = build_metric(lift_front(phi, gv, opts.front_bound));

    VacuumData data = zero_vacuum_data(gv);
    data.g5 = jay;
    ev.vac = solve_divcurl(data, ev.mp_v, opts.vacuum);

    Vec3Field Hphys = vacuum_physical_field(ev.vac.H, ev.mp_v);
    const int vac_top = gv.g1.n - 1;
    PlasmaBc bc{TorusField(gp.n2, gp.n3)};
    for (int j = 0; j < gp.n2; ++j)
        for (int k = 0; k < gp.n3; ++k) {
            const double K1 = Hphys[0](vac_top, j, k), K2 = Hphys[1](vac_top, j, k),
                         K3 = Hphys[2](vac_top, j, k);
            bc.q_front(j, k) = 0.5 * (K1 * K1 + K2 * K2 + K3 * K3);
        }

    State8 Ub = U;
    // strong imposition before evaluating the interior operator
    const int wall = gp.g1.n - 1;
    for (int j = 0; j < gp.n2; ++j)
        for (int k = 0; k < gp.n3; ++k) {
            Ub[0](0, j, k) = bc.q_front(j, k);
            Ub[1](wall, j, k) = 0.0;
            Ub[4](wall, j, k) = 0.0;
        }

    Vec3Field v = {Ub[1], Ub[2], Ub[3]};
    Vec3Field u = apply_eta(ev.mp_p, v);
    ev.dphi = slice(u[0], 0);

    Field dtpsi = lift_unbounded(ev.dphi, gp);
    ev.dU = plasma_rhs(Ub, opts.eos, ev.mp_p, dtpsi);
    return ev;
}

} // namespace

CoupledState coupled_step(const CoupledState& s, const TorusVec3& jay, double dt,
                          const CoupledOpts& opts, CoupledDiagnostics* diag,
                          const Grid* vacuum_shape) {
    const Grid& gp = s.U[0].grid;
    Grid gv = vacuum_shape ? *vacuum_shape : vacuum_grid(gp.g1.n, gp.n2, gp.n3);

    const double speed = plasma_max_speed(s.U, opts.eos);
    const double pi = 3.14159265358979323846;
    if (std::fabs(dt) * speed * (1.0 / gp.g1.h() + pi * gp.n2 + pi * gp.n3) > 2.8)
        throw CflViolation("coupled_step: dt exceeds RK4 stability bound");

    auto ax = [](const State8& U, const TorusField& phi, double c, const StageEval& k) {
        std::pair<State8, TorusField> r{U, phi};
        for (int a = 0; a < 8; ++a)
            for (std::size_t m = 0; m < r.first[a].size(); ++m) r.first[a].v[m] += c * k.dU[a].v[m];
        for (std::size_t m = 0; m < r.second.v.size(); ++m) r.second.v[m] += c * k.dphi.v[m];
        return r;
    };

    StageEval k1 = coupled_rhs(s.U, s.phi, jay, opts, gp, gv);
    auto s2 = ax(s.U, s.phi, 0.5 * dt, k1);
    StageEval k2 = coupled_rhs(s2.first, s2.second, jay, opts, gp, gv);
    auto s3 = ax(s.U, s.phi, 0.5 * dt, k2);
    StageEval k3 = coupled_rhs(s3.first, s3.second, jay, opts, gp, gv);
    auto s4 = ax(s.U, s.phi, dt, k3);
    StageEval k4 = coupled_rhs(s4.first, s4.second, jay, opts, gp, gv);

    CoupledState out;
    out.t = s.t + dt;
    out.U = s.U;
    out.phi = s.phi;
    for (int a = 0; a < 8; ++a)
        for (std::size_t m = 0; m < out.U[a].size(); ++m)
            out.U[a].v[m] += dt / 6.0 * (k1.dU[a].v[m] + 2 * k2.dU[a].v[m] + 2 * k3.dU[a].v[m] + k4.dU[a].v[m]);
    for (std::size_t m = 0; m < out.phi.v.size(); ++m)
        out.phi.v[m] += dt / 6.0 * (k1.dphi.v[m] + 2 * k2.dphi.v[m] + 2 * k3.dphi.v[m] + k4.dphi.v[m]);

    if (max_abs(out.phi) > opts.front_bound)
        throw FrontTooLarge("coupled_step: front amplitude left admissible range");
    check_admissible(out.U, opts.eos);

    if (diag) *diag = coupled_diagnostics(out, jay, opts, &gv);
    else {
        // margin guard still applies even without full diagnostics
        StageEval ev = coupled_rhs(out.U, out.phi, jay, opts, gp, gv);
        const double margin = stability_margin(out.U, ev.vac.H, ev.mp_p, ev.mp_v);
        if (margin < opts.delta0)
            throw StabilityMarginLost("coupled_step: non-collinearity margin below delta0");
    }
    return out;
}

CoupledDiagnostics coupled_diagnostics(const CoupledState& s, const TorusVec3& jay,
                                       const CoupledOpts& opts, const Grid* vacuum_shape) {
    const Grid& gp = s.U[0].grid;
    Grid gv = vacuum_shape ? *vacuum_shape : vacuum_grid(gp.g1.n, gp.n2, gp.n3);
    StageEval ev = coupled_rhs(s.U, s.phi, jay, opts, gp, gv);

    CoupledDiagnostics d;
    d.elliptic = ev.vac.res;
    d.cg_iters = ev.vac.cg_iters;
    d.margin = stability_margin(s.U, ev.vac.H, ev.mp_p, ev.mp_v);
    if (d.margin < opts.delta0)
        throw StabilityMarginLost("coupled diagnostics: margin below delta0");
    Vec3Field H = {s.U[4], s.U[5], s.U[6]};
    d.constraints = constraint_residuals(H, ev.mp_p);
    d.front_l2 = torus_hs_norm(s.phi, 0.0);
    d.front_h1 = torus_hs_norm(s.phi, 1.0);

    // symmetrizer energy (U, A0 U) with trapezoid x uniform quadrature
    const double wt = 1.0 / (double(gp.n2) * gp.n3);
    const double h1 = gp.g1.h();
    for (int i = 0; i < gp.g1.n; ++i) {
        const double w1 = (i == 0 || i == gp.g1.n - 1) ? 0.5 * h1 : h1;
        for (int j = 0; j < gp.n2; ++j)
            for (int k = 0; k < gp.n3; ++k) {
                const std::size_t m = gp.idx(i, j, k);
                Vec8 u = state_at(s.U, m);
                d.energy += w1 * wt * u.dot(plasma_A0(u, opts.eos) * u);
            }
    }
    return d;
}

EquilibriumSetup make_equilibrium(int n1, int n2, int n3) {
    EquilibriumSetup eq;
    Grid gp = plasma_grid(n1, n2, n3);
    eq.state.U = make_state(gp);
    for (std::size_t m = 0; m < eq.state.U[0].size(); ++m) {
        eq.state.U[0].v[m] = 2.0;   // q: p = 2 - 1/2 = 3/2 > 0
        eq.state.U[5].v[m] = 1.0;   // H = (0,1,0)
    }
    eq.state.phi = TorusField(n2, n3);
    eq.jay = {TorusField(n2, n3), TorusField(n2, n3), TorusField(n2, n3)};
    const double s3 = std::sqrt(3.0);
    for (std::size_t m = 0; m < eq.jay[1].v.size(); ++m) {
        eq.jay[1].v[m] = 1.0;   // nu x Hvac for Hvac = (0, sqrt3, 1)
        eq.jay[2].v[m] = -s3;
    }
    return eq;
}

} // namespace pvlab
