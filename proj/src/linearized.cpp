#include "pvlab/linearized.hpp"

#include <algorithm>
#include <cmath>

#include "pvlab/spectral.hpp"

namespace pvlab {
namespace {

State8 axpy(const State8& a, double c, const State8& b) {
    State8 r = a;
    for (int k = 0; k < 8; ++k) {
        Field t = b[k];
        t *= c;
        r[k] += t;
    }
    return r;
}

Vec3Field axpy3(const Vec3Field& a, double c, const Vec3Field& b) {
    Vec3Field r = a;
    for (int k = 0; k < 3; ++k) {
        Field t = b[k];
        t *= c;
        r[k] += t;
    }
    return r;
}

TorusField axpy2(const TorusField& a, double c, const TorusField& b) {
    TorusField r = a;
    TorusField t = b;
    t *= c;
    r += t;
    return r;
}

// v_N = v1 - v2 d2Psi - v3 d3Psi as a full field on the plasma grid
Field normal_velocity(const State8& U, const MetricPack& mp) {
    Field out = U[1];
    for (std::size_t m = 0; m < out.size(); ++m)
        out.v[m] += U[2].v[m] * mp.eta[0][1].v[m] + U[3].v[m] * mp.eta[0][2].v[m];
    return out;
}

} // namespace

BasicState make_basic_state(const Eos& eos, const State8& U, const State8& Ut,
                            const Vec3Field& Hcal, const TorusField& phi,
                            const TorusField& phit, const Grid& gp, const Grid& gv) {
    BasicState s{eos, gp, gv, U, Ut, Hcal, phi, phit,
                 MetricPack{}, MetricPack{}, Field(gp), Field(gv)};
    s.mp_p = build_metric(lift_front(phi, gp));
    s.mp_v = build_metric(lift_front(phi, gv));
    s.dtpsi_p = lift_front(phit, gp);
    s.dtpsi_v = lift_front(phit, gv);
    return s;
}

Perturbation zero_perturbation(const Grid& gp, const Grid& gv) {
    return Perturbation{make_state(gp), make_state(gp),
                        Vec3Field{Field(gv), Field(gv), Field(gv)},
                        TorusField(gp.n2, gp.n3), TorusField(gp.n2, gp.n3)};
}

GoodUnknown good_unknown(const Perturbation& d, const BasicState& s) {
    const Field psi_p = lift_front(d.dphi, s.gp);
    const Field psit_p = lift_front(d.dphit, s.gp);
    const Field psi_v = lift_front(d.dphi, s.gv);
    const Field dhat_t = d1(s.dtpsi_p); // time derivative of d1Phi1

    GoodUnknown gu{make_state(s.gp), make_state(s.gp),
                   Vec3Field{Field(s.gv), Field(s.gv), Field(s.gv)}};
    for (int c = 0; c < 8; ++c) {
        const Field d1U = d1(s.U[c]);
        const Field d1Ut = d1(s.Ut[c]);
        for (std::size_t m = 0; m < psi_p.size(); ++m) {
            const double dd = s.mp_p.d1phi1.v[m];
            gu.Udot[c].v[m] = d.dU[c].v[m] - psi_p.v[m] / dd * d1U.v[m];
            gu.Udot_t[c].v[m] = d.dUt[c].v[m] - psit_p.v[m] / dd * d1U.v[m] -
                                psi_p.v[m] * (d1Ut.v[m] / dd - d1U.v[m] * dhat_t.v[m] / (dd * dd));
        }
    }
    for (int c = 0; c < 3; ++c) {
        const Field d1H = d1(s.Hcal[c]);
        for (std::size_t m = 0; m < psi_v.size(); ++m)
            gu.Hdot[c].v[m] = d.dH[c].v[m] - psi_v.v[m] / s.mp_v.d1phi1.v[m] * d1H.v[m];
    }
    return gu;
}

void good_unknown_invert(const GoodUnknown& gu, const TorusField& dphi,
                         const BasicState& s, State8& dU_out, Vec3Field& dH_out) {
    const Field psi_p = lift_front(dphi, s.gp);
    const Field psi_v = lift_front(dphi, s.gv);
    dU_out = make_state(s.gp);
    dH_out = Vec3Field{Field(s.gv), Field(s.gv), Field(s.gv)};
    for (int c = 0; c < 8; ++c) {
        const Field d1U = d1(s.U[c]);
        for (std::size_t m = 0; m < psi_p.size(); ++m)
            dU_out[c].v[m] = gu.Udot[c].v[m] + psi_p.v[m] / s.mp_p.d1phi1.v[m] * d1U.v[m];
    }
    for (int c = 0; c < 3; ++c) {
        const Field d1H = d1(s.Hcal[c]);
        for (std::size_t m = 0; m < psi_v.size(); ++m)
            dH_out[c].v[m] = gu.Hdot[c].v[m] + psi_v.v[m] / s.mp_v.d1phi1.v[m] * d1H.v[m];
    }
}

State8 plasma_operator(const BasicState& s) {
    State8 out = plasma_spatial(s.U, s.eos, s.mp_p, s.dtpsi_p);
    for (std::size_t m = 0; m < out[0].size(); ++m) {
        const Vec8 u = state_at(s.U, m);
        const Vec8 r = plasma_A0(u, s.eos) * state_at(s.Ut, m);
        for (int c = 0; c < 8; ++c) out[c].v[m] += r[c];
    }
    return out;
}

std::array<Field, 4> vacuum_operator(const Vec3Field& Hcal, const MetricPack& mp) {
    const Grid& g = Hcal[0].grid;
    Vec3Field Hfrak{Field(g), Field(g), Field(g)}; // covariant components
    Vec3Field hfrak{Field(g), Field(g), Field(g)}; // contravariant components
    for (std::size_t m = 0; m < Hcal[0].size(); ++m) {
        const double d = mp.d1phi1.v[m];
        const double d2p = -mp.eta[0][1].v[m], d3p = -mp.eta[0][2].v[m];
        const double H1 = Hcal[0].v[m], H2 = Hcal[1].v[m], H3 = Hcal[2].v[m];
        Hfrak[0].v[m] = H1 * d;
        Hfrak[1].v[m] = H2 + H1 * d2p;
        Hfrak[2].v[m] = H3 + H1 * d3p;
        hfrak[0].v[m] = H1 - H2 * d2p - H3 * d3p;
        hfrak[1].v[m] = H2 * d;
        hfrak[2].v[m] = H3 * d;
    }
    std::array<Field, 4> out{Field(g), Field(g), Field(g), Field(g)};
    out[0] = d_tangential(Hfrak[2], 2) - d_tangential(Hfrak[1], 3);
    out[1] = d_tangential(Hfrak[0], 3) - d1(Hfrak[2]);
    out[2] = d1(Hfrak[1]) - d_tangential(Hfrak[0], 2);
    out[3] = d1(hfrak[0]) + d_tangential(hfrak[1], 2) + d_tangential(hfrak[2], 3);
    return out;
}

double BoundaryRows::max_abs_all() const {
    return std::max({max_abs(r1), max_abs(r2), max_abs(r3),
                     max_abs(r4), max_abs(r5a), max_abs(r5b)});
}

BoundaryRows boundary_nonlinear(const BasicState& s) {
    const int ip_front = 0, ip_wall = s.gp.g1.n - 1;
    const int iv_wall = 0, iv_front = s.gv.g1.n - 1;

    BoundaryRows b{s.phit, TorusField(s.gp.n2, s.gp.n3), TorusField(s.gp.n2, s.gp.n3),
                   TorusField(s.gp.n2, s.gp.n3), TorusField(s.gp.n2, s.gp.n3),
                   TorusField(s.gp.n2, s.gp.n3)};
    const TorusField vN = slice(normal_velocity(s.U, s.mp_p), ip_front);
    b.r1 -= vN;

    const TorusField q0 = slice(s.U[0], ip_front);
    const TorusField H1 = slice(s.Hcal[0], iv_front), H2 = slice(s.Hcal[1], iv_front),
                     H3 = slice(s.Hcal[2], iv_front);
    const TorusField d2p = slice(s.mp_v.eta[0][1], iv_front), d3p = slice(s.mp_v.eta[0][2], iv_front);
    for (std::size_t m = 0; m < b.r2.v.size(); ++m) {
        b.r2.v[m] = q0.v[m] - 0.5 * (H1.v[m] * H1.v[m] + H2.v[m] * H2.v[m] + H3.v[m] * H3.v[m]);
        b.r3.v[m] = H1.v[m] + H2.v[m] * d2p.v[m] + H3.v[m] * d3p.v[m];
    }
    b.r4 = slice(s.U[1], ip_wall);
    b.r5a = slice(s.Hcal[2], iv_wall);
    b.r5b = slice(s.Hcal[1], iv_wall);
    b.r5b *= -1.0;
    return b;
}

namespace {

// directional derivative of the coefficient matrices along y at a node,
// contracted with the basic-state derivative vectors
Vec8 zero_order_term(const Vec8& u, const Vec8& y, const Eos& eos, double dd,
                     double dtpsi, double d2p, double d3p, const Vec8& ut,
                     const Vec8& d1u, const Vec8& d2u, const Vec8& d3u) {
    const double ymax = y.cwiseAbs().maxCoeff();
    if (ymax == 0.0) return Vec8::Zero();
    const Vec8 yn = y / ymax;
    const double h = 1e-6 * std::max(1.0, u.cwiseAbs().maxCoeff());
    const Vec8 up = u + h * yn, um = u - h * yn;
    const double w = ymax / (2.0 * h);
    Vec8 r = (plasma_A0(up, eos) - plasma_A0(um, eos)) * ut;
    r += (plasma_Atilde1(up, eos, dd, dtpsi, d2p, d3p) -
          plasma_Atilde1(um, eos, dd, dtpsi, d2p, d3p)) * d1u;
    r += (plasma_Aj(up, eos, 2) - plasma_Aj(um, eos, 2)) * d2u;
    r += (plasma_Aj(up, eos, 3) - plasma_Aj(um, eos, 3)) * d3u;
    return w * r;
}

} // namespace

State8 apply_linearized_interior(const GoodUnknown& gu, const BasicState& s) {
    const Grid& g = s.gp;
    State8 D1, D2, D3, bD1, bD2, bD3;
    for (int c = 0; c < 8; ++c) {
        D1[c] = d1(gu.Udot[c]);
        D2[c] = d_tangential(gu.Udot[c], 2);
        D3[c] = d_tangential(gu.Udot[c], 3);
        bD1[c] = d1(s.U[c]);
        bD2[c] = d_tangential(s.U[c], 2);
        bD3[c] = d_tangential(s.U[c], 3);
    }
    State8 out = make_state(g);
    for (std::size_t m = 0; m < out[0].size(); ++m) {
        const Vec8 u = state_at(s.U, m);
        const Vec8 y = state_at(gu.Udot, m);
        const double dd = s.mp_p.d1phi1.v[m];
        const double d2p = -s.mp_p.eta[0][1].v[m], d3p = -s.mp_p.eta[0][2].v[m];
        Vec8 r = plasma_A0(u, s.eos) * state_at(gu.Udot_t, m);
        r += plasma_Atilde1(u, s.eos, dd, s.dtpsi_p.v[m], d2p, d3p) * state_at(D1, m);
        r += plasma_Aj(u, s.eos, 2) * state_at(D2, m);
        r += plasma_Aj(u, s.eos, 3) * state_at(D3, m);
        r += zero_order_term(u, y, s.eos, dd, s.dtpsi_p.v[m], d2p, d3p,
                             state_at(s.Ut, m), state_at(bD1, m), state_at(bD2, m),
                             state_at(bD3, m));
        for (int c = 0; c < 8; ++c) out[c].v[m] = r[c];
    }
    return out;
}

std::array<Field, 4> apply_linearized_vacuum(const GoodUnknown& gu, const BasicState& s) {
    return vacuum_operator(gu.Hdot, s.mp_v);
}

BoundaryRows apply_linearized_boundary(const GoodUnknown& gu, const TorusField& dphi,
                                       const TorusField& dphit, const BasicState& s) {
    const int ip_front = 0, ip_wall = s.gp.g1.n - 1;
    const int iv_wall = 0, iv_front = s.gv.g1.n - 1;
    const int n2 = s.gp.n2, n3 = s.gp.n3;

    BoundaryRows b{dphit, TorusField(n2, n3), TorusField(n2, n3),
                   TorusField(n2, n3), TorusField(n2, n3), TorusField(n2, n3)};

    // row 1: dt dphi + v2 d2 dphi + v3 d3 dphi - vdot_N - dphi d1(v_N)
    const TorusField v2 = slice(s.U[2], ip_front), v3 = slice(s.U[3], ip_front);
    const TorusField d2f = d_torus(dphi, 2), d3f = d_torus(dphi, 3);
    const TorusField d1vN = slice(d1(normal_velocity(s.U, s.mp_p)), ip_front);
    const TorusField vdotN = slice(normal_velocity(gu.Udot, s.mp_p), ip_front);
    for (std::size_t m = 0; m < b.r1.v.size(); ++m)
        b.r1.v[m] += v2.v[m] * d2f.v[m] + v3.v[m] * d3f.v[m] - vdotN.v[m] -
                     dphi.v[m] * d1vN.v[m];

    // row 2: qdot - Hcal . Hdot + [d1 q] dphi
    const TorusField qdot = slice(gu.Udot[0], ip_front);
    const TorusField d1q = slice(d1(s.U[0]), ip_front);
    TorusField Hb[3], Hd[3], dHb[3];
    for (int c = 0; c < 3; ++c) {
        Hb[c] = slice(s.Hcal[c], iv_front);
        Hd[c] = slice(gu.Hdot[c], iv_front);
        dHb[c] = slice(d1(s.Hcal[c]), iv_front);
    }
    for (std::size_t m = 0; m < b.r2.v.size(); ++m) {
        double HdotH = 0.0, HdH = 0.0;
        for (int c = 0; c < 3; ++c) {
            HdotH += Hb[c].v[m] * Hd[c].v[m];
            HdH += Hb[c].v[m] * dHb[c].v[m];
        }
        b.r2.v[m] = qdot.v[m] - HdotH + (d1q.v[m] - HdH) * dphi.v[m];
    }

    // row 3: Hdot_N - d2(Hcal2 dphi) - d3(Hcal3 dphi)
    const TorusField d2p = slice(s.mp_v.eta[0][1], iv_front), d3p = slice(s.mp_v.eta[0][2], iv_front);
    TorusField p2 = dphi, p3 = dphi;
    for (std::size_t m = 0; m < p2.v.size(); ++m) {
        p2.v[m] *= Hb[1].v[m];
        p3.v[m] *= Hb[2].v[m];
    }
    const TorusField d2p2 = d_torus(p2, 2), d3p3 = d_torus(p3, 3);
    for (std::size_t m = 0; m < b.r3.v.size(); ++m)
        b.r3.v[m] = Hd[0].v[m] + Hd[1].v[m] * d2p.v[m] + Hd[2].v[m] * d3p.v[m] -
                    d2p2.v[m] - d3p3.v[m];

    b.r4 = slice(gu.Udot[1], ip_wall);
    b.r5a = slice(gu.Hdot[2], iv_wall);
    b.r5b = slice(gu.Hdot[1], iv_wall);
    b.r5b *= -1.0;
    return b;
}

FrechetReport frechet_verify(const BasicState& s, const Perturbation& d,
                             const std::vector<double>& eps) {
    const GoodUnknown gu = good_unknown(d, s);

    // full linearizations = effective operators + dropped zeroth-order front terms
    const Field psi_p = lift_front(d.dphi, s.gp);
    const Field psi_v = lift_front(d.dphi, s.gv);
    State8 linP = apply_linearized_interior(gu, s);
    {
        const State8 base = plasma_operator(s);
        for (int c = 0; c < 8; ++c) {
            const Field dbase = d1(base[c]);
            for (std::size_t m = 0; m < linP[c].size(); ++m)
                linP[c].v[m] += psi_p.v[m] / s.mp_p.d1phi1.v[m] * dbase.v[m];
        }
    }
    std::array<Field, 4> linV = apply_linearized_vacuum(gu, s);
    {
        const std::array<Field, 4> base = vacuum_operator(s.Hcal, s.mp_v);
        for (int c = 0; c < 4; ++c) {
            const Field dbase = d1(base[c]);
            for (std::size_t m = 0; m < linV[c].size(); ++m)
                linV[c].v[m] += psi_v.v[m] / s.mp_v.d1phi1.v[m] * dbase.v[m];
        }
    }
    const BoundaryRows linB = apply_linearized_boundary(gu, d.dphi, d.dphit, s);

    FrechetReport rep;
    rep.eps = eps;
    for (double e : eps) {
        const BasicState sp = make_basic_state(
            s.eos, axpy(s.U, e, d.dU), axpy(s.Ut, e, d.dUt), axpy3(s.Hcal, e, d.dH),
            axpy2(s.phi, e, d.dphi), axpy2(s.phit, e, d.dphit), s.gp, s.gv);
        const BasicState sm = make_basic_state(
            s.eos, axpy(s.U, -e, d.dU), axpy(s.Ut, -e, d.dUt), axpy3(s.Hcal, -e, d.dH),
            axpy2(s.phi, -e, d.dphi), axpy2(s.phit, -e, d.dphit), s.gp, s.gv);

        double errP = 0.0;
        const State8 Pp = plasma_operator(sp), Pm = plasma_operator(sm);
        for (int c = 0; c < 8; ++c)
            for (std::size_t m = 0; m < Pp[c].size(); ++m)
                errP = std::max(errP, std::fabs((Pp[c].v[m] - Pm[c].v[m]) / (2 * e) -
                                                linP[c].v[m]));

        double errV = 0.0;
        const std::array<Field, 4> Vp = vacuum_operator(sp.Hcal, sp.mp_v);
        const std::array<Field, 4> Vm = vacuum_operator(sm.Hcal, sm.mp_v);
        for (int c = 0; c < 4; ++c)
            for (std::size_t m = 0; m < Vp[c].size(); ++m)
                errV = std::max(errV, std::fabs((Vp[c].v[m] - Vm[c].v[m]) / (2 * e) -
                                                linV[c].v[m]));

        double errB = 0.0;
        const BoundaryRows Bp = boundary_nonlinear(sp), Bm = boundary_nonlinear(sm);
        auto rowerr = [&](const TorusField& a, const TorusField& bm, const TorusField& lin) {
            for (std::size_t m = 0; m < a.v.size(); ++m)
                errB = std::max(errB, std::fabs((a.v[m] - bm.v[m]) / (2 * e) - lin.v[m]));
        };
        rowerr(Bp.r1, Bm.r1, linB.r1);
        rowerr(Bp.r2, Bm.r2, linB.r2);
        rowerr(Bp.r3, Bm.r3, linB.r3);
        rowerr(Bp.r4, Bm.r4, linB.r4);
        rowerr(Bp.r5a, Bm.r5a, linB.r5a);
        rowerr(Bp.r5b, Bm.r5b, linB.r5b);

        rep.err_plasma.push_back(errP);
        rep.err_vacuum.push_back(errV);
        rep.err_boundary.push_back(errB);
    }
    return rep;
}

} // namespace pvlab
