#include "pvlab/constraints.hpp"

#include <algorithm>
#include <cmath>

#include "pvlab/spectral.hpp"

namespace pvlab {

ConstraintReport constraint_residuals(const Vec3Field& H, const MetricPack& mp) {
    const Grid& g = H[0].grid;
    ConstraintReport rep;

    Vec3Field h = apply_eta(mp, H);
    Field dv = d1(h[0]) + d_tangential(h[1], 2) + d_tangential(h[2], 3);
    rep.div_h_max = max_abs(dv);

    const int last = g.g1.n - 1;
    for (int j = 0; j < g.n2; ++j)
        for (int k = 0; k < g.n3; ++k) {
            rep.HN_front_max = std::max(rep.HN_front_max, std::fabs(h[0](0, j, k)));
            rep.H1_wall_max = std::max(rep.H1_wall_max, std::fabs(H[0](last, j, k)));
        }
    return rep;
}

TransportResiduals zero_residuals(const Grid& g) {
    return {Field(g), TorusField(g.n2, g.n3), TorusField(g.n2, g.n3)};
}

TransportSources zero_sources(const Grid& g) {
    return {Field(g), TorusField(g.n2, g.n3), TorusField(g.n2, g.n3)};
}

namespace {

Field interior_rhs(const Field& a, const Vec3Field& u, const Field& dtpsi,
                   const MetricPack& mp, const Field& Fa) {
    Field d1a = d1(a), d2a = d_tangential(a, 2), d3a = d_tangential(a, 3);
    Field out = Fa;
    for (std::size_t m = 0; m < a.size(); ++m) {
        const double w1 = u[0].v[m] - dtpsi.v[m];
        out.v[m] -= (w1 * d1a.v[m] + u[1].v[m] * d2a.v[m] + u[2].v[m] * d3a.v[m]) / mp.d1phi1.v[m];
    }
    return out;
}

TorusField surface_rhs(const TorusField& r, const TorusField& v2, const TorusField& v3,
                       const TorusField& Q) {
    TorusField d2r = d_torus(r, 2), d3r = d_torus(r, 3);
    TorusField out = Q;
    for (std::size_t m = 0; m < r.v.size(); ++m)
        out.v[m] -= v2.v[m] * d2r.v[m] + v3.v[m] * d3r.v[m];
    return out;
}

} // namespace

TransportResiduals evolve_transport_residuals(const TransportResiduals& r0,
                                              const Vec3Field& v, const MetricPack& mp,
                                              const Field& dtpsi, const TransportSources& src,
                                              double dt) {
    const Grid& g = r0.a.grid;
    Vec3Field u = apply_eta(mp, v);
    const int last = g.g1.n - 1;
    TorusField v2f = slice(v[1], 0), v3f = slice(v[2], 0);
    TorusField v2w = slice(v[1], last), v3w = slice(v[2], last);

    auto rhs = [&](const TransportResiduals& r) {
        TransportResiduals k;
        k.a = interior_rhs(r.a, u, dtpsi, mp, src.Fa);
        k.R = surface_rhs(r.R, v2f, v3f, src.Q);
        k.Rp = surface_rhs(r.Rp, v2w, v3w, src.Qp);
        return k;
    };
    auto ax = [](const TransportResiduals& r, double c, const TransportResiduals& k) {
        TransportResiduals o = r;
        for (std::size_t m = 0; m < o.a.size(); ++m) o.a.v[m] += c * k.a.v[m];
        for (std::size_t m = 0; m < o.R.v.size(); ++m) {
            o.R.v[m] += c * k.R.v[m];
            o.Rp.v[m] += c * k.Rp.v[m];
        }
        return o;
    };

    TransportResiduals k1 = rhs(r0);
    TransportResiduals k2 = rhs(ax(r0, 0.5 * dt, k1));
    TransportResiduals k3 = rhs(ax(r0, 0.5 * dt, k2));
    TransportResiduals k4 = rhs(ax(r0, dt, k3));
    TransportResiduals out = r0;
    for (std::size_t m = 0; m < out.a.size(); ++m)
        out.a.v[m] += dt / 6.0 * (k1.a.v[m] + 2 * k2.a.v[m] + 2 * k3.a.v[m] + k4.a.v[m]);
    for (std::size_t m = 0; m < out.R.v.size(); ++m) {
        out.R.v[m] += dt / 6.0 * (k1.R.v[m] + 2 * k2.R.v[m] + 2 * k3.R.v[m] + k4.R.v[m]);
        out.Rp.v[m] += dt / 6.0 * (k1.Rp.v[m] + 2 * k2.Rp.v[m] + 2 * k3.Rp.v[m] + k4.Rp.v[m]);
    }
    return out;
}

} // namespace pvlab
