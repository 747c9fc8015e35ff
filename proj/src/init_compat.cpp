#include "pvlab/init_compat.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pvlab/errors.hpp"
#include "pvlab/interface.hpp"

namespace pvlab {

namespace {

void add_scaled(State8& y, double a, const State8& x) {
    for (int c = 0; c < 8; ++c)
        for (std::size_t m = 0; m < y[c].size(); ++m) y[c].v[m] += a * x[c].v[m];
}
void add_scaled(Vec3Field& y, double a, const Vec3Field& x) {
    for (int c = 0; c < 3; ++c)
        for (std::size_t m = 0; m < y[c].size(); ++m) y[c].v[m] += a * x[c].v[m];
}
void add_scaled(TorusField& y, double a, const TorusField& x) {
    for (std::size_t m = 0; m < y.v.size(); ++m) y.v[m] += a * x.v[m];
}
void scale(State8& y, double a) {
    for (int c = 0; c < 8; ++c)
        for (std::size_t m = 0; m < y[c].size(); ++m) y[c].v[m] *= a;
}
void scale(Vec3Field& y, double a) {
    for (int c = 0; c < 3; ++c)
        for (std::size_t m = 0; m < y[c].size(); ++m) y[c].v[m] *= a;
}
void scale(TorusField& y, double a) {
    for (std::size_t m = 0; m < y.v.size(); ++m) y.v[m] *= a;
}

// Fourth-order central difference stencils for d^order/dt^order at t = 0,
// as (offset, weight) pairs; weights are divided by h^order afterwards.
const std::vector<std::pair<double, double>>& stencil(int order) {
    static const std::vector<std::pair<double, double>> tab[4] = {
        {{0.0, 1.0}},
        {{-2.0, 1.0 / 12}, {-1.0, -8.0 / 12}, {1.0, 8.0 / 12}, {2.0, -1.0 / 12}},
        {{-2.0, -1.0 / 12}, {-1.0, 16.0 / 12}, {0.0, -30.0 / 12}, {1.0, 16.0 / 12},
         {2.0, -1.0 / 12}},
        {{-3.0, 1.0 / 8}, {-2.0, -1.0}, {-1.0, 13.0 / 8}, {1.0, -13.0 / 8},
         {2.0, 1.0}, {3.0, -1.0 / 8}},
    };
    if (order < 0 || order > 3)
        throw std::invalid_argument("fd_deriv: order must be in 0..3");
    return tab[order];
}

template <typename F>
F fd_deriv(const std::function<F(double)>& g, int order, double h) {
    const auto& st = stencil(order);
    F out = g(st[0].first * h);
    scale(out, st[0].second);
    for (std::size_t s = 1; s < st.size(); ++s)
        add_scaled(out, st[s].second, g(st[s].first * h));
    scale(out, 1.0 / std::pow(h, order));
    return out;
}

// Kinematic front velocity trace: first contravariant velocity component at
// the interface x1 = 0 of the plasma slab.
TorusField kinematic_trace(const State8& U, const TorusField& phi) {
    const Grid& gp = U[0].grid;
    MetricPack mp = build_metric(lift_front(phi, gp, 1e300));
    Vec3Field v{U[1], U[2], U[3]};
    Vec3Field u = apply_eta(mp, v);
    return slice(u[0], 0);
}

Vec3Field vacuum_solve_at(const InitialDataBundle& b, const TorusField& phi,
                          VacuumResiduals* res = nullptr) {
    MetricPack mpv = build_metric(lift_front(phi, b.gv, 1e300));
    VacuumData data = zero_vacuum_data(b.gv);
    data.g5 = b.jay;
    VacuumSolution sol = solve_divcurl(data, mpv, SolveOpts{});
    if (res) *res = sol.res;
    return vacuum_physical_field(sol.H, mpv);
}

const double FD_H = 1e-2; // time step of the jet-differencing stencils

} // namespace

InitialDataBundle make_bundle(const Eos& eos, const State8& U0, const TorusField& phi0,
                              const TorusVec3& jay, const Grid& gv) {
    InitialDataBundle b{eos, gv, jay, {U0}, {phi0}, {}};
    return b;
}

State8 jet_poly(const std::vector<State8>& jets, double t, int dorder) {
    State8 out = jets[0];
    scale(out, dorder == 0 ? 1.0 : 0.0);
    for (std::size_t j = 1; j < jets.size(); ++j) {
        if (static_cast<int>(j) < dorder) continue;
        const int p = static_cast<int>(j) - dorder;
        double pf = 1.0;
        for (int i = 2; i <= p; ++i) pf *= i;
        add_scaled(out, std::pow(t, p) / pf, jets[j]);
    }
    return out;
}

TorusField jet_poly(const std::vector<TorusField>& jets, double t, int dorder) {
    TorusField out = jets[0];
    scale(out, dorder == 0 ? 1.0 : 0.0);
    for (std::size_t j = 1; j < jets.size(); ++j) {
        if (static_cast<int>(j) < dorder) continue;
        const int p = static_cast<int>(j) - dorder;
        double pf = 1.0;
        for (int i = 2; i <= p; ++i) pf *= i;
        add_scaled(out, std::pow(t, p) / pf, jets[j]);
    }
    return out;
}

void derivative_cascade(InitialDataBundle& b, int J) {
    if (J < 0 || J > 3) throw std::invalid_argument("derivative_cascade: J must be in 0..3");
    const Grid gp = b.U[0][0].grid; // by value: the jet vectors reallocate below
    b.U.resize(1);
    b.phi.resize(1);
    b.Hvac.clear();

    for (int j = 0; j < J; ++j) {
        std::function<TorusField(double)> kin = [&](double t) {
            return kinematic_trace(jet_poly(b.U, t), jet_poly(b.phi, t));
        };
        b.phi.push_back(fd_deriv<TorusField>(kin, j, FD_H));

        std::function<State8(double)> rhs = [&](double t) {
            TorusField ph = jet_poly(b.phi, t);
            TorusField phd = jet_poly(b.phi, t, 1);
            MetricPack mp = build_metric(lift_front(ph, gp, 1e300));
            Field dtpsi = lift_front(phd, gp, 1e300);
            return plasma_rhs(jet_poly(b.U, t), b.eos, mp, dtpsi);
        };
        b.U.push_back(fd_deriv<State8>(rhs, j, FD_H));
    }

    for (int j = 0; j <= J; ++j) {
        std::function<Vec3Field(double)> vac = [&](double t) {
            return vacuum_solve_at(b, jet_poly(b.phi, t));
        };
        b.Hvac.push_back(fd_deriv<Vec3Field>(vac, j, FD_H));
    }
}

CompatOrderReport check_compat_order(const InitialDataBundle& b, int k) {
    if (k < 1 || b.U.size() < static_cast<std::size_t>(k) ||
        b.Hvac.size() < static_cast<std::size_t>(k))
        throw std::invalid_argument("check_compat_order: cascade not filled to depth k-1");
    const Grid& gp = b.U[0][0].grid;
    const int wall = gp.g1.n - 1;
    const int top = b.gv.g1.n - 1;

    CompatOrderReport rep;
    for (int j = 0; j < k; ++j) {
        // d_t^j of q = (1/2)|Hvac|^2 on the interface, by the Leibniz rule
        double worst = 0.0;
        for (int jj = 0; jj < gp.n2; ++jj)
            for (int kk = 0; kk < gp.n3; ++kk) {
                double rhs = 0.0;
                double binom = 1.0;
                for (int i = 0; i <= j; ++i) {
                    double dot = 0.0;
                    for (int c = 0; c < 3; ++c)
                        dot += b.Hvac[i][c](top, jj, kk) * b.Hvac[j - i][c](top, jj, kk);
                    rhs += 0.5 * binom * dot;
                    binom *= static_cast<double>(j - i) / (i + 1);
                }
                worst = std::max(worst, std::fabs(b.U[j][0](0, jj, kk) - rhs));
            }
        rep.pressure.push_back(worst);
    }
    for (int j = 0; j <= k - 2; ++j)
        rep.wall_v1.push_back(max_abs(slice(b.U[j][1], wall)));
    rep.weighted_trace = max_abs(slice(b.U[k - 1][1], wall));
    return rep;
}

ApproxSolution build_approximate_solution(const InitialDataBundle& b, double T0) {
    if (b.Hvac.empty()) throw std::invalid_argument("build_approximate_solution: run the cascade first");
    ApproxSolution a{b, T0, {}};

    // Time jets of the interface pressure-trace mismatch; the lifting later
    // only injects the part of the mismatch beyond these known jets, so the
    // correction does not disturb the prescribed time derivatives at t = 0.
    const int top = b.gv.g1.n - 1;
    const int njets = static_cast<int>(b.U.size());
    std::function<TorusField(double)> mu = [&](double t) {
        Vec3Field H = vacuum_solve_at(b, jet_poly(b.phi, t));
        State8 U = jet_poly(b.U, t);
        TorusField out(b.gv.n2, b.gv.n3);
        for (int j = 0; j < b.gv.n2; ++j)
            for (int k = 0; k < b.gv.n3; ++k) {
                double e = 0.0;
                for (int c = 0; c < 3; ++c) e += H[c](top, j, k) * H[c](top, j, k);
                out(j, k) = 0.5 * e - U[0](0, j, k);
            }
        return out;
    };
    for (int j = 0; j < njets; ++j)
        a.mu_jets.push_back(fd_deriv<TorusField>(mu, j, FD_H));
    return a;
}

double approx_cutoff(const ApproxSolution& a, double t) {
    if (t <= 0.5 * a.T0) return 1.0;
    if (t >= a.T0) return 0.0;
    const double s = (t - 0.5 * a.T0) / (0.5 * a.T0);
    return 1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

TorusField approx_front(const ApproxSolution& a, double t) {
    TorusField out = a.bundle.phi[0];
    TorusField tail = jet_poly(a.bundle.phi, t);
    add_scaled(tail, -1.0, a.bundle.phi[0]);
    add_scaled(out, approx_cutoff(a, t), tail);
    return out;
}

Vec3Field approx_vacuum(const ApproxSolution& a, double t, VacuumResiduals* res) {
    return vacuum_solve_at(a.bundle, approx_front(a, t), res);
}

State8 approx_plasma(const ApproxSolution& a, double t) {
    const InitialDataBundle& b = a.bundle;
    const Grid& gp = b.U[0][0].grid;
    const double chi = approx_cutoff(a, t);

    State8 out = b.U[0];
    State8 tail = jet_poly(b.U, t);
    add_scaled(tail, -1.0, b.U[0]);
    add_scaled(out, chi, tail);

    // interface pressure condition: lift the jet-corrected trace mismatch
    Vec3Field H = approx_vacuum(a, t);
    const int top = b.gv.g1.n - 1;
    TorusField corr(b.gv.n2, b.gv.n3);
    TorusField mu_poly = jet_poly(a.mu_jets, t);
    for (int j = 0; j < b.gv.n2; ++j)
        for (int k = 0; k < b.gv.n3; ++k) {
            double e = 0.0;
            for (int c = 0; c < 3; ++c) e += H[c](top, j, k) * H[c](top, j, k);
            corr(j, k) = 0.5 * e - out[0](0, j, k) - mu_poly(j, k);
        }
    Field lifted = lift_front(corr, gp, 1e300);
    for (std::size_t m = 0; m < out[0].size(); ++m) out[0].v[m] += chi * lifted.v[m];
    return out;
}

State8 approx_residual(const ApproxSolution& a, double t) {
    const InitialDataBundle& b = a.bundle;
    const Grid& gp = b.U[0][0].grid;
    if (t < 0.0) return make_state(gp);

    const double dlt = 1e-5;
    State8 dU = approx_plasma(a, t + dlt);
    add_scaled(dU, -1.0, approx_plasma(a, t - dlt));
    scale(dU, 1.0 / (2.0 * dlt));

    State8 U = approx_plasma(a, t);
    TorusField ph = approx_front(a, t);
    TorusField phd(gp.n2, gp.n3);
    {
        TorusField p1 = approx_front(a, t + dlt), p0 = approx_front(a, t - dlt);
        for (std::size_t m = 0; m < phd.v.size(); ++m)
            phd.v[m] = (p1.v[m] - p0.v[m]) / (2.0 * dlt);
    }
    MetricPack mp = build_metric(lift_front(ph, gp, 1e300));
    Field dtpsi = lift_front(phd, gp, 1e300);

    State8 res = plasma_spatial(U, b.eos, mp, dtpsi);
    for (std::size_t m = 0; m < res[0].size(); ++m) {
        Vec8 ud;
        for (int c = 0; c < 8; ++c) ud(c) = dU[c].v[m];
        const Vec8 w = plasma_A0(state_at(U, m), b.eos) * ud;
        for (int c = 0; c < 8; ++c) res[c].v[m] = -(res[c].v[m] + w(c));
    }
    return res;
}

double approx_residual_norm(const ApproxSolution& a, double t) {
    if (t < 0.0) return 0.0;
    State8 f = approx_residual(a, t);
    const Grid& gp = f[0].grid;
    const double h1 = gp.g1.h(), ht = 1.0 / (gp.n2 * gp.n3);
    double acc = 0.0;
    for (int c = 0; c < 8; ++c)
        for (int i = 0; i < gp.g1.n; ++i) {
            const double w1 = (i == 0 || i == gp.g1.n - 1) ? 0.5 * h1 : h1;
            for (int j = 0; j < gp.n2; ++j)
                for (int k = 0; k < gp.n3; ++k) {
                    const double v = f[c](i, j, k);
                    acc += w1 * ht * v * v;
                }
        }
    return std::sqrt(acc);
}

} // namespace pvlab
