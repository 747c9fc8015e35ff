#include "pvlab/vacuum_reg.hpp"

#include <cmath>

#include "pvlab/errors.hpp"
#include "pvlab/spectral.hpp"

namespace pvlab {
namespace {

double expstep(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

// covariant components: (X1 d1Phi1, X2 + X1 d2Psi, X3 + X1 d3Psi)
Vec3Field covariant(const Vec3Field& X, const MetricPack& mp) {
    const Grid& g = X[0].grid;
    Vec3Field out{Field(g), Field(g), Field(g)};
    for (std::size_t m = 0; m < X[0].size(); ++m) {
        const double d2p = -mp.eta[0][1].v[m], d3p = -mp.eta[0][2].v[m];
        out[0].v[m] = X[0].v[m] * mp.d1phi1.v[m];
        out[1].v[m] = X[1].v[m] + X[0].v[m] * d2p;
        out[2].v[m] = X[2].v[m] + X[0].v[m] * d3p;
    }
    return out;
}

Vec3Field curl(const Vec3Field& X) {
    return Vec3Field{d_tangential(X[2], 2) - d_tangential(X[1], 3),
                     d_tangential(X[0], 3) - d1(X[2]),
                     d1(X[1]) - d_tangential(X[0], 2)};
}

void impose_bc(Vec3Field& H, Vec3Field& E, const MetricPack& mp, const RegBc& bc) {
    const Grid& g = H[0].grid;
    const int iw = 0, ii = g.g1.n - 1;
    set_slice(H[1], iw, bc.wallH2);
    set_slice(H[2], iw, bc.wallH3);
    // covariant tangential data at the interface: E_tau_k = E1 dkPsi + Ek
    const TorusField d2p = slice(mp.eta[0][1], ii), d3p = slice(mp.eta[0][2], ii);
    TorusField e2 = bc.Etau2, e3 = bc.Etau3;
    const TorusField e1 = slice(E[0], ii);
    for (std::size_t m = 0; m < e2.v.size(); ++m) {
        e2.v[m] += e1.v[m] * d2p.v[m]; // dkPsi = -eta[0][k]
        e3.v[m] += e1.v[m] * d3p.v[m];
    }
    set_slice(E[1], ii, e2);
    set_slice(E[2], ii, e3);
}

struct Rhs {
    Vec3Field dH, dE;
};

Rhs rhs(const Vec3Field& H, const Vec3Field& E, const MetricPack& mp, double eps,
        double kappa) {
    Vec3Field cH = curl(covariant(H, mp));
    Vec3Field cE = curl(covariant(E, mp));
    Vec3Field dH = apply_eta_inv(mp, cE);
    Vec3Field dE = apply_eta_inv(mp, cH);
    for (int c = 0; c < 3; ++c) {
        dH[c] *= -1.0 / eps;
        dE[c] *= 1.0 / eps;
        Field damp = E[c];
        damp *= kappa;
        dE[c] -= damp;
    }
    return Rhs{dH, dE};
}

} // namespace

double reg_cutoff(double x1) {
    const double a = expstep(1.0 + x1), b = expstep(-x1);
    return a / (a + b);
}

SecondarySymmetrizers assemble_secondary(const MetricPack& mp, const TorusField& v2,
                                         const TorusField& v3, const TorusField& phi,
                                         double eps) {
    const Grid& g = mp.grid;
    SecondarySymmetrizers sym{g, eps,
                              Vec3Field{Field(g), Field(g), Field(g)}, &mp};
    const TorusField d2f = d_torus(phi, 2), d3f = d_torus(phi, 3);
    for (int i = 0; i < g.g1.n; ++i) {
        const double chi = reg_cutoff(g.x1(i));
        for (int j = 0; j < g.n2; ++j)
            for (int k = 0; k < g.n3; ++k) {
                sym.nu[0](i, j, k) = chi * (v2(j, k) * d2f(j, k) + v3(j, k) * d3f(j, k));
                sym.nu[1](i, j, k) = chi * v2(j, k);
                sym.nu[2](i, j, k) = chi * v3(j, k);
            }
    }
    return sym;
}

Mat6 SecondarySymmetrizers::B0_at(std::size_t m) const {
    const double n1 = nu[0].v[m], n2 = nu[1].v[m], n3 = nu[2].v[m], e = eps;
    Mat6 B = Mat6::Identity();
    B(0, 4) = e * n3;  B(0, 5) = -e * n2;
    B(1, 3) = -e * n3; B(1, 5) = e * n1;
    B(2, 3) = e * n2;  B(2, 4) = -e * n1;
    B(3, 1) = -e * n3; B(3, 2) = e * n2;
    B(4, 0) = e * n3;  B(4, 2) = -e * n1;
    B(5, 0) = -e * n2; B(5, 1) = e * n1;
    return B;
}

Mat6 SecondarySymmetrizers::B_at(std::size_t m, int j) const {
    const double n1 = nu[0].v[m], n2 = nu[1].v[m], n3 = nu[2].v[m];
    const double ie = 1.0 / eps;
    Mat6 B = Mat6::Zero();
    if (j == 1) {
        B << n1, n2, n3, 0, 0, 0,
             n2, -n1, 0, 0, 0, -ie,
             n3, 0, -n1, 0, ie, 0,
             0, 0, 0, n1, n2, n3,
             0, 0, ie, n2, -n1, 0,
             0, -ie, 0, n3, 0, -n1;
    } else if (j == 2) {
        B << -n2, n1, 0, 0, 0, ie,
             n1, n2, n3, 0, 0, 0,
             0, n3, -n2, -ie, 0, 0,
             0, 0, -ie, -n2, n1, 0,
             0, 0, 0, n1, n2, n3,
             ie, 0, 0, 0, n3, -n2;
    } else {
        B << -n3, 0, n1, 0, -ie, 0,
             0, -n3, n2, ie, 0, 0,
             n1, n2, n3, 0, 0, 0,
             0, ie, 0, -n3, 0, n1,
             -ie, 0, 0, 0, -n3, n2,
             0, 0, 0, n1, n2, n3;
    }
    return B;
}

Mat6 SecondarySymmetrizers::Btilde1_at(std::size_t m) const {
    const double d2p = -mp->eta[0][1].v[m], d3p = -mp->eta[0][2].v[m];
    return (B_at(m, 1) - d2p * B_at(m, 2) - d3p * B_at(m, 3)) / mp->d1phi1.v[m];
}

Mat6 SecondarySymmetrizers::M_at(std::size_t m, int j) const {
    Mat6 K = Mat6::Zero();
    const auto eta = mp->eta_at(m);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            K(r, c) = eta[r][c];
            K(r + 3, c + 3) = eta[r][c];
        }
    const Mat6 B = (j == 0) ? B0_at(m) : (j == 1) ? Btilde1_at(m) : B_at(m, j);
    return K * B * K.transpose() / mp->d1phi1.v[m];
}

HyperbolicityReport check_hyperbolicity(const SecondarySymmetrizers& sym) {
    HyperbolicityReport rep{1e300, 1e300};
    Eigen::SelfAdjointEigenSolver<Mat6> es;
    for (std::size_t m = 0; m < sym.nu[0].size(); ++m) {
        const double nn = std::sqrt(sym.nu[0].v[m] * sym.nu[0].v[m] +
                                    sym.nu[1].v[m] * sym.nu[1].v[m] +
                                    sym.nu[2].v[m] * sym.nu[2].v[m]);
        rep.min_margin = std::min(rep.min_margin, 1.0 - sym.eps * nn);
        es.compute(sym.B0_at(m), Eigen::EigenvaluesOnly);
        rep.min_eig_B0 = std::min(rep.min_eig_B0, es.eigenvalues().minCoeff());
    }
    return rep;
}

RegState step_regularized(const RegState& s, const SecondarySymmetrizers& sym,
                          const MetricPack& mp, const RegBc& bc, double dt,
                          double kappa, FluxReport* flux,
                          const TorusField* q_plasma_wall,
                          const TorusField* v1_plasma_wall) {
    const HyperbolicityReport hyp = check_hyperbolicity(sym);
    if (hyp.min_margin <= 0.0)
        throw HyperbolicityLost("step_regularized: eps |nu| >= 1");
    const Grid& g = s.H[0].grid;
    const double h1 = (g.g1.b - g.g1.a) / (g.g1.n - 1);
    const double speed = 1.0 / s.eps;
    if (dt * speed * (1.0 / h1 + M_PI * g.n2 + M_PI * g.n3) > 2.8)
        throw CflViolation("step_regularized: dt too large for eps-scaled speed");

    auto stage = [&](const Vec3Field& H, const Vec3Field& E) {
        return rhs(H, E, mp, s.eps, kappa);
    };
    auto advance = [&](const Vec3Field& H0, const Vec3Field& E0, const Rhs& k,
                       double c) {
        Vec3Field H = H0, E = E0;
        for (int j = 0; j < 3; ++j) {
            Field t = k.dH[j];
            t *= c;
            H[j] += t;
            t = k.dE[j];
            t *= c;
            E[j] += t;
        }
        impose_bc(H, E, mp, bc);
        return std::pair<Vec3Field, Vec3Field>(H, E);
    };

    Vec3Field H0 = s.H, E0 = s.E;
    impose_bc(H0, E0, mp, bc);
    const Rhs k1 = stage(H0, E0);
    auto [H1, E1] = advance(H0, E0, k1, dt / 2);
    const Rhs k2 = stage(H1, E1);
    auto [H2, E2] = advance(H0, E0, k2, dt / 2);
    const Rhs k3 = stage(H2, E2);
    auto [H3, E3] = advance(H0, E0, k3, dt);
    const Rhs k4 = stage(H3, E3);

    RegState out{H0, E0, s.eps};
    for (int j = 0; j < 3; ++j)
        for (std::size_t m = 0; m < H0[0].size(); ++m) {
            out.H[j].v[m] += dt / 6.0 * (k1.dH[j].v[m] + 2 * k2.dH[j].v[m] +
                                         2 * k3.dH[j].v[m] + k4.dH[j].v[m]);
            out.E[j].v[m] += dt / 6.0 * (k1.dE[j].v[m] + 2 * k2.dE[j].v[m] +
                                         2 * k3.dE[j].v[m] + k4.dE[j].v[m]);
        }
    impose_bc(out.H, out.E, mp, bc);

    if (flux) {
        double jm = 0.0;
        const int iw = 0;
        const TorusField h2 = slice(out.H[1], iw), h3 = slice(out.H[2], iw);
        const TorusField e2 = slice(out.E[1], iw), e3 = slice(out.E[2], iw);
        for (std::size_t m = 0; m < h2.v.size(); ++m)
            jm += e3.v[m] * h2.v[m] - e2.v[m] * h3.v[m];
        flux->Jminus = jm / (s.eps * h2.v.size());
        flux->Jplus = 0.0;
        if (q_plasma_wall && v1_plasma_wall) {
            double jp = 0.0;
            for (std::size_t m = 0; m < q_plasma_wall->v.size(); ++m)
                jp += q_plasma_wall->v[m] * v1_plasma_wall->v[m];
            flux->Jplus = jp / q_plasma_wall->v.size();
        }
    }
    return out;
}

double reg_energy(const RegState& s, const SecondarySymmetrizers& sym,
                  const MetricPack& mp) {
    const Vec3Field cH = covariant(s.H, mp), cE = covariant(s.E, mp);
    // trapezoid in x1, uniform on the torus, weight (M0 W, W), W = (cov H, cov E)
    const Grid& g = s.H[0].grid;
    const double h1 = (g.g1.b - g.g1.a) / (g.g1.n - 1);
    double acc = 0.0;
    for (std::size_t m = 0; m < cH[0].size(); ++m) {
        Vec6 W;
        W << cH[0].v[m], cH[1].v[m], cH[2].v[m], cE[0].v[m], cE[1].v[m], cE[2].v[m];
        const int i = int(m / (std::size_t(g.n2) * g.n3));
        const double w1 = (i == 0 || i == g.g1.n - 1) ? 0.5 : 1.0;
        acc += w1 * W.dot(sym.M_at(m, 0) * W);
    }
    return acc * h1 / (double(g.n2) * g.n3);
}

RegState run_to_steady(const RegState& s0, const SecondarySymmetrizers& sym,
                       const MetricPack& mp, const RegBc& bc, double dt, double kappa,
                       double tol, int window, int max_steps) {
    RegState s = s0;
    RegState mark = s0;
    double scale = 1.0;
    for (int n = 1; n <= max_steps; ++n) {
        s = step_regularized(s, sym, mp, bc, dt, kappa);
        if (n % window == 0) {
            double diff = 0.0;
            scale = 1e-300;
            for (int c = 0; c < 3; ++c) {
                diff = std::max(diff, max_abs(s.H[c] - mark.H[c]));
                scale = std::max(scale, max_abs(s.H[c]));
            }
            if (diff / std::max(scale, 1.0) < tol) return s;
            mark = s;
        }
    }
    throw SolverDiverged("run_to_steady: no steady state within step budget");
}

} // namespace pvlab
