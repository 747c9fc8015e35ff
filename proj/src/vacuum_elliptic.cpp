#include "pvlab/vacuum_elliptic.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numeric>
#include <vector>

#include "pvlab/spectral.hpp"

namespace pvlab {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

Grid mid_grid(const Grid& g) {
    const double h = g.g1.h();
    return Grid(Grid1D(g.g1.n - 1, g.g1.a + 0.5 * h, g.g1.b - 0.5 * h), g.n2, g.n3);
}

std::vector<TorusSpectrum> field_spectra(const Field& f) {
    std::vector<TorusSpectrum> s;
    s.reserve(f.grid.g1.n);
    for (int i = 0; i < f.grid.g1.n; ++i) s.push_back(torus_fft(slice(f, i)));
    return s;
}

Field field_from_spectra(const Grid& g, const std::vector<TorusSpectrum>& s) {
    Field f(g);
    for (int i = 0; i < g.g1.n; ++i) set_slice(f, i, torus_ifft(s[i]));
    return f;
}

// ---- stage 1: per-mode two-point BVP for the curl-carrying part ----------

Vec3Field stage1_solve(const VacuumData& data, const Grid& g) {
    const int n1 = g.g1.n, n2 = g.n2, n3h = g.n3 / 2 + 1;
    const double h = g.g1.h();

    std::vector<TorusSpectrum> chi1 = field_spectra(data.chi[0]);
    std::vector<TorusSpectrum> chi2 = field_spectra(data.chi[1]);
    std::vector<TorusSpectrum> chi3 = field_spectra(data.chi[2]);
    TorusSpectrum g52 = torus_fft(data.g5[1]);
    TorusSpectrum g53 = torus_fft(data.g5[2]);
    (void)chi1;

    std::vector<TorusSpectrum> z1(n1, TorusSpectrum(n2, g.n3));
    std::vector<TorusSpectrum> z2 = z1, z3 = z1;

    const int N = 3 * n1;
    Eigen::MatrixXcd M(N, N);
    Eigen::VectorXcd rhs(N);
    auto I1 = [&](int i) { return i; };
    auto I2 = [&](int i) { return n1 + i; };
    auto I3 = [&](int i) { return 2 * n1 + i; };

    for (int j = 0; j < n2; ++j) {
        const int k2 = wavenumber(j, n2);
        for (int k = 0; k < n3h; ++k) {
            const Cplx D2(0.0, kTwoPi * k2), D3(0.0, kTwoPi * k);
            M.setZero();
            rhs.setZero();
            int r = 0;
            for (int i = 0; i < n1 - 1; ++i) {
                // div zeta = 0
                M(r, I1(i + 1)) += 1.0 / h;
                M(r, I1(i)) -= 1.0 / h;
                M(r, I2(i)) += 0.5 * D2;
                M(r, I2(i + 1)) += 0.5 * D2;
                M(r, I3(i)) += 0.5 * D3;
                M(r, I3(i + 1)) += 0.5 * D3;
                rhs(r) = 0.0;
                ++r;
                // (curl zeta)_3 = d1 z2 - D2 z1 = chi3
                M(r, I2(i + 1)) += 1.0 / h;
                M(r, I2(i)) -= 1.0 / h;
                M(r, I1(i)) -= 0.5 * D2;
                M(r, I1(i + 1)) -= 0.5 * D2;
                rhs(r) = 0.5 * (chi3[i](j, k) + chi3[i + 1](j, k));
                ++r;
                // (curl zeta)_2 = D3 z1 - d1 z3 = chi2  =>  d1 z3 - D3 z1 = -chi2
                M(r, I3(i + 1)) += 1.0 / h;
                M(r, I3(i)) -= 1.0 / h;
                M(r, I1(i)) -= 0.5 * D3;
                M(r, I1(i + 1)) -= 0.5 * D3;
                rhs(r) = -0.5 * (chi2[i](j, k) + chi2[i + 1](j, k));
                ++r;
            }
            // zeta_1 = 0 at the interface (top node), tangential data at wall
            M(r, I1(n1 - 1)) = 1.0;
            rhs(r) = 0.0;
            ++r;
            M(r, I2(0)) = 1.0;
            rhs(r) = -g53(j, k);
            ++r;
            M(r, I3(0)) = 1.0;
            rhs(r) = g52(j, k);
            ++r;

            Eigen::VectorXcd sol = M.partialPivLu().solve(rhs);
            for (int i = 0; i < n1; ++i) {
                z1[i](j, k) = sol(I1(i));
                z2[i](j, k) = sol(I2(i));
                z3[i](j, k) = sol(I3(i));
            }
        }
    }
    return {field_from_spectra(g, z1), field_from_spectra(g, z2), field_from_spectra(g, z3)};
}

// ---- stage 2: Galerkin potential solve -----------------------------------

// P1-in-x1 x Fourier Galerkin pieces.  The gradient maps node scalars to
// element-midpoint vectors; with midpoint quadrature the stiffness operator
// is SPD by construction.
struct Galerkin {
    Grid g;       // node grid
    Grid gm;      // midpoint grid
    double h, w;  // x1 spacing, quadrature weight h/(n2*n3)
    // symmetric coefficient at midpoints (identity if empty)
    std::array<std::array<Field, 3>, 3> Am;
    bool identity_A = true;
    int dirichlet_node = 0; // x1 = -1 plane index

    explicit Galerkin(const Grid& grid) : g(grid), gm(mid_grid(grid)) {
        h = g.g1.h();
        w = h / (double(g.n2) * g.n3);
    }

    void set_A(const MetricPack& mp) {
        identity_A = false;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                Am[r][c] = Field(gm);
                for (int i = 0; i + 1 < g.g1.n; ++i)
                    for (int j = 0; j < g.n2; ++j)
                        for (int k = 0; k < g.n3; ++k)
                            Am[r][c](i, j, k) = 0.5 * (mp.A[r][c](i, j, k) + mp.A[r][c](i + 1, j, k));
            }
    }

    Vec3Field grad(const Field& x) const {
        Vec3Field out = make_vec3(gm);
        Field t2 = d_tangential(x, 2), t3 = d_tangential(x, 3);
        for (int i = 0; i + 1 < g.g1.n; ++i)
            for (int j = 0; j < g.n2; ++j)
                for (int k = 0; k < g.n3; ++k) {
                    out[0](i, j, k) = (x(i + 1, j, k) - x(i, j, k)) / h;
                    out[1](i, j, k) = 0.5 * (t2(i, j, k) + t2(i + 1, j, k));
                    out[2](i, j, k) = 0.5 * (t3(i, j, k) + t3(i + 1, j, k));
                }
        return out;
    }

    // adjoint of grad with quadrature weight w folded in
    Field grad_adjoint(const Vec3Field& f) const {
        Field y(g);
        Field t2(g), t3(g);
        for (int i = 0; i < g.g1.n; ++i)
            for (int j = 0; j < g.n2; ++j)
                for (int k = 0; k < g.n3; ++k) {
                    double y1 = 0.0, a2 = 0.0, a3 = 0.0;
                    if (i > 0) {
                        y1 += f[0](i - 1, j, k) / h;
                        a2 += 0.5 * f[1](i - 1, j, k);
                        a3 += 0.5 * f[2](i - 1, j, k);
                    }
                    if (i + 1 < g.g1.n) {
                        y1 -= f[0](i, j, k) / h;
                        a2 += 0.5 * f[1](i, j, k);
                        a3 += 0.5 * f[2](i, j, k);
                    }
                    y(i, j, k) = w * y1;
                    t2(i, j, k) = w * a2;
                    t3(i, j, k) = w * a3;
                }
        y -= d_tangential(t2, 2);
        y -= d_tangential(t3, 3);
        return y;
    }

    Vec3Field apply_Am(const Vec3Field& v) const {
        if (identity_A) return v;
        Vec3Field out = make_vec3(gm);
        for (std::size_t m = 0; m < v[0].size(); ++m)
            for (int r = 0; r < 3; ++r) {
                double s = 0.0;
                for (int c = 0; c < 3; ++c) s += Am[r][c].v[m] * v[c].v[m];
                out[r].v[m] = s;
            }
        return out;
    }

    void project(Field& x) const {
        for (int j = 0; j < g.n2; ++j)
            for (int k = 0; k < g.n3; ++k) x(dirichlet_node, j, k) = 0.0;
    }

    Field apply_K(const Field& x) const {
        Field xi = x;
        project(xi);
        Field y = grad_adjoint(apply_Am(grad(xi)));
        project(y);
        return y;
    }

    // per-mode tridiagonal preconditioner with A = I
    Field precondition(const Field& r) const {
        const int n1 = g.g1.n;
        std::vector<TorusSpectrum> rs = field_spectra(r);
        std::vector<TorusSpectrum> xs(n1, TorusSpectrum(g.n2, g.n3));
        std::vector<Cplx> d(n1), rhsv(n1);
        std::vector<Cplx> low(n1), up(n1);
        for (int j = 0; j < g.n2; ++j) {
            const int k2 = wavenumber(j, g.n2);
            for (int k = 0; k <= g.n3 / 2; ++k) {
                const double kap2 = kTwoPi * kTwoPi * (double(k2) * k2 + double(k) * k);
                const double diag_el = w / (h * h) + kap2 * w * 0.25;
                const double off_el = -w / (h * h) + kap2 * w * 0.25;
                for (int i = 0; i < n1; ++i) {
                    double dd = 0.0;
                    if (i > 0) dd += diag_el;
                    if (i + 1 < n1) dd += diag_el;
                    d[i] = dd;
                    low[i] = off_el;
                    up[i] = off_el;
                    rhsv[i] = rs[i](j, k);
                }
                // Dirichlet at node 0
                d[0] = 1.0;
                up[0] = 0.0;
                rhsv[0] = 0.0;
                low[1] = 0.0; // decouple from the fixed node
                // Thomas
                for (int i = 1; i < n1; ++i) {
                    const Cplx mfac = low[i] / d[i - 1];
                    d[i] -= mfac * up[i - 1];
                    rhsv[i] -= mfac * rhsv[i - 1];
                }
                std::vector<Cplx> x(n1);
                x[n1 - 1] = rhsv[n1 - 1] / d[n1 - 1];
                for (int i = n1 - 2; i >= 0; --i) x[i] = (rhsv[i] - up[i] * x[i + 1]) / d[i];
                for (int i = 0; i < n1; ++i) xs[i](j, k) = x[i];
            }
        }
        return field_from_spectra(g, xs);
    }

    Field cg_solve(const Field& b, const SolveOpts& opts, int* iters) const {
        Field x(g);
        Field rr = b;
        project(rr);
        const double bnorm = std::sqrt(std::inner_product(rr.v.begin(), rr.v.end(), rr.v.begin(), 0.0));
        if (bnorm == 0.0) {
            if (iters) *iters = 0;
            return x;
        }
        Field z = precondition(rr);
        project(z);
        Field p = z;
        double rz = std::inner_product(rr.v.begin(), rr.v.end(), z.v.begin(), 0.0);
        const int cap = std::max(50, int(opts.cg_max_factor * std::sqrt(double(b.size()))));
        for (int it = 0; it < cap; ++it) {
            Field Kp = apply_K(p);
            const double pKp = std::inner_product(p.v.begin(), p.v.end(), Kp.v.begin(), 0.0);
            const double alpha = rz / pKp;
            for (std::size_t m = 0; m < x.size(); ++m) {
                x.v[m] += alpha * p.v[m];
                rr.v[m] -= alpha * Kp.v[m];
            }
            const double rnorm = std::sqrt(std::inner_product(rr.v.begin(), rr.v.end(), rr.v.begin(), 0.0));
            if (rnorm <= opts.cg_tol * bnorm) {
                if (iters) *iters = it + 1;
                return x;
            }
            z = precondition(rr);
            project(z);
            const double rznew = std::inner_product(rr.v.begin(), rr.v.end(), z.v.begin(), 0.0);
            const double beta = rznew / rz;
            rz = rznew;
            for (std::size_t m = 0; m < p.v.size(); ++m) p.v[m] = z.v[m] + beta * p.v[m];
        }
        throw SolverDiverged("vacuum potential CG did not converge");
    }
};

Field node_gradient_1(const Field& xi) { return d1(xi); }

} // namespace

VacuumData zero_vacuum_data(const Grid& g) {
    return {make_vec3(g), Field(g), TorusField(g.n2, g.n3), {TorusField(g.n2, g.n3), TorusField(g.n2, g.n3), TorusField(g.n2, g.n3)}};
}

CompatReport check_compatibility(const VacuumData& data, const MetricPack& mp) {
    (void)mp;
    CompatReport rep;
    Field divchi = d1(data.chi[0]) + d_tangential(data.chi[1], 2) + d_tangential(data.chi[2], 3);
    rep.div_chi_max = max_abs(divchi);
    rep.g5_normal_max = max_abs(data.g5[0]);
    TorusField c = d_torus(data.g5[1], 2);
    c += d_torus(data.g5[2], 3);
    c -= slice(data.chi[0], 0); // wall is the first node of the [-1,0] grid
    rep.trace_match_max = max_abs(c);
    return rep;
}

Field to_mid(const Field& f) {
    Grid gm = mid_grid(f.grid);
    Field out(gm);
    for (int i = 0; i + 1 < f.grid.g1.n; ++i)
        for (int j = 0; j < f.grid.n2; ++j)
            for (int k = 0; k < f.grid.n3; ++k)
                out(i, j, k) = 0.5 * (f(i, j, k) + f(i + 1, j, k));
    return out;
}

Vec3Field to_mid(const Vec3Field& f) { return {to_mid(f[0]), to_mid(f[1]), to_mid(f[2])}; }

double mid_inner(const Vec3Field& a, const Vec3Field& b) {
    const Grid& g = a[0].grid;
    const double w = g.g1.h() / (double(g.n2) * g.n3);
    double s = 0.0;
    for (int c = 0; c < 3; ++c)
        for (std::size_t m = 0; m < a[c].size(); ++m) s += a[c].v[m] * b[c].v[m];
    return w * s;
}

VacuumSolution solve_divcurl(const VacuumData& data, const MetricPack& mp, const SolveOpts& opts) {
    const Grid& g = data.chi[0].grid;
    if (!g.same_shape(mp.grid)) throw BadGrid("solve_divcurl: grid mismatch");

    VacuumSolution sol;
    sol.zeta = stage1_solve(data, g);

    Galerkin gal(g);
    gal.set_A(mp);

    // rhs: b = Gamma-term - volume Xi term - A zeta term
    Vec3Field zmid = to_mid(sol.zeta);
    Field b = gal.grad_adjoint(gal.apply_Am(zmid));
    b *= -1.0;
    Field Xim = to_mid(data.Xi);
    const int n1 = g.g1.n;
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < g.n2; ++j)
            for (int k = 0; k < g.n3; ++k) {
                double acc = 0.0;
                if (i > 0) acc += 0.5 * gal.w * Xim(i - 1, j, k);
                if (i + 1 < n1) acc += 0.5 * gal.w * Xim(i, j, k);
                b(i, j, k) -= acc;
            }
    const double wt = 1.0 / (double(g.n2) * g.n3);
    for (int j = 0; j < g.n2; ++j)
        for (int k = 0; k < g.n3; ++k) b(n1 - 1, j, k) += wt * data.g3(j, k);

    sol.xi = gal.cg_solve(b, opts, &sol.cg_iters);

    // assemble H = zeta + grad(xi) at nodes
    Field xi1 = node_gradient_1(sol.xi);
    Field xi2 = d_tangential(sol.xi, 2), xi3 = d_tangential(sol.xi, 3);
    sol.H = make_vec3(g);
    for (std::size_t m = 0; m < sol.H[0].size(); ++m) {
        sol.H[0].v[m] = sol.zeta[0].v[m] + xi1.v[m];
        sol.H[1].v[m] = sol.zeta[1].v[m] + xi2.v[m];
        sol.H[2].v[m] = sol.zeta[2].v[m] + xi3.v[m];
    }

    // residual report with the node-based discrete operators
    Field c1 = d_tangential(sol.H[2], 2) - d_tangential(sol.H[1], 3);
    Field c2 = d_tangential(sol.H[0], 3) - d1(sol.H[2]);
    Field c3 = d1(sol.H[1]) - d_tangential(sol.H[0], 2);
    Vec3Field AH = apply_A(mp, sol.H);
    Field dv = d1(AH[0]) + d_tangential(AH[1], 2) + d_tangential(AH[2], 3);
    for (int i = 1; i + 1 < n1; ++i)
        for (int j = 0; j < g.n2; ++j)
            for (int k = 0; k < g.n3; ++k) {
                sol.res.curl = std::max({sol.res.curl,
                                         std::fabs(c1(i, j, k) - data.chi[0](i, j, k)),
                                         std::fabs(c2(i, j, k) - data.chi[1](i, j, k)),
                                         std::fabs(c3(i, j, k) - data.chi[2](i, j, k))});
                sol.res.div = std::max(sol.res.div, std::fabs(dv(i, j, k) - data.Xi(i, j, k)));
            }
    for (int j = 0; j < g.n2; ++j)
        for (int k = 0; k < g.n3; ++k) {
            sol.res.bc_normal = std::max(sol.res.bc_normal, std::fabs(AH[0](n1 - 1, j, k) - data.g3(j, k)));
            sol.res.bc_wall = std::max({sol.res.bc_wall,
                                        std::fabs(sol.H[1](0, j, k) + data.g5[2](j, k)),
                                        std::fabs(sol.H[2](0, j, k) - data.g5[1](j, k))});
        }
    return sol;
}

Helmholtz helmholtz_decompose(const Vec3Field& v, const SolveOpts& opts) {
    const Grid& g = v[0].grid;
    Galerkin gal(g);

    Vec3Field vmid = to_mid(v);
    Field b = gal.grad_adjoint(vmid);
    Helmholtz out;
    out.potential = gal.cg_solve(b, opts, &out.cg_iters);

    out.grad_mid = gal.grad(out.potential);
    out.curl_mid = make_vec3(out.grad_mid[0].grid);
    for (int c = 0; c < 3; ++c)
        for (std::size_t m = 0; m < vmid[c].size(); ++m)
            out.curl_mid[c].v[m] = vmid[c].v[m] - out.grad_mid[c].v[m];

    out.grad_nodes = make_vec3(g);
    out.grad_nodes[0] = d1(out.potential);
    out.grad_nodes[1] = d_tangential(out.potential, 2);
    out.grad_nodes[2] = d_tangential(out.potential, 3);
    out.curl_nodes = make_vec3(g);
    for (int c = 0; c < 3; ++c)
        for (std::size_t m = 0; m < v[c].size(); ++m)
            out.curl_nodes[c].v[m] = v[c].v[m] - out.grad_nodes[c].v[m];
    return out;
}

} // namespace pvlab
