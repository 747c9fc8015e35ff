#include "pvlab/plasma.hpp"

#include <cmath>

namespace pvlab {

double Eos::rho(double p, double S) const {
    if (p <= 0.0) throw HyperbolicityLost("eos: pressure not positive");
    return std::pow(p * std::exp(-S), 1.0 / gamma);
}

double Eos::rho_p(double p, double S) const {
    return rho(p, S) / (gamma * p);
}

double Eos::sound_speed2(double p, double S) const {
    return gamma * p / rho(p, S);
}

Vec8 state_at(const State8& U, std::size_t m) {
    Vec8 u;
    for (int c = 0; c < 8; ++c) u[c] = U[c].v[m];
    return u;
}

namespace {

struct Thermo {
    double p, rho, alpha; // alpha = rho_p / rho
};

Thermo thermo_at(const Vec8& U, const Eos& eos) {
    const double H[3] = {U[4], U[5], U[6]};
    const double p = eos.pressure(U[0], H);
    if (p <= 0.0) throw HyperbolicityLost("plasma state: p <= 0");
    const double rho = eos.rho(p, U[7]);
    if (rho <= 0.0) throw HyperbolicityLost("plasma state: rho <= 0");
    const double rp = eos.rho_p(p, U[7]);
    if (rp <= 0.0) throw HyperbolicityLost("plasma state: rho_p <= 0");
    return {p, rho, rp / rho};
}

} // namespace

Mat8 plasma_A0(const Vec8& U, const Eos& eos) {
    const Thermo th = thermo_at(U, eos);
    Mat8 A = Mat8::Zero();
    A(0, 0) = th.alpha;
    for (int a = 0; a < 3; ++a) {
        A(0, 4 + a) = A(4 + a, 0) = -th.alpha * U[4 + a];
        A(1 + a, 1 + a) = th.rho;
        for (int b = 0; b < 3; ++b)
            A(4 + a, 4 + b) = (a == b ? 1.0 : 0.0) + th.alpha * U[4 + a] * U[4 + b];
    }
    A(7, 7) = 1.0;
    return A;
}

Mat8 plasma_Aj(const Vec8& U, const Eos& eos, int j) {
    Mat8 A = U[j] * plasma_A0(U, eos); // v_j A0
    A(0, j) += 1.0;
    A(j, 0) += 1.0;
    const double Hj = U[3 + j];
    for (int a = 0; a < 3; ++a) {
        A(1 + a, 4 + a) -= Hj;
        A(4 + a, 1 + a) -= Hj;
    }
    return A;
}

Mat8 plasma_Atilde1(const Vec8& U, const Eos& eos, double d1phi1,
                    double dtpsi, double d2psi, double d3psi) {
    Mat8 A = plasma_Aj(U, eos, 1);
    A -= dtpsi * plasma_A0(U, eos);
    A -= d2psi * plasma_Aj(U, eos, 2);
    A -= d3psi * plasma_Aj(U, eos, 3);
    return A / d1phi1;
}

State8 transform_state(const State8& U, const MetricPack& mp) {
    State8 W = U;
    Vec3Field v = {U[1], U[2], U[3]}, H = {U[4], U[5], U[6]};
    Vec3Field u = apply_eta(mp, v), h = apply_eta(mp, H);
    for (int a = 0; a < 3; ++a) {
        W[1 + a] = u[a];
        W[4 + a] = h[a];
    }
    return W;
}

State8 transform_state_inv(const State8& W, const MetricPack& mp) {
    State8 U = W;
    Vec3Field u = {W[1], W[2], W[3]}, h = {W[4], W[5], W[6]};
    Vec3Field v = apply_eta_inv(mp, u), H = apply_eta_inv(mp, h);
    for (int a = 0; a < 3; ++a) {
        U[1 + a] = v[a];
        U[4 + a] = H[a];
    }
    return U;
}

Mat8 constant_E12() {
    Mat8 E = Mat8::Zero();
    E(0, 1) = E(1, 0) = 1.0;
    return E;
}

Mat8 transformed_boundary_matrix(const Vec8& U, const Eos& eos, const MetricPack& mp,
                                 double dtpsi, std::size_t m) {
    const Thermo th = thermo_at(U, eos);
    const double d = mp.d1phi1.v[m];

    Eigen::Matrix3d a1; // A = (1/d) eta eta^T, a0hat = A^{-1}
    auto Am = mp.A_at(m);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) a1(r, c) = Am[r][c];
    Eigen::Matrix3d a0hat = a1.inverse();

    auto em = mp.eta_at(m);
    Eigen::Matrix3d eta;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) eta(r, c) = em[r][c];
    Eigen::Vector3d v(U[1], U[2], U[3]), H(U[4], U[5], U[6]);
    Eigen::Vector3d u = eta * v, h = eta * H;
    const double w1 = u[0] - dtpsi;

    // M(h): block-diagonal symmetrizer of the transformed unknowns
    Mat8 M = Mat8::Zero();
    M(0, 0) = th.alpha;
    for (int a = 0; a < 3; ++a) {
        M(0, 4 + a) = M(4 + a, 0) = -th.alpha * h[a];
        for (int b = 0; b < 3; ++b) {
            M(1 + a, 1 + b) = th.rho * a0hat(a, b);
            M(4 + a, 4 + b) = a0hat(a, b) + th.alpha * h[a] * h[b];
        }
    }
    M(7, 7) = 1.0;

    Mat8 C1 = Mat8::Zero();
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            C1(1 + a, 4 + b) = -h[0] * a0hat(a, b);
            C1(4 + b, 1 + a) = -h[0] * a0hat(b, a);
        }

    return d * (w1 * M + C1) + constant_E12();
}

State8 plasma_spatial(const State8& U, const Eos& eos, const MetricPack& mp, const Field& dtpsi) {
    const Grid& g = U[0].grid;
    State8 D1U = make_state(g), D2U = make_state(g), D3U = make_state(g);
    for (int c = 0; c < 8; ++c) {
        D1U[c] = d1(U[c]);
        D2U[c] = d_tangential(U[c], 2);
        D3U[c] = d_tangential(U[c], 3);
    }
    State8 out = make_state(g);
    for (std::size_t m = 0; m < U[0].size(); ++m) {
        Vec8 u = state_at(U, m);
        const double d2p = -mp.eta[0][1].v[m], d3p = -mp.eta[0][2].v[m];
        Mat8 At1 = plasma_Atilde1(u, eos, mp.d1phi1.v[m], dtpsi.v[m], d2p, d3p);
        Mat8 A2 = plasma_Aj(u, eos, 2);
        Mat8 A3 = plasma_Aj(u, eos, 3);
        Vec8 r = At1 * state_at(D1U, m) + A2 * state_at(D2U, m) + A3 * state_at(D3U, m);
        for (int c = 0; c < 8; ++c) out[c].v[m] = r[c];
    }
    return out;
}

State8 plasma_rhs(const State8& U, const Eos& eos, const MetricPack& mp, const Field& dtpsi) {
    State8 sp = plasma_spatial(U, eos, mp, dtpsi);
    State8 out = make_state(U[0].grid);
    for (std::size_t m = 0; m < U[0].size(); ++m) {
        Vec8 u = state_at(U, m);
        Mat8 A0 = plasma_A0(u, eos);
        Vec8 r = -A0.ldlt().solve(state_at(sp, m));
        for (int c = 0; c < 8; ++c) out[c].v[m] = r[c];
    }
    return out;
}

double plasma_max_speed(const State8& U, const Eos& eos) {
    double smax = 0.0;
    for (std::size_t m = 0; m < U[0].size(); ++m) {
        Vec8 u = state_at(U, m);
        const Thermo th = thermo_at(u, eos);
        const double h2 = u[4] * u[4] + u[5] * u[5] + u[6] * u[6];
        const double cf = std::sqrt(eos.sound_speed2(th.p, u[7]) + h2 / th.rho);
        const double vmag = std::sqrt(u[1] * u[1] + u[2] * u[2] + u[3] * u[3]);
        smax = std::max(smax, vmag + cf);
    }
    return smax;
}

void check_admissible(const State8& U, const Eos& eos) {
    for (std::size_t m = 0; m < U[0].size(); ++m)
        (void)thermo_at(state_at(U, m), eos);
}

namespace {

void impose_bc(State8& U, const PlasmaBc& bc) {
    const Grid& g = U[0].grid;
    const int last = g.g1.n - 1;
    for (int j = 0; j < g.n2; ++j)
        for (int k = 0; k < g.n3; ++k) {
            U[0](0, j, k) = bc.q_front(j, k);
            U[1](last, j, k) = 0.0;
            U[4](last, j, k) = 0.0;
        }
}

State8 axpy(const State8& U, double c, const State8& K) {
    State8 R = U;
    for (int a = 0; a < 8; ++a)
        for (std::size_t m = 0; m < R[a].size(); ++m) R[a].v[m] += c * K[a].v[m];
    return R;
}

} // namespace

State8 step_plasma(const State8& U, const Eos& eos, const MetricPack& mp,
                   const Field& dtpsi, double dt, const PlasmaBc& bc) {
    const Grid& g = U[0].grid;
    const double speed = plasma_max_speed(U, eos);
    const double pi = 3.14159265358979323846;
    const double lam = speed * (1.0 / g.g1.h() + pi * g.n2 + pi * g.n3);
    if (std::fabs(dt) * lam > 2.8)
        throw CflViolation("step_plasma: dt exceeds RK4 stability bound");

    State8 S0 = U;
    impose_bc(S0, bc);
    State8 k1 = plasma_rhs(S0, eos, mp, dtpsi);
    State8 s2 = axpy(S0, 0.5 * dt, k1);
    impose_bc(s2, bc);
    State8 k2 = plasma_rhs(s2, eos, mp, dtpsi);
    State8 s3 = axpy(S0, 0.5 * dt, k2);
    impose_bc(s3, bc);
    State8 k3 = plasma_rhs(s3, eos, mp, dtpsi);
    State8 s4 = axpy(S0, dt, k3);
    impose_bc(s4, bc);
    State8 k4 = plasma_rhs(s4, eos, mp, dtpsi);

    State8 R = S0;
    for (int a = 0; a < 8; ++a)
        for (std::size_t m = 0; m < R[a].size(); ++m)
            R[a].v[m] += dt / 6.0 * (k1[a].v[m] + 2.0 * k2[a].v[m] + 2.0 * k3[a].v[m] + k4[a].v[m]);
    impose_bc(R, bc);
    check_admissible(R, eos);
    return R;
}

Vec3Field transport_H_rhs(const Vec3Field& H, const Vec3Field& v,
                          const MetricPack& mp, const Field& dtpsi) {
    const Grid& g = H[0].grid;
    Vec3Field u = apply_eta(mp, v);
    Vec3Field h = apply_eta(mp, H);
    Field w1 = u[0];
    w1 -= dtpsi;
    Field divu = d1(u[0]) + d_tangential(u[1], 2) + d_tangential(u[2], 3);

    Vec3Field out = make_vec3(g);
    for (int a = 0; a < 3; ++a) {
        Field dH1 = d1(H[a]), dH2 = d_tangential(H[a], 2), dH3 = d_tangential(H[a], 3);
        Field dv1 = d1(v[a]), dv2 = d_tangential(v[a], 2), dv3 = d_tangential(v[a], 3);
        for (std::size_t m = 0; m < out[a].size(); ++m) {
            const double conv = w1.v[m] * dH1.v[m] + u[1].v[m] * dH2.v[m] + u[2].v[m] * dH3.v[m];
            const double stretch = h[0].v[m] * dv1.v[m] + h[1].v[m] * dv2.v[m] + h[2].v[m] * dv3.v[m];
            out[a].v[m] = -(conv - stretch + H[a].v[m] * divu.v[m]) / mp.d1phi1.v[m];
        }
    }
    return out;
}

Vec3Field transport_H(const Vec3Field& H, const Vec3Field& v, const MetricPack& mp,
                      const Field& dtpsi, double dt, double leak_tol) {
    const Grid& g = H[0].grid;
    // the transport direction must be tangent to both boundary planes,
    // otherwise information is advected through them and the step is invalid
    Vec3Field u = apply_eta(mp, v);
    const int last = g.g1.n - 1;
    for (int j = 0; j < g.n2; ++j)
        for (int k = 0; k < g.n3; ++k) {
            const double w_front = u[0](0, j, k) - dtpsi(0, j, k);
            const double w_wall = u[0](last, j, k) - dtpsi(last, j, k);
            if (std::fabs(w_front) > leak_tol || std::fabs(w_wall) > leak_tol)
                throw BoundaryTransportLeak("transport_H: normal transport speed at boundary");
        }

    auto ax = [](const Vec3Field& a, double c, const Vec3Field& b) {
        Vec3Field r = a;
        for (int i = 0; i < 3; ++i)
            for (std::size_t m = 0; m < r[i].size(); ++m) r[i].v[m] += c * b[i].v[m];
        return r;
    };
    Vec3Field k1 = transport_H_rhs(H, v, mp, dtpsi);
    Vec3Field k2 = transport_H_rhs(ax(H, 0.5 * dt, k1), v, mp, dtpsi);
    Vec3Field k3 = transport_H_rhs(ax(H, 0.5 * dt, k2), v, mp, dtpsi);
    Vec3Field k4 = transport_H_rhs(ax(H, dt, k3), v, mp, dtpsi);
    Vec3Field R = H;
    for (int i = 0; i < 3; ++i)
        for (std::size_t m = 0; m < R[i].size(); ++m)
            R[i].v[m] += dt / 6.0 * (k1[i].v[m] + 2.0 * k2[i].v[m] + 2.0 * k3[i].v[m] + k4[i].v[m]);
    return R;
}

} // namespace pvlab
