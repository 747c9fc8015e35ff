#pragma once

#include <Eigen/Dense>

#include "pvlab/field.hpp"
#include "pvlab/geometry.hpp"

namespace pvlab {

using Mat8 = Eigen::Matrix<double, 8, 8>;
using Vec8 = Eigen::Matrix<double, 8, 1>;

// Ideal gas with entropy variable: rho = (p e^{-S})^{1/gamma}.
struct Eos {
    double gamma = 5.0 / 3.0;

    double pressure(double q, const double H[3]) const {
        return q - 0.5 * (H[0] * H[0] + H[1] * H[1] + H[2] * H[2]);
    }
    double rho(double p, double S) const;
    double rho_p(double p, double S) const; // d rho / d p at fixed S
    double sound_speed2(double p, double S) const;
};

// State layout: U = (q, v1, v2, v3, H1, H2, H3, S).
// Symmetric coefficient matrices of the first-order system.
Mat8 plasma_A0(const Vec8& U, const Eos& eos);
Mat8 plasma_Aj(const Vec8& U, const Eos& eos, int j); // j = 1,2,3
// Straightened normal matrix (1/d1phi1)(A1 - A0 dt_psi - A2 d2psi - A3 d3psi).
Mat8 plasma_Atilde1(const Vec8& U, const Eos& eos, double d1phi1,
                    double dtpsi, double d2psi, double d3psi);

Vec8 state_at(const State8& U, std::size_t m);

// v,H -> u = eta v, h = eta H and back (secondary unknowns).
State8 transform_state(const State8& U, const MetricPack& mp);
State8 transform_state_inv(const State8& W, const MetricPack& mp);

// Boundary matrix of the transformed system at a node: Ahat1 + E12 where
// E12 is the constant q-u1 pairing and Ahat1 vanishes when w1 = h1 = 0.
Mat8 transformed_boundary_matrix(const Vec8& U, const Eos& eos, const MetricPack& mp,
                                 double dtpsi, std::size_t m);
Mat8 constant_E12();

// Interior spatial operator: A0 dU/dt + Atilde1 d1 U + A2 d2 U + A3 d3 U.
// plasma_rhs returns dU/dt = -A0^{-1}(spatial part).
State8 plasma_spatial(const State8& U, const Eos& eos, const MetricPack& mp, const Field& dtpsi);
State8 plasma_rhs(const State8& U, const Eos& eos, const MetricPack& mp, const Field& dtpsi);

struct PlasmaBc {
    TorusField q_front;   // q at x1 = 0
};

// One RK4 step with strong boundary imposition (q at the front,
// v1 = H1 = 0 at the wall x1 = 1).  Throws CflViolation if dt is too large
// and HyperbolicityLost if p or rho leave the admissible cone.
State8 step_plasma(const State8& U, const Eos& eos, const MetricPack& mp,
                   const Field& dtpsi, double dt, const PlasmaBc& bc);

// Straightened induction transport for H alone (frozen v and metric):
// dt H = -(1/d1phi1) [ (w.grad)H - (h.grad)v + H div u ].
Vec3Field transport_H_rhs(const Vec3Field& H, const Vec3Field& v,
                          const MetricPack& mp, const Field& dtpsi);
Vec3Field transport_H(const Vec3Field& H, const Vec3Field& v, const MetricPack& mp,
                      const Field& dtpsi, double dt, double leak_tol = 1e-8);

double plasma_max_speed(const State8& U, const Eos& eos);
void check_admissible(const State8& U, const Eos& eos);

} // namespace pvlab
