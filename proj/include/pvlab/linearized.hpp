#pragma once

#include <array>
#include <vector>

#include "pvlab/field.hpp"
#include "pvlab/geometry.hpp"
#include "pvlab/plasma.hpp"

namespace pvlab {

// State around which the operators are linearized: plasma unknowns with
// their time derivative, vacuum field, front and front velocity, plus the
// straightening metrics on both sides.
struct BasicState {
    Eos eos;
    Grid gp, gv;
    State8 U, Ut;           // plasma grid
    Vec3Field Hcal;         // vacuum grid
    TorusField phi, phit;
    MetricPack mp_p, mp_v;
    Field dtpsi_p, dtpsi_v; // lifted phit on each side
};

BasicState make_basic_state(const Eos& eos, const State8& U, const State8& Ut,
                            const Vec3Field& Hcal, const TorusField& phi,
                            const TorusField& phit, const Grid& gp, const Grid& gv);

// Raw perturbation direction; the front part carries its own time derivative
// so the shifted unknowns below have a well-defined time derivative too.
struct Perturbation {
    State8 dU, dUt;
    Vec3Field dH;
    TorusField dphi, dphit;
};

Perturbation zero_perturbation(const Grid& gp, const Grid& gv);

// Shifted unknowns Udot = dU - (Psi/d1Phi1) d1U_base (and likewise for the
// vacuum field); the substitution that removes first-order front terms from
// the linearized interior operators.
struct GoodUnknown {
    State8 Udot, Udot_t;
    Vec3Field Hdot;
};

GoodUnknown good_unknown(const Perturbation& d, const BasicState& s);
// Recover (dU, dH) from shifted unknowns and the front direction.
void good_unknown_invert(const GoodUnknown& gu, const TorusField& dphi,
                         const BasicState& s, State8& dU_out, Vec3Field& dH_out);

// Nonlinear interior operators.
// Plasma: A0(U) Ut + At1(U, metric) d1U + A2(U) d2U + A3(U) d3U.
State8 plasma_operator(const BasicState& s);
// Vacuum: (curl of the covariant field, divergence of the contravariant
// field), both derived from Hcal through the metric.
std::array<Field, 4> vacuum_operator(const Vec3Field& Hcal, const MetricPack& mp);

// Interface/wall rows of the nonlinear boundary operator.
struct BoundaryRows {
    TorusField r1; // kinematic:        dt phi - v_N          (front)
    TorusField r2; // pressure jump:    q - |Hcal|^2 / 2      (front)
    TorusField r3; // vacuum normal:    Hcal_N                (front)
    TorusField r4; // wall plasma:      v1                    (x1 = 1)
    TorusField r5a, r5b; // wall vacuum: nu x Hcal = (Hcal3, -Hcal2)  (x1 = -1)
    double max_abs_all() const;
};
BoundaryRows boundary_nonlinear(const BasicState& s);

// Effective linearized operators in the shifted unknowns.
// Interior: P(U,Psi) Udot + C(U,Psi) Udot with the zero-order matrix C formed
// by directional differentiation of the coefficient matrices along Udot.
State8 apply_linearized_interior(const GoodUnknown& gu, const BasicState& s);
std::array<Field, 4> apply_linearized_vacuum(const GoodUnknown& gu, const BasicState& s);
BoundaryRows apply_linearized_boundary(const GoodUnknown& gu, const TorusField& dphi,
                                       const TorusField& dphit, const BasicState& s);

// Central-difference verification of the three linearizations.  For each
// epsilon: || (N(x+eh) - N(x-eh)) / (2 eps) - N'(x)h ||_inf, where N' is the
// effective operator plus the zeroth-order front terms it drops.
struct FrechetReport {
    std::vector<double> eps;
    std::vector<double> err_plasma, err_vacuum, err_boundary;
};
FrechetReport frechet_verify(const BasicState& s, const Perturbation& d,
                             const std::vector<double>& eps);

} // namespace pvlab
