#pragma once

#include <vector>

#include "pvlab/field.hpp"
#include "pvlab/geometry.hpp"
#include "pvlab/plasma.hpp"
#include "pvlab/vacuum_elliptic.hpp"

namespace pvlab {

// Time-jet bundle for the coupled plasma/front/vacuum problem at t = 0.
// U[j], phi[j], Hvac[j] hold the j-th time derivatives of the plasma state,
// the front, and the physical vacuum field; Hvac[0] is always the output of
// the elliptic solve for (phi[0], jay), never independent input.
struct InitialDataBundle {
    Eos eos;
    Grid gv;        // vacuum grid used for the per-time elliptic solves
    TorusVec3 jay;  // outer-wall tangential datum, held constant in time
    std::vector<State8> U;
    std::vector<TorusField> phi;
    std::vector<Vec3Field> Hvac;
};

InitialDataBundle make_bundle(const Eos& eos, const State8& U0, const TorusField& phi0,
                              const TorusVec3& jay, const Grid& gv);

// Evaluate the truncated Taylor polynomial sum_j jets[j] t^j / j! (and its
// time derivative of order `dorder`).
State8 jet_poly(const std::vector<State8>& jets, double t, int dorder = 0);
TorusField jet_poly(const std::vector<TorusField>& jets, double t, int dorder = 0);

// Fill U[1..J], phi[1..J], Hvac[0..J] recursively: the front derivative comes
// from the kinematic law, the state derivative from the interior evolution
// operator evaluated along the polynomial jets, and the vacuum derivatives
// from differencing the elliptic solve along the front jet.  Supports J <= 3.
void derivative_cascade(InitialDataBundle& b, int J);

// Interface/wall consistency of the jets:
//   pressure[j]  = max | q_j - (1/2) d_t^j |Hvac|^2 |  on the interface, j < k
//   wall_v1[j]   = max | v1_j |                       at the wall,      j <= k-2
//   weighted_trace = max | v1_{k-1} |                 at the wall (trace proxy
//                    for the weighted integral condition at the top order)
struct CompatOrderReport {
    std::vector<double> pressure;
    std::vector<double> wall_v1;
    double weighted_trace = 0.0;
};
CompatOrderReport check_compat_order(const InitialDataBundle& b, int k);

// Taylor-in-time approximate solution: jets times a smooth cutoff equal to 1
// on [0, T0/2] and 0 beyond T0, with the interface pressure condition enforced
// by lifting the (jet-corrected) trace mismatch into the q component.
struct ApproxSolution {
    InitialDataBundle bundle;
    double T0 = 1.0;
    std::vector<TorusField> mu_jets; // time jets of the pressure-trace mismatch
};

ApproxSolution build_approximate_solution(const InitialDataBundle& b, double T0);

double approx_cutoff(const ApproxSolution& a, double t);
TorusField approx_front(const ApproxSolution& a, double t);
// Physical vacuum field at time t (fresh elliptic solve on the front at t).
Vec3Field approx_vacuum(const ApproxSolution& a, double t, VacuumResiduals* res = nullptr);
State8 approx_plasma(const ApproxSolution& a, double t);
// Interior evolution residual f^a(t); identically zero for t < 0.
State8 approx_residual(const ApproxSolution& a, double t);
double approx_residual_norm(const ApproxSolution& a, double t); // L2 over the slab

} // namespace pvlab
