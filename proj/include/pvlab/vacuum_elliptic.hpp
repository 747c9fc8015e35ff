#pragma once

#include "pvlab/field.hpp"
#include "pvlab/geometry.hpp"

namespace pvlab {

// Boundary-value data for the vacuum div-curl system on the lower slab
// [-1,0] x T^2:   curl(curled unknown) = chi,  div(A *) = Xi,
// normal component (A *)_1 = g3 at the interface x1 = 0,
// tangential trace nu x (*) = g5 at the outer wall x1 = -1 (nu = -e1).
struct VacuumData {
    Vec3Field chi;
    Field Xi;
    TorusField g3;
    TorusVec3 g5; // g5[0] must vanish (it is nu-parallel)
};

VacuumData zero_vacuum_data(const Grid& g);

struct CompatReport {
    double div_chi_max = 0.0;      // solenoidality of the curl source
    double g5_normal_max = 0.0;    // nu-component of the wall datum
    double trace_match_max = 0.0;  // surface divergence of g5 vs chi_1 at the wall
    bool ok(double tol = 1e-10) const {
        return div_chi_max <= tol && g5_normal_max <= tol && trace_match_max <= tol;
    }
};

CompatReport check_compatibility(const VacuumData& data, const MetricPack& mp);

struct SolveOpts {
    double cg_tol = 1e-10;   // relative residual
    int cg_max_factor = 10;  // cap = factor * sqrt(#unknowns)
};

struct VacuumResiduals {
    double curl = 0.0;       // || curl H - chi ||_inf, interior nodes
    double div = 0.0;        // || div(A H) - Xi ||_inf, interior nodes
    double bc_normal = 0.0;  // interface normal datum
    double bc_wall = 0.0;    // wall tangential datum
};

struct VacuumSolution {
    Vec3Field H;       // node values of the straightened vacuum field
    Vec3Field zeta;    // stage-1 curl-carrying part
    Field xi;          // stage-2 potential (zero at the wall)
    int cg_iters = 0;
    VacuumResiduals res;
};

// Two-stage constructive solve: per-mode two-point BVP for the curl part,
// then a variable-coefficient SPD solve (CG, per-mode preconditioner) for
// the potential correction.
VacuumSolution solve_divcurl(const VacuumData& data, const MetricPack& mp,
                             const SolveOpts& opts = {});

// Orthogonal splitting v = curl_part + grad(phi), phi = 0 at the wall.
// The midpoint (element) representation is exactly L2-orthogonal.
struct Helmholtz {
    Field potential;
    Vec3Field grad_nodes, curl_nodes;
    Vec3Field grad_mid, curl_mid; // element-midpoint grid in x1
    int cg_iters = 0;
};

Helmholtz helmholtz_decompose(const Vec3Field& v, const SolveOpts& opts = {});

// Inner product in the element-midpoint representation (the one in which
// the Helmholtz splitting is orthogonal).
double mid_inner(const Vec3Field& a, const Vec3Field& b);

// Node field -> element-midpoint field (P1 average in x1).
Field to_mid(const Field& f);
Vec3Field to_mid(const Vec3Field& f);

} // namespace pvlab
