#pragma once

#include "pvlab/constraints.hpp"
#include "pvlab/field.hpp"
#include "pvlab/geometry.hpp"
#include "pvlab/plasma.hpp"
#include "pvlab/vacuum_elliptic.hpp"

namespace pvlab {

// Physical vacuum field (capital-H calligraphic in the notes below) from the
// straightened unknown the elliptic solver returns:
//   Hphys_1 = Hs_1 / d1Phi1,  Hphys_t = Hs_t - Hphys_1 * dt(psi tangential)
Vec3Field vacuum_physical_field(const Vec3Field& Hs, const MetricPack& mp);

// The five interface/wall boundary rows evaluated as residual fields:
//   (kinematic, pressure jump, vacuum normal trace, wall v1, wall tangential x2)
struct BoundaryResiduals {
    TorusField kinematic;   // dt phi - v_N at the front
    TorusField pressure;    // q - 0.5 |Hvac|^2 at the front
    TorusField normal;      // vacuum field conormal trace at the front
    TorusField wall_v1;     // plasma v1 at the wall x1 = 1
    TorusField wall_t2, wall_t3; // nu x Hvac - data at the wall x1 = -1
    double max_abs_all() const;
};

BoundaryResiduals boundary_operator(const State8& U, const TorusField& phi,
                                    const TorusField& dtphi,
                                    const Vec3Field& Hvac_straight,
                                    const MetricPack& mp_plasma, const MetricPack& mp_vac,
                                    const TorusVec3& jay);

// min over the front of |H2*K3 - H3*K2| with H the plasma trace and K the
// physical vacuum trace; this is the non-collinearity margin.
double stability_margin(const State8& U, const Vec3Field& Hvac_straight,
                        const MetricPack& mp_plasma, const MetricPack& mp_vac);

struct CoupledState {
    State8 U;
    TorusField phi;
    double t = 0.0;
};

struct CoupledOpts {
    Eos eos;
    double delta0 = 0.5;        // margin floor
    SolveOpts vacuum;
    double front_bound = 0.45;  // admissible front amplitude
};

struct CoupledDiagnostics {
    double energy = 0.0;         // plasma symmetrizer energy (U, A0 U)
    ConstraintReport constraints;
    double margin = 0.0;
    double front_l2 = 0.0, front_h1 = 0.0;
    VacuumResiduals elliptic;
    int cg_iters = 0;
};

// One RK4 step of the coupled front/plasma system; the vacuum field is
// re-solved from the current front inside every stage (front -> geometry ->
// vacuum -> pressure trace -> plasma).  jay is the wall tangential datum.
CoupledState coupled_step(const CoupledState& s, const TorusVec3& jay, double dt,
                          const CoupledOpts& opts, CoupledDiagnostics* diag = nullptr,
                          const Grid* vacuum_shape = nullptr);

CoupledDiagnostics coupled_diagnostics(const CoupledState& s, const TorusVec3& jay,
                                       const CoupledOpts& opts, const Grid* vacuum_shape = nullptr);

// Equilibrium bundle used by tests and the CLI: q = 2, v = 0, H = (0,1,0),
// vacuum trace (0, sqrt3, 1), flat front. Margin = 1, pressure = 1.5.
struct EquilibriumSetup {
    CoupledState state;
    TorusVec3 jay;
};
EquilibriumSetup make_equilibrium(int n1, int n2, int n3);

} // namespace pvlab
