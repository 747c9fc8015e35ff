#pragma once

#include <Eigen/Dense>

#include "pvlab/field.hpp"
#include "pvlab/geometry.hpp"

namespace pvlab {

using Mat6 = Eigen::Matrix<double, 6, 6>;
using Vec6 = Eigen::Matrix<double, 6, 1>;

// Regularized hyperbolic vacuum unknowns: magnetic and electric 3-fields on
// the vacuum slab, with regularization parameter eps.
struct RegState {
    Vec3Field H, E;
    double eps = 0.1;
};

// Secondary symmetrization data: the vector nu (interface transport velocity
// cut off toward the wall) and the pointwise 6x6 symmetrizer matrices.
struct SecondarySymmetrizers {
    Grid grid;
    double eps = 0.1;
    Vec3Field nu;
    const MetricPack* mp = nullptr;

    Mat6 B0_at(std::size_t m) const;
    Mat6 B_at(std::size_t m, int j) const;       // j = 1, 2, 3 (flat-index arrays)
    Mat6 Btilde1_at(std::size_t m) const;        // (B1 - B2 d2Psi - B3 d3Psi)/d1Phi1
    Mat6 M_at(std::size_t m, int j) const;       // j = 0..3, congruence with K = I2 x eta
};

// Cutoff profile used for nu: 1 at the interface x1 = 0, 0 at the wall x1 = -1.
double reg_cutoff(double x1);

// nu1 = chi (v2 d2 phi + v3 d3 phi), nu_k = chi v_k with the interface traces
// of the tangential velocity extended into the slab.
SecondarySymmetrizers assemble_secondary(const MetricPack& mp, const TorusField& v2,
                                         const TorusField& v3, const TorusField& phi,
                                         double eps);

struct HyperbolicityReport {
    double min_margin = 0.0;   // min over nodes of 1 - eps |nu|
    double min_eig_B0 = 0.0;   // smallest eigenvalue of the 6x6 symmetrizer
};
HyperbolicityReport check_hyperbolicity(const SecondarySymmetrizers& sym);

// Boundary data for the regularized step: tangential magnetic components at
// the wall and covariant tangential electric components at the interface.
struct RegBc {
    TorusField wallH2, wallH3;
    TorusField Etau2, Etau3;
};

struct FluxReport {
    double Jminus = 0.0; // eps^-1 integral of (E3 H2 - E2 H3) over the wall
    double Jplus = 0.0;  // integral of q v1 over the plasma wall, if traces given
};

// One RK4 step of the first-order Maxwell-type system
//   eps d/dt (eta H) = -curl(cov E),  eps d/dt (eta E) = curl(cov H) - eps kappa (eta E)
// with strong boundary imposition.  Throws CflViolation when dt exceeds the
// eps-scaled wave-speed bound and HyperbolicityLost when eps |nu| >= 1.
RegState step_regularized(const RegState& s, const SecondarySymmetrizers& sym,
                          const MetricPack& mp, const RegBc& bc, double dt,
                          double kappa, FluxReport* flux = nullptr,
                          const TorusField* q_plasma_wall = nullptr,
                          const TorusField* v1_plasma_wall = nullptr);

// Quadratic energy (M0 W, W) with W = (cov H, cov E).
double reg_energy(const RegState& s, const SecondarySymmetrizers& sym,
                  const MetricPack& mp);

// Advance until the relative change of H over `window` steps drops below tol.
RegState run_to_steady(const RegState& s0, const SecondarySymmetrizers& sym,
                       const MetricPack& mp, const RegBc& bc, double dt, double kappa,
                       double tol = 1e-8, int window = 100, int max_steps = 200000);

} // namespace pvlab
