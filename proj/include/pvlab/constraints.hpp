#pragma once

#include "pvlab/field.hpp"
#include "pvlab/geometry.hpp"

namespace pvlab {

// Node-wise residuals of the divergence/trace constraints carried by the
// plasma magnetic field: div(eta H) in the interior, the conormal component
// at the interface, and the normal component at the wall.
struct ConstraintReport {
    double div_h_max = 0.0;
    double HN_front_max = 0.0;
    double H1_wall_max = 0.0;
    double worst() const { return std::max({div_h_max, HN_front_max, H1_wall_max}); }
};

ConstraintReport constraint_residuals(const Vec3Field& H, const MetricPack& mp);

// Linear transport system obeyed by the constraint residuals: an interior
// scalar advected by the straightened flow plus two boundary scalars advected
// by the tangential trace velocities, all with source forcing.
struct TransportResiduals {
    Field a;       // interior residual, plasma grid
    TorusField R;  // front residual
    TorusField Rp; // wall residual
};

struct TransportSources {
    Field Fa;
    TorusField Q, Qp;
};

TransportResiduals zero_residuals(const Grid& g);
TransportSources zero_sources(const Grid& g);

TransportResiduals evolve_transport_residuals(const TransportResiduals& r0,
                                              const Vec3Field& v, const MetricPack& mp,
                                              const Field& dtpsi, const TransportSources& src,
                                              double dt);

} // namespace pvlab
