#pragma once

#include <array>

#include "pvlab/field.hpp"
#include "pvlab/spectral.hpp"

namespace pvlab {

// Smooth bump used by the lifting kernel: chi(0)=1, chi'(0)=0,
// support strictly inside (-1/2, 1/2).
double lift_bump(double s);
double lift_bump_d1(double s);
double lift_bump_d2(double s);

// Mode-wise lifting of the front phi(x') into the slab: each tangential
// Fourier mode k is extended as phi_k * chi(<k> x1), <k> = sqrt(1+|k|^2).
// The result vanishes near x1 = +-1 and has zero normal derivative at x1 = 0,
// and higher modes decay over a proportionally thinner collar.
Field lift_front(const TorusField& phi, const Grid& grid, double max_slope = 0.5);

struct MetricPack {
    Grid grid;
    Field psi;                        // lifted front
    Field d1phi1;                     // 1 + d1(psi)
    Vec3Field normal;                 // N = (1, -d2 psi, -d3 psi)
    std::array<std::array<Field, 3>, 3> eta; // row-major eta_hat
    std::array<std::array<Field, 3>, 3> A;   // (1/d1phi1) eta eta^T, SPD

    // Pointwise accessors (3x3 at a node).
    std::array<std::array<double, 3>, 3> eta_at(std::size_t m) const;
    std::array<std::array<double, 3>, 3> A_at(std::size_t m) const;
};

// Assemble the straightening metric from a lifted front.  Derivatives of
// psi use the same discrete stencils as the rest of the code (centered x1,
// spectral tangential), so discrete identities like det(eta) = d1phi1^2
// hold node-wise.  Throws MetricDegenerate if d1phi1 < floor.
MetricPack build_metric(const Field& psi, double floor_d1phi1 = 0.5);

// Apply eta_hat (or its inverse) to a vector field node-wise.
Vec3Field apply_eta(const MetricPack& mp, const Vec3Field& v);
Vec3Field apply_eta_inv(const MetricPack& mp, const Vec3Field& v);
Vec3Field apply_A(const MetricPack& mp, const Vec3Field& v);

// Convenience: identity metric on a grid (flat front).
MetricPack flat_metric(const Grid& g);

} // namespace pvlab
