#ifndef HERMITEGF_POINTSETS_HPP
#define HERMITEGF_POINTSETS_HPP

#include "hermitegf/gaussian.hpp"

namespace hermitegf {

/// Points skip+1 .. skip+n of the Halton sequence in [0,1]^d, radical inverse
/// per prime base (2, 3, 5, 7, 11, 13, 17, 19). Deterministic.
PointSet halton(std::size_t n, int d, std::size_t skip = 0);

/// Component-wise map u -> sin(pi u / 2) on [-1,1]^d; densities pile up toward
/// the faces, the endpoints and the origin stay fixed.
PointSet cluster_boundary(const PointSet& pts);

/// Affine map of [0,1]^d points into the box [lo, hi].
PointSet box_scale(const PointSet& pts, std::span<const double> lo,
                   std::span<const double> hi);

struct HyperbolicOptions {
    double t_lim = 1.5; // parameter range of the branch before disk clipping
};

/// Nodes on the hyperbolic band 0.04 <= (x+1.2)^2 - 4y^2 <= 1 intersected with
/// the unit disk. Parameter pairs (c, t) with c in [0.2, 1] map through
/// (c cosh t - 1.2, 0.5 c sinh t), which puts the band value at exactly c^2;
/// points outside the disk are rejected.
///
/// grid_based = false draws Halton pairs (clustered toward the parameter
/// boundaries when requested) until n points are accepted. grid_based = true
/// lays a uniform ceil(sqrt(n))^2 parameter grid and returns every survivor,
/// so the realized count varies.
PointSet hyperbolic_nodes(std::size_t n, bool clustered, bool grid_based,
                          HyperbolicOptions opt = {});

} // namespace hermitegf

#endif
