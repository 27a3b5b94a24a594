// Wulff shapes (unit balls of the dual norm) and the h-function diagnostics
// of the section z = 1.
#pragma once

#include <vector>

#include "aniso/norm.hpp"

namespace aniso {

struct WulffFacet {
    Vec2 nu;       // outward unit normal of the edge
    double delta;  // edge length
};

// Boundary of {q : dual(q) <= 1}, counterclockwise. For polyhedral norms the
// vertex list is exact; otherwise it is an inscribed sample.
struct WulffPolyline {
    std::vector<Vec2> points;
    bool closed = true;
    bool exact = false;
    std::vector<WulffFacet> facets;  // per edge, same indexing as points

    double area() const;  // shoelace
    // largest absolute horizontal coordinate on the boundary
    double half_width() const;
};

// n is the sample count for non-polyhedral norms (n >= 8); polyhedral norms
// return their exact polar vertex list regardless of n.
WulffPolyline wulff_boundary(const PlanarNorm& n, int samples);

// The norm whose Wulff shape is the given polygon (gauge of the polar body).
PlanarNorm norm_with_wulff(const WulffPolyline& w);

// Regular k-gon boundary with an edge centered at the bottom (normal -e2).
WulffPolyline regular_wulff_polygon(int k, double circumradius);

// Tabulation of h(t) = phi(t,1) - phi(1,0)|t| together with the extremes of
// phi_xx(t,1) * phi(t,1)^3 over the grid.
struct HProfile {
    std::vector<double> t, h, hp;
    double phi10 = 0, phi01 = 0;
    double c1 = 0, c2 = 0;
};

HProfile h_profile(const PlanarNorm& n, double t_max, int grid);

}  // namespace aniso
