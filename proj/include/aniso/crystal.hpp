// Explicit crystalline translators: the polygonal grim reaper built from the
// downward Wulff facets (natural mobility psi = phi), and the cylinder- and
// cone-Wulff bowls with their piecewise profiles.
#pragma once

#include <string>
#include <vector>

#include "aniso/norm.hpp"
#include "aniso/wulff.hpp"
#include "aniso/xi.hpp"

namespace aniso {

struct CrystalFacet {
    Vec2 nu;        // outward unit normal, nu . e2 < 0
    double delta;   // matching Wulff edge length
    double length;  // translator segment length L = -phi(nu) delta / (nu . e2)
    double speed;   // vertical facet speed, 1 by construction
};

struct CrystalReaper {
    std::vector<CrystalFacet> facets;  // ordered by increasing slope
    std::vector<Vec2> vertices;        // k+1 polyline vertices from (0,0) to (L, Lhat)
    double horizontal_extent = 0;      // L
    double height_offset = 0;          // Lhat

    // vertices plus the two vertical anchor rays, clipped at plot_length
    std::vector<Vec2> polyline(double plot_length) const;
};

// W must be the Wulff polygon of phi (phi polyhedral). The natural mobility
// psi = phi is implied by the construction.
CrystalReaper crystal_reaper(const WulffPolyline& w, const PlanarNorm& phi);
CrystalReaper crystal_reaper(const PlanarNorm& phi_polyhedral);

// Recomputes each facet's crystalline curvature -delta/L and the induced
// vertical speed phi(nu) delta / (L |nu . e2|).
std::vector<double> facet_speed_check(const CrystalReaper& r, const PlanarNorm& phi);

struct CrystalBowl {
    enum class Case { Cylinder, Cone };
    Case kind = Case::Cylinder;
    int N = 2;
    double r0 = 0;  // facet radius

    double u(double s) const;  // profile value at s = xi^0(x)
    double w(double s) const;  // profile slope away from the junction
    std::string case_name() const { return kind == Case::Cylinder ? "cylinder" : "cone"; }
};

// F(t,s) = |t| + |s| (Wulff = W_{xi^0} x [-1,1]): flat facet of radius r0 with
// r0 solving Per(F0) = |F0| for F0 = {xi^0 <= r0}; the scaling identities make
// the root r0 = N for every xi, which the root-finder reproduces numerically.
CrystalBowl crystal_bowl_cylinder(const XiDescriptor& xi, int N);

// F(t,s) = max(|t|, |s|) (double-cone Wulff): conical core u = xi^0(x) up to
// r0 = N, then the quadratic branch.
CrystalBowl crystal_bowl_cone(const XiDescriptor& xi, int N);

}  // namespace aniso
