#pragma once

#include <variant>

#include "snakeroute/geom.hpp"

namespace snk {

// Maximal circular-arc piece of the offset boundary, centered at the
// generating domain vertex.
struct Slide {
    ArcSeg arc;        // kind == Arc, center == generating vertex, radius == r
    int vertex_id = -1;
    double radius = 0.0;
};

// Inward offset P^r of a polygonal domain: the closure of the set of points
// of P at distance >= r from the boundary.
struct OffsetDomain {
    double r = 0.0;
    std::vector<PolyCurve> loops;   // closed boundary components, free space on the left
    std::vector<Slide> slides;
    PolygonalDomain domain;         // source domain (membership queries)
    BoundaryIndex boundary;         // index over the source boundary

    bool empty_region() const { return loops.empty(); }
};

// Builds P^r with boundary loops and slides. Throws ValidationError on a
// malformed domain. An offset larger than the inradius yields empty loops.
OffsetDomain offset_domain(const PolygonalDomain& domain, double r);

// Membership-only construction: skips the boundary-loop arrangement but
// supports point_in_offset / distance queries. Used for domains whose offset
// region is degenerate (zero-width corridors).
OffsetDomain offset_domain_lazy(const PolygonalDomain& domain, double r);

// Closed membership test: p in P and dist(p, boundary) >= r - kEpsGeom.
bool point_in_offset(Point p, const OffsetDomain& od);

using TangentFeature = std::variant<Slide, Point>;

// All straight segments tangent to both features (a point is a degenerate
// tangency), fully inside P^r. Tangency points on a slide must fall within
// the slide's angular range.
std::vector<ArcSeg> bitangents(const TangentFeature& a, const TangentFeature& b,
                               const OffsetDomain& od);

// Candidate tangent segments without the containment filter (the filter is
// a sampled point_in_offset check; exposed for reuse by the planner).
std::vector<ArcSeg> bitangent_candidates(const TangentFeature& a, const TangentFeature& b);

bool segment_in_offset(Point a, Point b, const OffsetDomain& od, double pitch = 0.05);

}  // namespace snk
