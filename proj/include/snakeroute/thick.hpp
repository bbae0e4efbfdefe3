#pragma once

#include <optional>

#include "snakeroute/offset.hpp"

namespace snk {

// A spine inflated by a disk: two offset curves plus semicircular end caps.
struct ThickPath {
    PolyCurve spine;
    double radius = 1.0;
    PolyCurve left;    // offset along the left normal
    PolyCurve right;   // offset along the right normal
    ArcSeg cap_start;  // semicircle around the spine start (the snake head)
    ArcSeg cap_end;    // semicircle around the spine end (the snake tail)

    // Closed boundary: left curve, end cap, right curve reversed, start cap.
    PolyCurve boundary() const;
};

struct OverlapReport {
    bool overlapping = false;
    // arc-length parameters of two ribbon pre-images of one witness point
    std::optional<std::pair<double, double>> witness;
    double overlap_area_estimate = 0.0;
    // tangential self-contacts (distance ~ 2*radius) are not overlap; flagged
    int tangential_contacts = 0;
};

// Ribbon discretization pitch for overlap checks and feasibility sampling.
inline double ribbon_pitch(double length) {
    return std::min(0.01, std::max(length / 2000.0, 1e-6));
}

inline constexpr double kEpsOverlap = 1e-4;  // penetration depth tolerance

ThickPath inflate(const PolyCurve& spine, double radius);

// Decides injectivity of the sweep map (arc length x offset in (-r, r)).
// Candidate witness points come from intersections of non-adjacent ribbon
// quads; each candidate is confirmed by counting perpendicular-foot
// pre-images along the whole spine at depth tolerance kEpsOverlap.
OverlapReport check_overlap(const PolyCurve& spine, double radius);

// Serial-reference variant (no broadphase grid, no OpenMP); identical verdicts.
OverlapReport check_overlap_serial(const PolyCurve& spine, double radius);

// Number of ribbon pre-images of p: perpendicular feet at distance
// <= radius - depth_tol from the spine samples.
int ribbon_preimage_count(const std::vector<Point>& samples, const std::vector<Vec2>& tangents,
                          const std::vector<double>& params, Point p, double radius,
                          double depth_tol, std::vector<double>* feet = nullptr);

// Classical shortest thick path: Dijkstra over bitangents and slide arcs of
// P^radius. Returns the spine, or nullopt when s and f are not connected in
// P^radius. Throws PreconditionError when s or f lies outside P^radius.
std::optional<PolyCurve> route_chew(const PolygonalDomain& domain, Point s, Point f,
                                    double radius);

// Same, against a prebuilt offset domain.
std::optional<PolyCurve> route_chew(const OffsetDomain& od, Point s, Point f);

bool spine_feasible(const PolyCurve& spine, const OffsetDomain& od);

}  // namespace snk
