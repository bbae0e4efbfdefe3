#pragma once

#include <random>
#include <vector>

#include "snakeroute/geom.hpp"
#include "snakeroute/offset.hpp"

namespace snk::testutil {

inline PolygonalDomain square_domain(double lo, double hi) {
    PolygonalDomain d;
    d.outer = {{lo, lo}, {hi, lo}, {hi, hi}, {lo, hi}};
    return d;
}

inline std::vector<Point> cw_box(double x0, double y0, double x1, double y1) {
    return {{x0, y0}, {x0, y1}, {x1, y1}, {x1, y0}};
}

// Random convex hole: jittered polygon around a center, emitted CW.
inline std::vector<Point> random_convex_hole(std::mt19937_64& rng, Point c, double rad, int nv) {
    std::uniform_real_distribution<double> jitter(0.55, 1.0);
    std::vector<Point> pts;
    for (int i = 0; i < nv; ++i) {
        double ang = 2 * kPi * i / nv;
        double rr = rad * jitter(rng);
        pts.push_back(c + Vec2{rr * std::cos(ang), rr * std::sin(ang)});
    }
    std::reverse(pts.begin(), pts.end());  // CW
    return pts;
}

// Random domain: square outer with disjoint convex holes, hole gap >= min_gap.
inline PolygonalDomain random_domain(uint64_t seed, int max_holes, double world = 20.0,
                                     double min_gap = 2.4) {
    std::mt19937_64 rng(seed);
    PolygonalDomain d = square_domain(0.0, world);
    std::uniform_real_distribution<double> pos(3.0, world - 3.0);
    std::uniform_real_distribution<double> radd(0.8, 2.0);
    std::uniform_int_distribution<int> nvd(3, 7);
    std::vector<Point> centers;
    std::vector<double> radii;
    int attempts = 0;
    while ((int)d.holes.size() < max_holes && attempts < 300) {
        ++attempts;
        Point c{pos(rng), pos(rng)};
        double r = radd(rng);
        bool ok = c.x - r > min_gap && c.y - r > min_gap && c.x + r < world - min_gap &&
                  c.y + r < world - min_gap;
        for (size_t i = 0; ok && i < centers.size(); ++i)
            if (dist(c, centers[i]) < r + radii[i] + min_gap) ok = false;
        if (!ok) continue;
        d.holes.push_back(random_convex_hole(rng, c, r, nvd(rng)));
        centers.push_back(c);
        radii.push_back(r);
    }
    return d;
}

// Brute-force distance to the domain boundary (independent of BoundaryIndex).
inline double brute_boundary_distance(Point p, const PolygonalDomain& d) {
    double best = 1e300;
    auto scan = [&](const std::vector<Point>& loop) {
        for (size_t i = 0; i < loop.size(); ++i)
            best = std::min(best, point_segment_distance(p, loop[i], loop[(i + 1) % loop.size()]));
    };
    scan(d.outer);
    for (auto& h : d.holes) scan(h);
    return best;
}

}  // namespace snk::testutil
