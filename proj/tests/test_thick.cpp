#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "snakeroute/oracle.hpp"
#include "snakeroute/thick.hpp"
#include "test_util.hpp"

using namespace snk;

namespace {

// C1 spine made of fillet-joined random segments; curvature radius >= rmin.
PolyCurve random_smooth_spine(std::mt19937_64& rng, double rmin, double rmax, int pieces) {
    std::uniform_real_distribution<double> seg_len(0.6, 2.2);
    std::uniform_real_distribution<double> turn(-2.2, 2.2);
    std::uniform_real_distribution<double> rad(rmin, rmax);
    PolyCurve c;
    Point pos{0, 0};
    double heading = 0;
    for (int i = 0; i < pieces; ++i) {
        double L = seg_len(rng);
        Point nxt = pos + Vec2{std::cos(heading), std::sin(heading)} * L;
        c.segs.push_back(ArcSeg::line(pos, nxt));
        pos = nxt;
        double dth = turn(rng);
        if (std::abs(dth) > 0.05) {
            double r = rad(rng);
            Vec2 t{std::cos(heading), std::sin(heading)};
            Vec2 n = dth > 0 ? t.perp() : t.perp() * -1.0;
            Point center = pos + n * r;
            double a0 = std::atan2(pos.y - center.y, pos.x - center.x);
            c.segs.push_back(ArcSeg::arc(center, r, a0, dth > 0 ? std::abs(dth) : -std::abs(dth)));
            pos = c.segs.back().end();
            heading += dth;
        }
    }
    c.recache();
    return c;
}

}  // namespace

TEST_CASE("hippodrome inflation") {
    PolyCurve seg = PolyCurve::from_points({{0, 0}, {4, 0}});
    ThickPath tp = inflate(seg, 1.0);
    PolyCurve b = tp.boundary();
    CHECK(loop_area(b) == doctest::Approx(8.0 + kPi).epsilon(1e-9));
    CHECK(b.length() == doctest::Approx(8.0 + 2 * kPi).epsilon(1e-9));
    // boundary samples at distance radius from the spine
    for (Point p : b.sample(0.05)) {
        double dmin = 1e18;
        for (Point q : seg.sample(0.01)) dmin = std::min(dmin, dist(p, q));
        CHECK(dmin == doctest::Approx(1.0).epsilon(1e-3));
    }
}

TEST_CASE("quarter circle spine inflates to an annular sector") {
    PolyCurve arc;
    arc.segs.push_back(ArcSeg::arc({0, 0}, 2.0, 0.0, kPi / 2));
    arc.recache();
    ThickPath tp = inflate(arc, 1.0);
    // annular sector between radii 1 and 3 plus two half disks
    double expect = 0.25 * kPi * (9.0 - 1.0) + kPi;
    CHECK(loop_area(tp.boundary()) == doctest::Approx(expect).epsilon(1e-9));
    for (Point p : tp.boundary().sample(0.05)) {
        double dmin = 1e18;
        for (Point q : arc.sample(0.005)) dmin = std::min(dmin, dist(p, q));
        CHECK(dmin == doctest::Approx(1.0).epsilon(2e-3));
    }
    CHECK_THROWS_AS(inflate(PolyCurve{}, 1.0), PreconditionError);
}

TEST_CASE("straight spine does not overlap") {
    PolyCurve seg = PolyCurve::from_points({{0, 0}, {6, 0}});
    auto rep = check_overlap(seg, 1.0);
    CHECK_FALSE(rep.overlapping);
    CHECK_FALSE(rep.witness.has_value());
    CHECK(rep.overlap_area_estimate == 0.0);
}

TEST_CASE("small circle spine overlaps") {
    PolyCurve circ;
    circ.segs.push_back(ArcSeg::arc({0, 0}, 0.5, 0.0, kPi));
    circ.segs.push_back(ArcSeg::arc({0, 0}, 0.5, kPi, kPi));
    circ.recache();
    auto rep = check_overlap(circ, 1.0);
    CHECK(rep.overlapping);
    REQUIRE(rep.witness.has_value());
    CHECK(rep.overlap_area_estimate > 0.0);
    // witness parameters map to ribbon pre-images of one point
    auto [s1, s2] = *rep.witness;
    CHECK(std::abs(s1 - s2) > 0.1);
}

TEST_CASE("unit arc spine with sweep 1.9pi does not overlap") {
    PolyCurve arc;
    arc.segs.push_back(ArcSeg::arc({0, 0}, 1.0, 0.0, 1.9 * kPi));
    arc.recache();
    auto rep = check_overlap(arc, 1.0);
    CHECK_FALSE(rep.overlapping);
    auto oracle = raster_multiplicity(arc, 1.0, 0.005);
    CHECK_FALSE(oracle.overlapping);
}

TEST_CASE("kinked spine double-covers its inner wedge") {
    PolyCurve kink = PolyCurve::from_points({{0, 0}, {4, 0}, {4.7, -2.5}});
    auto rep = check_overlap(kink, 1.0);
    CHECK(rep.overlapping);
    auto oracle = raster_multiplicity(kink, 1.0, 0.005);
    CHECK(oracle.overlapping);
}

TEST_CASE("tangential contact between layers is not overlap") {
    // straight run, U-turn of spine radius 1, straight run back: the two
    // straight bodies touch at distance exactly 2
    PolyCurve u;
    u.segs.push_back(ArcSeg::line({6, 0}, {0, 0}));
    u.segs.push_back(ArcSeg::arc({0, 1}, 1.0, -kPi / 2, -kPi));
    u.segs.push_back(ArcSeg::line({0, 2}, {6, 2}));
    u.recache();
    auto rep = check_overlap(u, 1.0);
    CHECK_FALSE(rep.overlapping);
    CHECK(rep.tangential_contacts > 0);
    auto oracle = raster_multiplicity(u, 1.0, 0.005);
    CHECK_FALSE(oracle.overlapping);
}

TEST_CASE("overlap detector agrees with the multiplicity oracle") {
    std::mt19937_64 rng(2024);
    int checked = 0, agree = 0;
    for (int trial = 0; trial < 40; ++trial) {
        PolyCurve spine = random_smooth_spine(rng, 0.45, 4.0, 4);
        if (spine.segs.empty() || spine.length() < 1.0) continue;
        auto rep = check_overlap(spine, 1.0);
        auto oracle = raster_multiplicity(spine, 1.0, 0.005);
        ++checked;
        if (rep.overlapping == oracle.overlapping)
            ++agree;
        else
            CHECK(oracle.overlap_area < 25 * 0.005 * 0.005);
    }
    CHECK(checked >= 30);
    CHECK((double)agree / checked >= 0.95);
}

TEST_CASE("parallel and serial overlap scans agree") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 10; ++trial) {
        PolyCurve spine = random_smooth_spine(rng, 0.4, 3.0, 3);
        if (spine.segs.empty() || spine.length() < 1.0) continue;
        auto a = check_overlap(spine, 1.0);
        auto b = check_overlap_serial(spine, 1.0);
        CHECK(a.overlapping == b.overlapping);
        if (a.witness && b.witness) {
            CHECK(a.witness->first == doctest::Approx(b.witness->first));
            CHECK(a.witness->second == doctest::Approx(b.witness->second));
        }
    }
}

TEST_CASE("non-overlap verdict implies simple assembled boundary") {
    std::mt19937_64 rng(5150);
    int used = 0;
    for (int trial = 0; trial < 20 && used < 6; ++trial) {
        PolyCurve spine = random_smooth_spine(rng, 1.05, 4.0, 3);
        if (spine.segs.empty() || spine.length() < 2.0) continue;
        if (check_overlap(spine, 1.0).overlapping) continue;
        ++used;
        auto pts = inflate(spine, 1.0).boundary().sample(0.05);
        auto properly_cross = [](Point a, Point b, Point c, Point d) {
            double d1 = cross(d - c, a - c), d2 = cross(d - c, b - c);
            double d3 = cross(b - a, c - a), d4 = cross(b - a, d - a);
            const double m = 1e-9;
            return ((d1 > m && d2 < -m) || (d1 < -m && d2 > m)) &&
                   ((d3 > m && d4 < -m) || (d3 < -m && d4 > m));
        };
        int crossings = 0;
        for (size_t i = 0; i + 1 < pts.size(); ++i)
            for (size_t j = i + 2; j + 1 < pts.size(); ++j) {
                if (i == 0 && j + 2 == pts.size()) continue;
                if (properly_cross(pts[i], pts[i + 1], pts[j], pts[j + 1])) ++crossings;
            }
        CHECK(crossings == 0);
    }
    CHECK(used >= 3);
}

TEST_CASE("route_chew in an empty domain is the straight segment") {
    PolygonalDomain d = testutil::square_domain(-5, 15);
    auto path = route_chew(d, {0, 0}, {10, 0}, 1.0);
    REQUIRE(path.has_value());
    CHECK(path->length() == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("route_chew around a square hole matches the grid oracle") {
    PolygonalDomain d = testutil::square_domain(-5, 15);
    d.holes.push_back(testutil::cw_box(3, -1, 5, 1));
    auto path = route_chew(d, {0, 0}, {8, 0}, 1.0);
    REQUIRE(path.has_value());
    auto oracle = grid_route_oracle(d, {0, 0}, {8, 0}, 1.0, 0.02);
    REQUIRE(oracle.has_value());
    CHECK(path->length() <= *oracle + 1e-6);
    CHECK(std::abs(path->length() - *oracle) / *oracle < 0.02);
    // the spine stays feasible in its own offset domain
    auto od = offset_domain(d, 1.0);
    CHECK(spine_feasible(*path, od));
}

TEST_CASE("route_chew reports separated components as infeasible") {
    PolygonalDomain d = testutil::square_domain(0, 20);
    d.holes.push_back(testutil::cw_box(9, 0.05, 11, 19.95));  // near-full wall
    auto path = route_chew(d, {4, 10}, {16, 10}, 1.0);
    CHECK_FALSE(path.has_value());
    CHECK_THROWS_AS(route_chew(d, {9.5, 10}, {16, 10}, 1.0), PreconditionError);
}

TEST_CASE("route_chew optimality against sampled detours") {
    PolygonalDomain d = testutil::random_domain(99, 4);
    auto od = offset_domain(d, 1.0);
    Point s{1.6, 1.6}, f{18.4, 18.4};
    REQUIRE(point_in_offset(s, od));
    REQUIRE(point_in_offset(f, od));
    auto path = route_chew(od, s, f);
    REQUIRE(path.has_value());
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(1.2, 18.8);
    int tried = 0;
    while (tried < 100) {
        Point w{u(rng), u(rng)};
        if (!point_in_offset(w, od)) continue;
        auto leg1 = route_chew(od, s, w);
        auto leg2 = route_chew(od, w, f);
        if (!leg1 || !leg2) continue;
        ++tried;
        CHECK(path->length() <= leg1->length() + leg2->length() + 1e-6);
    }
}

TEST_CASE("chew output is locally taut") {
    PolygonalDomain d = testutil::square_domain(-5, 15);
    d.holes.push_back(testutil::cw_box(3, -1, 5, 1));
    auto od = offset_domain(d, 1.0);
    auto path = route_chew(od, {0, 0}, {8, 0});
    REQUIRE(path.has_value());
    double len = path->length();
    auto pts = path->sample(0.25);
    // moving any interior sample 0.01 along its normal, keeping the polyline
    // through it inside P^1, never shortens the path
    for (size_t i = 1; i + 1 < pts.size(); ++i) {
        Vec2 t = (pts[i + 1] - pts[i - 1]).unit();
        for (double sgn : {1.0, -1.0}) {
            Point moved = pts[i] + t.perp() * (0.01 * sgn);
            if (!point_in_offset(moved, od)) continue;
            double before = dist(pts[i - 1], pts[i]) + dist(pts[i], pts[i + 1]);
            double after = dist(pts[i - 1], moved) + dist(moved, pts[i + 1]);
            CHECK(after >= before - 1e-7);
        }
    }
    (void)len;
}
