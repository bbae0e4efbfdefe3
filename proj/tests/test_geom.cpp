#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "snakeroute/geom.hpp"
#include "test_util.hpp"

using namespace snk;

TEST_CASE("arc segment basics") {
    ArcSeg l = ArcSeg::line({0, 0}, {4, 0});
    CHECK(l.length() == doctest::Approx(4.0));
    CHECK(l.point_at(1.0).x == doctest::Approx(1.0));
    CHECK(l.tangent_at(2.0).x == doctest::Approx(1.0));

    ArcSeg a = ArcSeg::arc({0, 0}, 2.0, 0.0, kPi / 2);  // CCW quarter
    CHECK(a.length() == doctest::Approx(kPi));
    CHECK(a.start().x == doctest::Approx(2.0));
    CHECK(a.end().y == doctest::Approx(2.0));
    Vec2 t0 = a.tangent_at(0.0);
    CHECK(t0.x == doctest::Approx(0.0));
    CHECK(t0.y == doctest::Approx(1.0));

    ArcSeg cw = ArcSeg::arc({0, 0}, 1.0, kPi / 2, -kPi / 2);  // CW quarter
    CHECK(cw.end().x == doctest::Approx(1.0));
    CHECK(cw.tangent_at(0.0).x == doctest::Approx(1.0));

    ArcSeg rev = a.reversed();
    CHECK(dist(rev.start(), a.end()) < 1e-12);
    CHECK(dist(rev.end(), a.start()) < 1e-12);

    ArcSeg mid = a.sub(a.length() / 4, 3 * a.length() / 4);
    CHECK(mid.length() == doctest::Approx(a.length() / 2));
    CHECK(dist(mid.start(), a.point_at(a.length() / 4)) < 1e-12);
}

TEST_CASE("polycurve construction and queries") {
    PolyCurve c = PolyCurve::from_points({{0, 0}, {3, 0}, {3, 4}});
    CHECK(c.length() == doctest::Approx(7.0));
    CHECK(c.point_at(5.0).y == doctest::Approx(2.0));
    CHECK(c.tangent_at(6.0).y == doctest::Approx(1.0));
    CHECK(c.start().x == doctest::Approx(0.0));
    CHECK(c.end().y == doctest::Approx(4.0));

    PolyCurve r = c.reversed();
    CHECK(r.length() == doctest::Approx(7.0));
    CHECK(dist(r.start(), c.end()) < 1e-12);

    PolyCurve s = c.sub(1.0, 5.0);
    CHECK(s.length() == doctest::Approx(4.0));
    CHECK(dist(s.start(), Point{1, 0}) < 1e-12);
    CHECK(dist(s.end(), Point{3, 2}) < 1e-12);

    auto pts = c.sample(0.5);
    CHECK(pts.size() >= 14);
    CHECK(dist(pts.front(), c.start()) < 1e-12);
    CHECK(dist(pts.back(), c.end()) < 1e-12);

    PolyCurve bad;
    bad.segs.push_back(ArcSeg::line({0, 0}, {1, 0}));
    bad.segs.push_back(ArcSeg::line({2, 0}, {3, 0}));
    bad.recache();
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    CHECK_THROWS_AS(c.append(ArcSeg::line({10, 10}, {11, 10})), ValidationError);
}

TEST_CASE("segment predicates") {
    CHECK(segments_intersect({0, 0}, {2, 2}, {0, 2}, {2, 0}));
    CHECK_FALSE(segments_intersect({0, 0}, {1, 0}, {0, 1}, {1, 1}));
    auto p = segment_intersection_point({0, 0}, {2, 2}, {0, 2}, {2, 0});
    REQUIRE(p.has_value());
    CHECK(p->x == doctest::Approx(1.0));
    CHECK_FALSE(segment_intersection_point({0, 0}, {1, 0}, {0, 1}, {1, 1}).has_value());
    CHECK(point_segment_distance({0, 1}, {-1, 0}, {1, 0}) == doctest::Approx(1.0));
}

TEST_CASE("polygon predicates") {
    std::vector<Point> sq{{0, 0}, {2, 0}, {2, 2}, {0, 2}};
    CHECK(polygon_signed_area(sq) == doctest::Approx(4.0));
    CHECK(polygon_is_simple(sq));
    CHECK(point_in_polygon({1, 1}, sq));
    CHECK(point_in_polygon({0, 1}, sq));  // boundary is inside
    CHECK_FALSE(point_in_polygon({3, 1}, sq));
    std::vector<Point> bow{{0, 0}, {2, 2}, {2, 0}, {0, 2}};
    CHECK_FALSE(polygon_is_simple(bow));
}

TEST_CASE("domain validation") {
    PolygonalDomain d = testutil::square_domain(0, 10);
    d.holes.push_back(testutil::cw_box(4, 4, 6, 6));
    CHECK_NOTHROW(d.validate());
    CHECK(d.vertex_count() == 8);
    CHECK(d.contains({2, 2}));
    CHECK_FALSE(d.contains({5, 5}));   // inside the hole
    CHECK(d.contains({4, 5}));         // on the hole boundary: closed region

    PolygonalDomain ccw_hole = testutil::square_domain(0, 10);
    auto h = testutil::cw_box(4, 4, 6, 6);
    std::reverse(h.begin(), h.end());
    ccw_hole.holes.push_back(h);
    CHECK_THROWS_AS(ccw_hole.validate(), ValidationError);

    PolygonalDomain bow;
    bow.outer = {{0, 0}, {2, 2}, {2, 0}, {0, 2}};
    CHECK_THROWS_AS(bow.validate(), ValidationError);
}

TEST_CASE("boundary index matches brute force") {
    PolygonalDomain d = testutil::random_domain(42, 6);
    BoundaryIndex idx(d);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 22.0);
    for (int i = 0; i < 500; ++i) {
        Point p{u(rng), u(rng)};
        double got = idx.distance(p);
        double want = testutil::brute_boundary_distance(p, d);
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("loop area of arc chains") {
    // unit circle as two half arcs
    PolyCurve circle;
    circle.segs.push_back(ArcSeg::arc({0, 0}, 1.0, 0.0, kPi));
    circle.segs.push_back(ArcSeg::arc({0, 0}, 1.0, kPi, kPi));
    circle.recache();
    CHECK(loop_area(circle) == doctest::Approx(kPi));

    PolyCurve sq = PolyCurve::from_points({{0, 0}, {2, 0}, {2, 2}, {0, 2}, {0, 0}});
    CHECK(loop_area(sq) == doctest::Approx(4.0));
}
