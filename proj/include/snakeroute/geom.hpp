#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace snk {

// World units: 1 unit = snake radius (snake width is 2).
inline constexpr double kEpsGeom = 1e-7;   // incidence / tangency tolerance
inline constexpr double kEpsJoin = 1e-7;   // chain continuity tolerance
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrt2 = 1.41421356237309504880;

struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& m) : std::runtime_error(m) {}
};
struct PreconditionError : std::runtime_error {
    explicit PreconditionError(const std::string& m) : std::runtime_error(m) {}
};
struct TautFailure : std::runtime_error {
    explicit TautFailure(const std::string& m) : std::runtime_error(m) {}
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double xx, double yy) : x(xx), y(yy) {}

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }

    double norm() const { return std::hypot(x, y); }
    double norm2() const { return x * x + y * y; }
    Vec2 unit() const { double n = norm(); return n > 0 ? Vec2{x / n, y / n} : Vec2{0, 0}; }
    Vec2 perp() const { return {-y, x}; }  // left normal
};

using Point = Vec2;

inline Vec2 operator*(double s, Vec2 v) { return v * s; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double dist(Point a, Point b) { return (a - b).norm(); }
inline double dist2(Point a, Point b) { return (a - b).norm2(); }

// Angle wrapped to (-pi, pi].
double wrap_angle(double a);

double point_segment_distance(Point p, Point a, Point b);
Point closest_point_on_segment(Point p, Point a, Point b);

// Proper or touching intersection of closed segments, with tolerance eps.
bool segments_intersect(Point a, Point b, Point c, Point d, double eps = 0.0);
// Intersection point of non-parallel segments; nullopt if parallel or outside.
std::optional<Point> segment_intersection_point(Point a, Point b, Point c, Point d);

struct PolyCurve;

double polygon_signed_area(const std::vector<Point>& poly);
// Signed area enclosed by a closed PolyCurve (arcs handled exactly).
double loop_area(const PolyCurve& loop);
bool polygon_is_simple(const std::vector<Point>& poly, double eps = kEpsGeom);
// Closed containment test with boundary tolerance eps.
bool point_in_polygon(Point p, const std::vector<Point>& poly, double eps = kEpsGeom);

struct Bounds {
    double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
    bool init = false;
    void expand(Point p);
    void expand(const Bounds& b);
    void pad(double m);
};

// A chain piece: straight segment or circular arc. Arc orientation is the
// sign of sweep (positive = CCW).
struct ArcSeg {
    enum class Kind { Line, Arc };
    Kind kind = Kind::Line;
    Point a, b;             // line endpoints
    Point c;                // arc center
    double r = 0.0;         // arc radius > 0
    double a0 = 0.0;        // arc start angle
    double sweep = 0.0;     // signed sweep, |sweep| in (0, 2pi]

    static ArcSeg line(Point a, Point b);
    static ArcSeg arc(Point c, double r, double a0, double sweep);

    double length() const;
    Point start() const;
    Point end() const;
    Point point_at(double s) const;     // s = arc length from start
    Vec2 tangent_at(double s) const;    // unit tangent
    ArcSeg reversed() const;
    ArcSeg sub(double s0, double s1) const;  // 0 <= s0 < s1 <= length
    Bounds bounds() const;
    void validate() const;
};

// Connected chain of segments and arcs.
struct PolyCurve {
    std::vector<ArcSeg> segs;

    PolyCurve() = default;
    explicit PolyCurve(std::vector<ArcSeg> s) : segs(std::move(s)) { recache(); }
    static PolyCurve from_points(const std::vector<Point>& pts);

    double length() const { return length_; }
    void recache();
    bool empty() const { return segs.empty(); }
    Point start() const;
    Point end() const;
    Point point_at(double s) const;
    Vec2 tangent_at(double s) const;
    PolyCurve reversed() const;
    PolyCurve sub(double s0, double s1) const;
    void append(ArcSeg seg);           // enforces kEpsJoin continuity
    void append(const PolyCurve& c);
    // Samples at arc-length pitch; always includes both endpoints.
    std::vector<Point> sample(double pitch) const;
    std::vector<double> sample_params(double pitch) const;
    void validate() const;             // joins within kEpsJoin, seg invariants
    Bounds bounds() const;

  private:
    double length_ = 0.0;
};

// n-vertex polygonal domain with hole obstacles. Outer boundary CCW, holes
// CW, so walking any boundary keeps the free space on the left.
struct PolygonalDomain {
    std::vector<Point> outer;
    std::vector<std::vector<Point>> holes;

    int vertex_count() const;
    // Global vertex ids: outer vertices first, then holes in order.
    Point vertex(int id) const;
    void validate() const;
    bool contains(Point p, double eps = kEpsGeom) const;  // closed region P
    Bounds bounds() const;
};

// Flattened boundary with a uniform-grid index for fast nearest queries.
struct BoundaryIndex {
    struct Edge {
        Point a, b;
        int va = -1, vb = -1;  // global vertex ids
    };
    std::vector<Edge> edges;

    BoundaryIndex() = default;
    explicit BoundaryIndex(const PolygonalDomain& d);

    double distance(Point p) const;
    Point nearest(Point p) const;
    // Distance and id of the nearest *vertex* of the domain.
    std::pair<double, int> nearest_vertex(Point p) const;

  private:
    Bounds bb_;
    double cell_ = 1.0;
    int nx_ = 0, ny_ = 0;
    std::vector<std::vector<int>> grid_;
    std::vector<Point> verts_;
    void build_grid();
    double brute_distance(Point p, int* edge_out) const;
    int cell_index(int ix, int iy) const { return iy * nx_ + ix; }
};

}  // namespace snk
