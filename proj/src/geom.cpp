#include "snakeroute/geom.hpp"

#include <algorithm>
#include <cassert>
#include <limits>

namespace snk {

double wrap_angle(double a) {
    while (a > kPi) a -= 2 * kPi;
    while (a <= -kPi) a += 2 * kPi;
    return a;
}

double point_segment_distance(Point p, Point a, Point b) {
    return dist(p, closest_point_on_segment(p, a, b));
}

Point closest_point_on_segment(Point p, Point a, Point b) {
    Vec2 ab = b - a;
    double len2 = ab.norm2();
    if (len2 <= 0) return a;
    double t = dot(p - a, ab) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return a + ab * t;
}

bool segments_intersect(Point a, Point b, Point c, Point d, double eps) {
    auto orient = [](Point p, Point q, Point r) { return cross(q - p, r - p); };
    double d1 = orient(c, d, a);
    double d2 = orient(c, d, b);
    double d3 = orient(a, b, c);
    double d4 = orient(a, b, d);
    if (((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) &&
        ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps)))
        return true;
    if (point_segment_distance(a, c, d) <= eps) return true;
    if (point_segment_distance(b, c, d) <= eps) return true;
    if (point_segment_distance(c, a, b) <= eps) return true;
    if (point_segment_distance(d, a, b) <= eps) return true;
    return false;
}

std::optional<Point> segment_intersection_point(Point a, Point b, Point c, Point d) {
    Vec2 r = b - a, s = d - c;
    double denom = cross(r, s);
    if (std::abs(denom) < 1e-14) return std::nullopt;
    double t = cross(c - a, s) / denom;
    double u = cross(c - a, r) / denom;
    if (t < -1e-12 || t > 1 + 1e-12 || u < -1e-12 || u > 1 + 1e-12) return std::nullopt;
    return a + r * t;
}

double polygon_signed_area(const std::vector<Point>& poly) {
    double s = 0;
    for (size_t i = 0; i < poly.size(); ++i) {
        Point p = poly[i], q = poly[(i + 1) % poly.size()];
        s += cross(p, q);
    }
    return 0.5 * s;
}

bool polygon_is_simple(const std::vector<Point>& poly, double eps) {
    size_t n = poly.size();
    if (n < 3) return false;
    for (size_t i = 0; i < n; ++i) {
        Point a = poly[i], b = poly[(i + 1) % n];
        if (dist(a, b) <= eps) return false;
        for (size_t j = i + 1; j < n; ++j) {
            // skip adjacent edges
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            Point c = poly[j], d = poly[(j + 1) % n];
            if (segments_intersect(a, b, c, d, 0.0)) return false;
        }
    }
    return true;
}

bool point_in_polygon(Point p, const std::vector<Point>& poly, double eps) {
    size_t n = poly.size();
    bool inside = false;
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        Point a = poly[j], b = poly[i];
        if (point_segment_distance(p, a, b) <= eps) return true;
        if ((b.y > p.y) != (a.y > p.y)) {
            double xint = b.x + (p.y - b.y) * (a.x - b.x) / (a.y - b.y);
            if (p.x < xint) inside = !inside;
        }
    }
    return inside;
}

double loop_area(const PolyCurve& loop) {
    // area = 1/2 * closed integral of cross(p, dp)
    double area2 = 0;
    for (const auto& s : loop.segs) {
        if (s.kind == ArcSeg::Kind::Line) {
            area2 += cross(s.a, s.b);
        } else {
            Vec2 u0{std::cos(s.a0), std::sin(s.a0)};
            Vec2 u1{std::cos(s.a0 + s.sweep), std::sin(s.a0 + s.sweep)};
            area2 += s.r * cross(s.c, u1 - u0) + s.r * s.r * s.sweep;
        }
    }
    return 0.5 * area2;
}

void Bounds::expand(Point p) {
    if (!init) {
        min_x = max_x = p.x;
        min_y = max_y = p.y;
        init = true;
        return;
    }
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
}

void Bounds::expand(const Bounds& b) {
    if (!b.init) return;
    expand(Point{b.min_x, b.min_y});
    expand(Point{b.max_x, b.max_y});
}

void Bounds::pad(double m) {
    min_x -= m; min_y -= m; max_x += m; max_y += m;
}

ArcSeg ArcSeg::line(Point a, Point b) {
    ArcSeg s;
    s.kind = Kind::Line;
    s.a = a;
    s.b = b;
    return s;
}

ArcSeg ArcSeg::arc(Point c, double r, double a0, double sweep) {
    ArcSeg s;
    s.kind = Kind::Arc;
    s.c = c;
    s.r = r;
    s.a0 = a0;
    s.sweep = sweep;
    return s;
}

double ArcSeg::length() const {
    return kind == Kind::Line ? dist(a, b) : r * std::abs(sweep);
}

Point ArcSeg::start() const {
    if (kind == Kind::Line) return a;
    return c + Vec2{r * std::cos(a0), r * std::sin(a0)};
}

Point ArcSeg::end() const {
    if (kind == Kind::Line) return b;
    double a1 = a0 + sweep;
    return c + Vec2{r * std::cos(a1), r * std::sin(a1)};
}

Point ArcSeg::point_at(double s) const {
    if (kind == Kind::Line) {
        double len = length();
        if (len <= 0) return a;
        double t = std::clamp(s / len, 0.0, 1.0);
        return a + (b - a) * t;
    }
    double ang = a0 + (sweep >= 0 ? 1.0 : -1.0) * std::min(std::abs(sweep), s / r);
    return c + Vec2{r * std::cos(ang), r * std::sin(ang)};
}

Vec2 ArcSeg::tangent_at(double s) const {
    if (kind == Kind::Line) return (b - a).unit();
    double ang = a0 + (sweep >= 0 ? 1.0 : -1.0) * std::min(std::abs(sweep), s / r);
    Vec2 radial{std::cos(ang), std::sin(ang)};
    return sweep >= 0 ? radial.perp() : Vec2{radial.y, -radial.x};
}

ArcSeg ArcSeg::reversed() const {
    if (kind == Kind::Line) return line(b, a);
    return arc(c, r, a0 + sweep, -sweep);
}

ArcSeg ArcSeg::sub(double s0, double s1) const {
    double len = length();
    s0 = std::clamp(s0, 0.0, len);
    s1 = std::clamp(s1, s0, len);
    if (kind == Kind::Line) {
        Vec2 d = (b - a).unit();
        return line(a + d * s0, a + d * s1);
    }
    double sgn = sweep >= 0 ? 1.0 : -1.0;
    return arc(c, r, a0 + sgn * s0 / r, sgn * (s1 - s0) / r);
}

Bounds ArcSeg::bounds() const {
    Bounds bb;
    bb.expand(start());
    bb.expand(end());
    if (kind == Kind::Arc) {
        // include axis-extreme points covered by the sweep
        for (int k = -8; k <= 8; ++k) {
            double ang = k * kPi / 2;
            double rel = (ang - a0) / (sweep == 0 ? 1 : sweep);
            if (sweep > 0 && ang >= a0 - 1e-12 && ang <= a0 + sweep + 1e-12)
                bb.expand(c + Vec2{r * std::cos(ang), r * std::sin(ang)});
            if (sweep < 0 && ang <= a0 + 1e-12 && ang >= a0 + sweep - 1e-12)
                bb.expand(c + Vec2{r * std::cos(ang), r * std::sin(ang)});
            (void)rel;
        }
    }
    return bb;
}

void ArcSeg::validate() const {
    if (kind == Kind::Line) {
        if (!(dist(a, b) > kEpsJoin)) throw ValidationError("degenerate line segment");
    } else {
        if (!(r > 0)) throw ValidationError("arc radius must be positive");
        double s = std::abs(sweep);
        if (!(s > 0 && s <= 2 * kPi + 1e-9)) throw ValidationError("arc sweep out of range");
    }
    if (!std::isfinite(start().x) || !std::isfinite(start().y) ||
        !std::isfinite(end().x) || !std::isfinite(end().y))
        throw ValidationError("non-finite segment endpoint");
}

PolyCurve PolyCurve::from_points(const std::vector<Point>& pts) {
    PolyCurve c;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        if (dist(pts[i], pts[i + 1]) <= kEpsJoin) continue;
        c.segs.push_back(ArcSeg::line(pts[i], pts[i + 1]));
    }
    c.recache();
    return c;
}

void PolyCurve::recache() {
    length_ = 0;
    for (const auto& s : segs) length_ += s.length();
}

Point PolyCurve::start() const { return segs.front().start(); }
Point PolyCurve::end() const { return segs.back().end(); }

Point PolyCurve::point_at(double s) const {
    if (segs.empty()) return {};
    double acc = 0;
    for (const auto& seg : segs) {
        double l = seg.length();
        if (s <= acc + l) return seg.point_at(s - acc);
        acc += l;
    }
    return segs.back().end();
}

Vec2 PolyCurve::tangent_at(double s) const {
    if (segs.empty()) return {1, 0};
    double acc = 0;
    for (const auto& seg : segs) {
        double l = seg.length();
        if (s <= acc + l) return seg.tangent_at(s - acc);
        acc += l;
    }
    return segs.back().tangent_at(segs.back().length());
}

PolyCurve PolyCurve::reversed() const {
    PolyCurve c;
    for (auto it = segs.rbegin(); it != segs.rend(); ++it) c.segs.push_back(it->reversed());
    c.recache();
    return c;
}

PolyCurve PolyCurve::sub(double s0, double s1) const {
    PolyCurve c;
    s0 = std::clamp(s0, 0.0, length_);
    s1 = std::clamp(s1, s0, length_);
    double acc = 0;
    for (const auto& seg : segs) {
        double l = seg.length();
        double lo = std::max(s0, acc), hi = std::min(s1, acc + l);
        if (hi - lo > kEpsJoin) c.segs.push_back(seg.sub(lo - acc, hi - acc));
        acc += l;
    }
    c.recache();
    return c;
}

void PolyCurve::append(ArcSeg seg) {
    if (!segs.empty() && dist(segs.back().end(), seg.start()) > 1e-5)
        throw ValidationError("appended segment breaks chain continuity");
    segs.push_back(seg);
    length_ += seg.length();
}

void PolyCurve::append(const PolyCurve& c) {
    for (const auto& s : c.segs) append(s);
}

std::vector<Point> PolyCurve::sample(double pitch) const {
    std::vector<Point> out;
    for (double s : sample_params(pitch)) out.push_back(point_at(s));
    return out;
}

std::vector<double> PolyCurve::sample_params(double pitch) const {
    std::vector<double> out;
    double len = length_;
    int n = std::max(1, (int)std::ceil(len / std::max(pitch, 1e-9)));
    out.reserve(n + 1);
    for (int i = 0; i <= n; ++i) out.push_back(len * i / n);
    return out;
}

void PolyCurve::validate() const {
    if (segs.empty()) throw ValidationError("empty curve");
    for (const auto& s : segs) s.validate();
    for (size_t i = 0; i + 1 < segs.size(); ++i) {
        if (dist(segs[i].end(), segs[i + 1].start()) > 1e-5)
            throw ValidationError("curve joint discontinuity");
    }
}

Bounds PolyCurve::bounds() const {
    Bounds bb;
    for (const auto& s : segs) bb.expand(s.bounds());
    return bb;
}

int PolygonalDomain::vertex_count() const {
    int n = (int)outer.size();
    for (const auto& h : holes) n += (int)h.size();
    return n;
}

Point PolygonalDomain::vertex(int id) const {
    if (id < (int)outer.size()) return outer[id];
    id -= (int)outer.size();
    for (const auto& h : holes) {
        if (id < (int)h.size()) return h[id];
        id -= (int)h.size();
    }
    throw std::out_of_range("vertex id");
}

void PolygonalDomain::validate() const {
    if (outer.size() < 3) throw ValidationError("outer boundary needs >= 3 vertices");
    if (!polygon_is_simple(outer)) throw ValidationError("outer boundary not simple");
    if (polygon_signed_area(outer) <= 0) throw ValidationError("outer boundary must be CCW");
    for (size_t hi = 0; hi < holes.size(); ++hi) {
        const auto& h = holes[hi];
        if (h.size() < 3) throw ValidationError("hole needs >= 3 vertices");
        if (!polygon_is_simple(h)) throw ValidationError("hole not simple");
        if (polygon_signed_area(h) >= 0) throw ValidationError("holes must be CW");
        for (Point p : h)
            if (!point_in_polygon(p, outer, 0.0))
                throw ValidationError("hole vertex outside outer boundary");
        for (size_t hj = hi + 1; hj < holes.size(); ++hj) {
            for (size_t i = 0; i < h.size(); ++i) {
                Point a = h[i], b = h[(i + 1) % h.size()];
                const auto& g = holes[hj];
                for (size_t j = 0; j < g.size(); ++j) {
                    if (segments_intersect(a, b, g[j], g[(j + 1) % g.size()], 0.0))
                        throw ValidationError("holes intersect");
                }
            }
            if (point_in_polygon(holes[hj][0], h, 0.0) || point_in_polygon(h[0], holes[hj], 0.0))
                throw ValidationError("nested holes");
        }
        for (size_t i = 0; i < h.size(); ++i) {
            Point a = h[i], b = h[(i + 1) % h.size()];
            for (size_t j = 0; j < outer.size(); ++j) {
                if (segments_intersect(a, b, outer[j], outer[(j + 1) % outer.size()], 0.0))
                    throw ValidationError("hole intersects outer boundary");
            }
        }
    }
}

bool PolygonalDomain::contains(Point p, double eps) const {
    if (!point_in_polygon(p, outer, eps)) return false;
    for (const auto& h : holes) {
        // closed free space: boundary points belong to P
        bool on_boundary = false;
        for (size_t i = 0; i < h.size(); ++i) {
            if (point_segment_distance(p, h[i], h[(i + 1) % h.size()]) <= eps) {
                on_boundary = true;
                break;
            }
        }
        if (!on_boundary && point_in_polygon(p, h, -1.0)) return false;
    }
    return true;
}

Bounds PolygonalDomain::bounds() const {
    Bounds bb;
    for (Point p : outer) bb.expand(p);
    return bb;
}

BoundaryIndex::BoundaryIndex(const PolygonalDomain& d) {
    int vid = 0;
    auto add_loop = [&](const std::vector<Point>& loop) {
        int base = vid;
        int n = (int)loop.size();
        for (int i = 0; i < n; ++i) {
            Edge e;
            e.a = loop[i];
            e.b = loop[(i + 1) % n];
            e.va = base + i;
            e.vb = base + (i + 1) % n;
            edges.push_back(e);
            verts_.push_back(loop[i]);
        }
        vid += n;
    };
    add_loop(d.outer);
    for (const auto& h : d.holes) add_loop(h);
    build_grid();
}

void BoundaryIndex::build_grid() {
    for (const auto& e : edges) {
        bb_.expand(e.a);
        bb_.expand(e.b);
    }
    bb_.pad(1.0);
    double w = bb_.max_x - bb_.min_x, h = bb_.max_y - bb_.min_y;
    cell_ = std::max(0.75, std::max(w, h) / 128.0);
    nx_ = std::max(1, (int)std::ceil(w / cell_));
    ny_ = std::max(1, (int)std::ceil(h / cell_));
    grid_.assign((size_t)nx_ * ny_, {});
    for (int ei = 0; ei < (int)edges.size(); ++ei) {
        const auto& e = edges[ei];
        int x0 = (int)((std::min(e.a.x, e.b.x) - bb_.min_x) / cell_);
        int x1 = (int)((std::max(e.a.x, e.b.x) - bb_.min_x) / cell_);
        int y0 = (int)((std::min(e.a.y, e.b.y) - bb_.min_y) / cell_);
        int y1 = (int)((std::max(e.a.y, e.b.y) - bb_.min_y) / cell_);
        x0 = std::clamp(x0, 0, nx_ - 1); x1 = std::clamp(x1, 0, nx_ - 1);
        y0 = std::clamp(y0, 0, ny_ - 1); y1 = std::clamp(y1, 0, ny_ - 1);
        for (int iy = y0; iy <= y1; ++iy)
            for (int ix = x0; ix <= x1; ++ix) grid_[cell_index(ix, iy)].push_back(ei);
    }
}

double BoundaryIndex::brute_distance(Point p, int* edge_out) const {
    double best = std::numeric_limits<double>::max();
    int bi = -1;
    for (int i = 0; i < (int)edges.size(); ++i) {
        double d = point_segment_distance(p, edges[i].a, edges[i].b);
        if (d < best) { best = d; bi = i; }
    }
    if (edge_out) *edge_out = bi;
    return best;
}

double BoundaryIndex::distance(Point p) const {
    if (edges.empty()) return std::numeric_limits<double>::max();
    int cx = std::clamp((int)((p.x - bb_.min_x) / cell_), 0, nx_ - 1);
    int cy = std::clamp((int)((p.y - bb_.min_y) / cell_), 0, ny_ - 1);
    double best = std::numeric_limits<double>::max();
    int max_ring = std::max(nx_, ny_);
    for (int ring = 0; ring <= max_ring; ++ring) {
        // once the ring's nearest possible distance exceeds current best, stop
        if (best < std::numeric_limits<double>::max() && (ring - 1) * cell_ > best) break;
        bool any = false;
        for (int iy = cy - ring; iy <= cy + ring; ++iy) {
            if (iy < 0 || iy >= ny_) continue;
            for (int ix = cx - ring; ix <= cx + ring; ++ix) {
                if (ix < 0 || ix >= nx_) continue;
                if (std::max(std::abs(ix - cx), std::abs(iy - cy)) != ring) continue;
                any = true;
                for (int ei : grid_[cell_index(ix, iy)]) {
                    double d = point_segment_distance(p, edges[ei].a, edges[ei].b);
                    best = std::min(best, d);
                }
            }
        }
        if (!any && ring > 0 && best < std::numeric_limits<double>::max()) break;
    }
    if (best == std::numeric_limits<double>::max()) return brute_distance(p, nullptr);
    return best;
}

Point BoundaryIndex::nearest(Point p) const {
    int ei = -1;
    brute_distance(p, &ei);
    return closest_point_on_segment(p, edges[ei].a, edges[ei].b);
}

std::pair<double, int> BoundaryIndex::nearest_vertex(Point p) const {
    double best = std::numeric_limits<double>::max();
    int bi = -1;
    for (int i = 0; i < (int)verts_.size(); ++i) {
        double d = dist(p, verts_[i]);
        if (d < best) { best = d; bi = i; }
    }
    return {best, bi};
}

}  // namespace snk
