#include "snakeroute/offset.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "snakeroute/parallel.hpp"

namespace snk {

namespace {

struct Candidate {
    ArcSeg geo;
    int vertex_id = -1;          // generating vertex for arcs
    std::vector<double> cuts;    // split params (arc length from start)
};

// Is angle phi inside the arc's swept range (tolerance in radians)?
bool angle_in_arc(const ArcSeg& arc, double phi, double tol) {
    double rel = phi - arc.a0;
    if (arc.sweep >= 0) {
        while (rel < -tol) rel += 2 * kPi;
        while (rel > 2 * kPi - tol && rel > arc.sweep + tol) rel -= 2 * kPi;
        return rel >= -tol && rel <= arc.sweep + tol;
    }
    while (rel > tol) rel -= 2 * kPi;
    while (rel < -2 * kPi + tol && rel < arc.sweep - tol) rel += 2 * kPi;
    return rel <= tol && rel >= arc.sweep - tol;
}

// Param (arc length from start) of angle phi on an arc, or nullopt.
std::optional<double> arc_param_of_angle(const ArcSeg& arc, double phi, double tol) {
    if (!angle_in_arc(arc, phi, tol)) return std::nullopt;
    double rel = phi - arc.a0;
    if (arc.sweep >= 0) {
        while (rel < 0) rel += 2 * kPi;
        if (rel > arc.sweep) rel = (rel - 2 * kPi < 0) ? 0.0 : arc.sweep;
        return rel * arc.r;
    }
    while (rel > 0) rel -= 2 * kPi;
    if (rel < arc.sweep) rel = (rel + 2 * kPi > 0) ? 0.0 : arc.sweep;
    return -rel * arc.r;
}

std::vector<Point> line_circle_intersections(Point a, Point b, Point c, double r) {
    std::vector<Point> out;
    Vec2 d = b - a;
    double len = d.norm();
    if (len <= 0) return out;
    Vec2 u = d / len;
    double t0 = dot(c - a, u);
    Point foot = a + u * t0;
    double h2 = r * r - dist2(foot, c);
    if (h2 < -1e-12) return out;
    double h = h2 > 0 ? std::sqrt(h2) : 0.0;
    for (double t : {t0 - h, t0 + h}) {
        if (t >= -1e-9 && t <= len + 1e-9) out.push_back(a + u * std::clamp(t, 0.0, len));
        if (h == 0.0) break;
    }
    return out;
}

std::vector<Point> circle_circle_intersections(Point c1, double r1, Point c2, double r2) {
    std::vector<Point> out;
    double d = dist(c1, c2);
    if (d < 1e-12) return out;
    if (d > r1 + r2 + 1e-9 || d < std::abs(r1 - r2) - 1e-9) return out;
    double a = (d * d + r1 * r1 - r2 * r2) / (2 * d);
    double h2 = r1 * r1 - a * a;
    double h = h2 > 0 ? std::sqrt(h2) : 0.0;
    Vec2 u = (c2 - c1) / d;
    Vec2 v = u.perp();
    out.push_back(c1 + u * a + v * h);
    if (h > 0) out.push_back(c1 + u * a - v * h);
    return out;
}

void add_cut(Candidate& c, double s) {
    double len = c.geo.length();
    if (s > 1e-9 && s < len - 1e-9) c.cuts.push_back(s);
}

double param_on_line(const ArcSeg& seg, Point p) {
    Vec2 d = seg.b - seg.a;
    double len = d.norm();
    return dot(p - seg.a, d / len);
}

// Mutual split points between two candidates.
void intersect_candidates(Candidate& x, Candidate& y) {
    const ArcSeg& g = x.geo;
    const ArcSeg& h = y.geo;
    bool gl = g.kind == ArcSeg::Kind::Line, hl = h.kind == ArcSeg::Kind::Line;
    if (gl && hl) {
        Vec2 dg = g.b - g.a, dh = h.b - h.a;
        if (std::abs(cross(dg.unit(), dh.unit())) < 1e-12) {
            // collinear overlap: cut at the overlap interval so coincident
            // sub-pieces line up and can annihilate (zero-width regions)
            if (point_segment_distance(h.a, g.a, g.b) < 1e-9 ||
                point_segment_distance(g.a, h.a, h.b) < 1e-9 ||
                point_segment_distance(h.b, g.a, g.b) < 1e-9) {
                add_cut(x, param_on_line(g, h.a));
                add_cut(x, param_on_line(g, h.b));
                add_cut(y, param_on_line(h, g.a));
                add_cut(y, param_on_line(h, g.b));
            }
            return;
        }
        auto p = segment_intersection_point(g.a, g.b, h.a, h.b);
        if (p) {
            add_cut(x, param_on_line(g, *p));
            add_cut(y, param_on_line(h, *p));
        }
        return;
    }
    if (gl != hl) {
        const ArcSeg& seg = gl ? g : h;
        const ArcSeg& arc = gl ? h : g;
        Candidate& segc = gl ? x : y;
        Candidate& arcc = gl ? y : x;
        for (Point p : line_circle_intersections(seg.a, seg.b, arc.c, arc.r)) {
            double phi = std::atan2(p.y - arc.c.y, p.x - arc.c.x);
            auto sp = arc_param_of_angle(arc, phi, 1e-9);
            if (!sp) continue;
            add_cut(segc, param_on_line(seg, p));
            add_cut(arcc, *sp);
        }
        return;
    }
    if (dist(g.c, h.c) < 1e-12 && std::abs(g.r - h.r) < 1e-12) return;  // same circle
    for (Point p : circle_circle_intersections(g.c, g.r, h.c, h.r)) {
        double pg = std::atan2(p.y - g.c.y, p.x - g.c.x);
        double ph = std::atan2(p.y - h.c.y, p.x - h.c.x);
        auto sg = arc_param_of_angle(g, pg, 1e-9);
        auto sh = arc_param_of_angle(h, ph, 1e-9);
        if (sg && sh) {
            add_cut(x, *sg);
            add_cut(y, *sh);
        }
    }
}

struct Piece {
    ArcSeg geo;
    int vertex_id = -1;
    bool used = false;
};

bool pieces_coincide_opposed(const Piece& p, const Piece& q) {
    if (p.geo.kind != ArcSeg::Kind::Line || q.geo.kind != ArcSeg::Kind::Line) return false;
    if (std::abs(p.geo.length() - q.geo.length()) > 1e-6) return false;
    return dist(p.geo.a, q.geo.b) < 1e-6 && dist(p.geo.b, q.geo.a) < 1e-6;
}

}  // namespace

OffsetDomain offset_domain_lazy(const PolygonalDomain& domain, double r) {
    if (!(r > 0)) throw PreconditionError("offset radius must be positive");
    domain.validate();
    OffsetDomain od;
    od.r = r;
    od.domain = domain;
    od.boundary = BoundaryIndex(domain);
    return od;
}

OffsetDomain offset_domain(const PolygonalDomain& domain, double r) {
    OffsetDomain od = offset_domain_lazy(domain, r);

    // Candidate geometry: every edge offset to the interior side, plus a
    // radius-r arc at every reflex turn as seen from the free space.
    std::vector<Candidate> cands;
    int vertex_base = 0;
    auto add_loop = [&](const std::vector<Point>& loop) {
        int n = (int)loop.size();
        for (int i = 0; i < n; ++i) {
            Point u = loop[i], v = loop[(i + 1) % n];
            Vec2 nl = (v - u).unit().perp();
            Candidate c;
            c.geo = ArcSeg::line(u + nl * r, v + nl * r);
            cands.push_back(c);
            // turn at v
            Point w = loop[(i + 2) % n];
            Vec2 d1 = (v - u).unit(), d2 = (w - v).unit();
            if (cross(d1, d2) < -1e-12) {  // right turn: reflex from free space
                double th1 = std::atan2(d1.perp().y, d1.perp().x);
                double th2 = std::atan2(d2.perp().y, d2.perp().x);
                double sweep = th2 - th1;
                while (sweep > 0) sweep -= 2 * kPi;
                if (sweep < -1e-12) {
                    Candidate a;
                    a.geo = ArcSeg::arc(v, r, th1, sweep);
                    a.vertex_id = vertex_base + (i + 1) % n;
                    cands.push_back(a);
                }
            }
        }
        vertex_base += n;
    };
    add_loop(domain.outer);
    for (const auto& h : domain.holes) add_loop(h);

    // Arrangement: split all candidates at mutual intersections.
    for (size_t i = 0; i < cands.size(); ++i) {
        Bounds bi = cands[i].geo.bounds();
        for (size_t j = i + 1; j < cands.size(); ++j) {
            Bounds bj = cands[j].geo.bounds();
            if (bi.min_x > bj.max_x + 1e-9 || bj.min_x > bi.max_x + 1e-9 ||
                bi.min_y > bj.max_y + 1e-9 || bj.min_y > bi.max_y + 1e-9)
                continue;
            intersect_candidates(cands[i], cands[j]);
        }
    }

    std::vector<Piece> pieces;
    for (auto& c : cands) {
        double len = c.geo.length();
        if (len <= 1e-9) continue;
        std::sort(c.cuts.begin(), c.cuts.end());
        std::vector<double> ps{0.0};
        for (double s : c.cuts)
            if (s - ps.back() > 1e-9) ps.push_back(s);
        if (len - ps.back() > 1e-9) ps.push_back(len);
        else ps.back() = len;
        for (size_t k = 0; k + 1 < ps.size(); ++k) {
            Piece p;
            p.geo = c.geo.sub(ps[k], ps[k + 1]);
            p.vertex_id = c.vertex_id;
            pieces.push_back(p);
        }
    }

    // Keep sub-pieces at distance >= r from the whole boundary and inside P.
    std::vector<char> keep(pieces.size(), 0);
    parallel_for((std::ptrdiff_t)pieces.size(), [&](std::ptrdiff_t i) {
        const ArcSeg& g = pieces[i].geo;
        double len = g.length();
        int ns = std::clamp((int)std::ceil(len / 0.05), 3, 15);
        bool ok = true;
        for (int k = 1; k <= ns && ok; ++k) {
            Point p = g.point_at(len * k / (ns + 1));
            if (!od.domain.contains(p, kEpsGeom)) ok = false;
            else if (od.boundary.distance(p) < r - kEpsGeom) ok = false;
        }
        keep[i] = ok ? 1 : 0;
    });
    {
        std::vector<Piece> kept;
        for (size_t i = 0; i < pieces.size(); ++i)
            if (keep[i]) kept.push_back(pieces[i]);
        pieces.swap(kept);
    }

    // Opposed coincident pieces bound a zero-width region; both vanish.
    for (size_t i = 0; i < pieces.size(); ++i) {
        if (pieces[i].used) continue;
        for (size_t j = i + 1; j < pieces.size(); ++j) {
            if (pieces[j].used) continue;
            if (pieces_coincide_opposed(pieces[i], pieces[j])) {
                pieces[i].used = pieces[j].used = true;
                break;
            }
        }
    }
    {
        std::vector<Piece> kept;
        for (auto& p : pieces)
            if (!p.used) kept.push_back(p);
        pieces.swap(kept);
    }

    // Stitch directed pieces into closed loops (free space stays on the left).
    const double stitch_tol = 2e-6;
    auto find_next = [&](Point at) -> int {
        int best = -1;
        double bd = stitch_tol;
        for (int j = 0; j < (int)pieces.size(); ++j) {
            if (pieces[j].used) continue;
            double d = dist(pieces[j].geo.start(), at);
            if (d < bd) { bd = d; best = j; }
        }
        return best;
    };
    for (int i = 0; i < (int)pieces.size(); ++i) {
        if (pieces[i].used) continue;
        std::vector<int> chain{i};
        pieces[i].used = true;
        Point cur = pieces[i].geo.end();
        Point home = pieces[i].geo.start();
        bool closed = false;
        while (true) {
            if (dist(cur, home) < stitch_tol && chain.size() > 1) { closed = true; break; }
            int nx = find_next(cur);
            if (nx < 0) {
                closed = chain.size() > 2 && dist(cur, home) < 1e-4;
                break;
            }
            pieces[nx].used = true;
            chain.push_back(nx);
            cur = pieces[nx].geo.end();
        }
        if (!closed) continue;

        // merge contiguous arc pieces around the same vertex
        std::vector<Piece> merged;
        for (int idx : chain) {
            Piece& p = pieces[idx];
            if (!merged.empty()) {
                Piece& m = merged.back();
                if (m.geo.kind == ArcSeg::Kind::Arc && p.geo.kind == ArcSeg::Kind::Arc &&
                    dist(m.geo.c, p.geo.c) < 1e-9 && std::abs(m.geo.r - p.geo.r) < 1e-9 &&
                    (m.geo.sweep >= 0) == (p.geo.sweep >= 0) &&
                    std::abs(wrap_angle(m.geo.a0 + m.geo.sweep - p.geo.a0)) < 1e-6) {
                    m.geo.sweep += p.geo.sweep;
                    continue;
                }
            }
            merged.push_back(p);
        }
        // a loop may start mid-arc: merge the wraparound pair
        if (merged.size() > 1) {
            Piece& f = merged.front();
            Piece& l = merged.back();
            if (f.geo.kind == ArcSeg::Kind::Arc && l.geo.kind == ArcSeg::Kind::Arc &&
                dist(f.geo.c, l.geo.c) < 1e-9 && std::abs(f.geo.r - l.geo.r) < 1e-9 &&
                (f.geo.sweep >= 0) == (l.geo.sweep >= 0) &&
                std::abs(wrap_angle(l.geo.a0 + l.geo.sweep - f.geo.a0)) < 1e-6) {
                f.geo = ArcSeg::arc(l.geo.c, l.geo.r, l.geo.a0, l.geo.sweep + f.geo.sweep);
                merged.pop_back();
            }
        }
        PolyCurve loop;
        for (auto& m : merged) {
            if (m.geo.length() <= 1e-9) continue;
            loop.segs.push_back(m.geo);
            if (m.geo.kind == ArcSeg::Kind::Arc && std::abs(m.geo.sweep) >= 1e-6) {
                Slide s;
                s.arc = m.geo;
                s.vertex_id = m.vertex_id;
                s.radius = r;
                od.slides.push_back(s);
            }
        }
        loop.recache();
        if (!loop.segs.empty()) od.loops.push_back(std::move(loop));
    }

    std::sort(od.loops.begin(), od.loops.end(), [](const PolyCurve& a, const PolyCurve& b) {
        Point pa = a.start(), pb = b.start();
        return pa.x != pb.x ? pa.x < pb.x : pa.y < pb.y;
    });
    std::sort(od.slides.begin(), od.slides.end(), [](const Slide& a, const Slide& b) {
        if (a.vertex_id != b.vertex_id) return a.vertex_id < b.vertex_id;
        return a.arc.a0 < b.arc.a0;
    });
    return od;
}

bool point_in_offset(Point p, const OffsetDomain& od) {
    if (!od.domain.contains(p, kEpsGeom)) return false;
    return od.boundary.distance(p) >= od.r - kEpsGeom;
}

bool segment_in_offset(Point a, Point b, const OffsetDomain& od, double pitch) {
    double len = dist(a, b);
    int n = std::max(2, (int)std::ceil(len / pitch));
    for (int i = 0; i <= n; ++i) {
        Point p = a + (b - a) * ((double)i / n);
        if (!point_in_offset(p, od)) return false;
    }
    return true;
}

std::vector<ArcSeg> bitangent_candidates(const TangentFeature& a, const TangentFeature& b) {
    std::vector<ArcSeg> out;
    const double atol = 2e-6;  // angular tolerance for tangency-in-slide tests
    auto tangents_point_circle = [&](Point p, const Slide& s, bool point_first) {
        Point c = s.arc.c;
        double r = s.arc.r;
        double d = dist(p, c);
        if (d < r - 1e-12) return;
        double alpha = d > r ? std::acos(std::clamp(r / d, -1.0, 1.0)) : 0.0;
        double base = std::atan2(p.y - c.y, p.x - c.x);
        for (double sgn : {1.0, -1.0}) {
            double phi = base + sgn * alpha;
            if (!angle_in_arc(s.arc, phi, atol)) continue;
            Point t = c + Vec2{r * std::cos(phi), r * std::sin(phi)};
            if (dist(p, t) <= 1e-9) continue;
            out.push_back(point_first ? ArcSeg::line(p, t) : ArcSeg::line(t, p));
            if (alpha == 0.0) break;
        }
    };

    if (std::holds_alternative<Point>(a) && std::holds_alternative<Point>(b)) {
        Point p = std::get<Point>(a), q = std::get<Point>(b);
        if (dist(p, q) > 1e-9) out.push_back(ArcSeg::line(p, q));
        return out;
    }
    if (std::holds_alternative<Point>(a) && std::holds_alternative<Slide>(b)) {
        tangents_point_circle(std::get<Point>(a), std::get<Slide>(b), true);
        return out;
    }
    if (std::holds_alternative<Slide>(a) && std::holds_alternative<Point>(b)) {
        tangents_point_circle(std::get<Point>(b), std::get<Slide>(a), false);
        return out;
    }
    const Slide& s1 = std::get<Slide>(a);
    const Slide& s2 = std::get<Slide>(b);
    Point c1 = s1.arc.c, c2 = s2.arc.c;
    double r1 = s1.arc.r, r2 = s2.arc.r;
    double d = dist(c1, c2);
    if (d < 1e-12) return out;
    double theta = std::atan2(c2.y - c1.y, c2.x - c1.x);
    // outer tangents
    if (d > std::abs(r1 - r2) + 1e-12) {
        double beta = std::acos(std::clamp((r1 - r2) / d, -1.0, 1.0));
        for (double sgn : {1.0, -1.0}) {
            double phi = theta + sgn * beta;
            if (!angle_in_arc(s1.arc, phi, atol) || !angle_in_arc(s2.arc, phi, atol)) continue;
            Point t1 = c1 + Vec2{r1 * std::cos(phi), r1 * std::sin(phi)};
            Point t2 = c2 + Vec2{r2 * std::cos(phi), r2 * std::sin(phi)};
            if (dist(t1, t2) > 1e-9) out.push_back(ArcSeg::line(t1, t2));
        }
    }
    // inner tangents
    if (d > r1 + r2 + 1e-12) {
        double beta = std::acos(std::clamp((r1 + r2) / d, -1.0, 1.0));
        for (double sgn : {1.0, -1.0}) {
            double phi = theta + sgn * beta;
            double phi2 = phi + kPi;
            if (!angle_in_arc(s1.arc, phi, atol) || !angle_in_arc(s2.arc, phi2, atol)) continue;
            Point t1 = c1 + Vec2{r1 * std::cos(phi), r1 * std::sin(phi)};
            Point t2 = c2 + Vec2{r2 * std::cos(phi2), r2 * std::sin(phi2)};
            if (dist(t1, t2) > 1e-9) out.push_back(ArcSeg::line(t1, t2));
        }
    }
    return out;
}

std::vector<ArcSeg> bitangents(const TangentFeature& a, const TangentFeature& b,
                               const OffsetDomain& od) {
    std::vector<ArcSeg> cands = bitangent_candidates(a, b);
    std::vector<ArcSeg> out;
    for (const auto& seg : cands) {
        double pitch = std::max(seg.length() / 100.0, 0.01);
        if (segment_in_offset(seg.a, seg.b, od, pitch)) out.push_back(seg);
    }
    return out;
}

}  // namespace snk
