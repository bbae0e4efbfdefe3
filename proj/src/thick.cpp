#include "snakeroute/thick.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <queue>

#include "snakeroute/parallel.hpp"

namespace snk {

namespace {

// Offset of one chain piece along its left normal (d = +radius) or right
// (d = -radius). A curvature-collapsed arc piece degenerates and is skipped.
std::optional<ArcSeg> offset_piece(const ArcSeg& s, double d) {
    if (s.kind == ArcSeg::Kind::Line) {
        Vec2 n = (s.b - s.a).unit().perp();
        return ArcSeg::line(s.a + n * d, s.b + n * d);
    }
    // CCW arc: left normal points toward the center; CW: away.
    double rr = s.sweep >= 0 ? s.r - d : s.r + d;
    if (rr < 1e-9) return std::nullopt;
    return ArcSeg::arc(s.c, rr, s.a0, s.sweep);
}

PolyCurve offset_curve(const PolyCurve& spine, double d) {
    PolyCurve out;
    for (const auto& s : spine.segs) {
        auto o = offset_piece(s, d);
        if (!o) continue;
        // bridge joint gaps introduced by tangent jumps with arcs around the
        // spine joint (outer side of a kink)
        if (!out.segs.empty()) {
            Point prev = out.segs.back().end();
            Point next = o->start();
            if (dist(prev, next) > 1e-6) {
                Point joint = s.start();
                double a0 = std::atan2(prev.y - joint.y, prev.x - joint.x);
                double a1 = std::atan2(next.y - joint.y, next.x - joint.x);
                double sweep = wrap_angle(a1 - a0);
                if (std::abs(sweep) > 1e-9)
                    out.segs.push_back(ArcSeg::arc(joint, std::abs(d), a0, sweep));
            }
        }
        out.segs.push_back(*o);
    }
    out.recache();
    return out;
}

}  // namespace

PolyCurve ThickPath::boundary() const {
    // CCW: right side forward, front cap, left side backward, rear cap
    PolyCurve b = right;
    b.segs.push_back(cap_end);
    for (auto it = left.segs.rbegin(); it != left.segs.rend(); ++it)
        b.segs.push_back(it->reversed());
    b.segs.push_back(cap_start);
    b.recache();
    return b;
}

ThickPath inflate(const PolyCurve& spine, double radius) {
    if (spine.empty() || spine.length() <= kEpsJoin)
        throw PreconditionError("spine too short to inflate");
    if (!(radius > 0)) throw PreconditionError("inflate radius must be positive");
    ThickPath tp;
    tp.spine = spine;
    tp.radius = radius;
    tp.left = offset_curve(spine, radius);
    tp.right = offset_curve(spine, -radius);
    Vec2 t0 = spine.tangent_at(0.0), t1 = spine.tangent_at(spine.length());
    Vec2 n0 = t0.perp(), n1 = t1.perp();
    // front cap runs right end -> left end around the tip; rear cap closes back
    tp.cap_end = ArcSeg::arc(spine.end(), radius, std::atan2(-n1.y, -n1.x), kPi);
    tp.cap_start = ArcSeg::arc(spine.start(), radius, std::atan2(n0.y, n0.x), kPi);
    return tp;
}

int ribbon_preimage_count(const std::vector<Point>& samples, const std::vector<Vec2>& tangents,
                          const std::vector<double>& params, Point p, double radius,
                          double depth_tol, std::vector<double>* feet) {
    int count = 0;
    double last_foot = -1e18;
    const double merge_window = 4 * (params.size() > 1 ? params[1] - params[0] : 0.01);
    double reach = radius - depth_tol;
    for (size_t k = 0; k + 1 < samples.size(); ++k) {
        double g0 = dot(p - samples[k], tangents[k]);
        double g1 = dot(p - samples[k + 1], tangents[k + 1]);
        if ((g0 > 0 && g1 > 0) || (g0 < 0 && g1 < 0)) continue;
        if (g0 == 0 && g1 == 0) continue;  // degenerate tangency run
        double t = (std::abs(g0) + std::abs(g1)) > 0 ? std::abs(g0) / (std::abs(g0) + std::abs(g1))
                                                     : 0.5;
        Point foot_pt = samples[k] + (samples[k + 1] - samples[k]) * t;
        if (dist(p, foot_pt) > reach) continue;
        double foot_s = params[k] + (params[k + 1] - params[k]) * t;
        if (foot_s - last_foot < merge_window) continue;
        last_foot = foot_s;
        ++count;
        if (feet) feet->push_back(foot_s);
    }
    return count;
}

namespace {

struct Ribbon {
    std::vector<Point> pts;
    std::vector<Vec2> tans;
    std::vector<double> params;
    std::vector<std::array<Point, 4>> quads;  // out_i, out_{i+1}, in_{i+1}, in_i
    bool closed = false;
};

Ribbon build_ribbon(const PolyCurve& spine, double radius) {
    Ribbon rb;
    double len = spine.length();
    double pitch = ribbon_pitch(len);
    int n = std::max(2, (int)std::ceil(len / pitch));
    rb.pts.reserve(n + 1);
    for (int i = 0; i <= n; ++i) {
        double s = len * i / n;
        rb.params.push_back(s);
        rb.pts.push_back(spine.point_at(s));
        rb.tans.push_back(spine.tangent_at(s));
    }
    rb.closed = dist(rb.pts.front(), rb.pts.back()) < 1e-6;
    rb.quads.reserve(n);
    for (int i = 0; i < n; ++i) {
        Vec2 n0 = rb.tans[i].perp() * radius;
        Vec2 n1 = rb.tans[i + 1].perp() * radius;
        rb.quads.push_back({rb.pts[i] + n0, rb.pts[i + 1] + n1, rb.pts[i + 1] - n1,
                            rb.pts[i] - n0});
    }
    return rb;
}

// Sutherland-Hodgman clip of convex-ish quads; inputs are tiny polygons so
// the convex hull of each quad is used (conservative for bowtie samples).
std::vector<Point> convex_hull_pts(std::array<Point, 4> q) {
    std::vector<Point> pts(q.begin(), q.end());
    std::sort(pts.begin(), pts.end(), [](Point a, Point b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    std::vector<Point> hull;
    auto build = [&](auto begin, auto end) {
        size_t base = hull.size();
        for (auto it = begin; it != end; ++it) {
            while (hull.size() >= base + 2 &&
                   cross(hull[hull.size() - 1] - hull[hull.size() - 2],
                         *it - hull[hull.size() - 2]) <= 0)
                hull.pop_back();
            hull.push_back(*it);
        }
        hull.pop_back();
    };
    build(pts.begin(), pts.end());
    build(pts.rbegin(), pts.rend());
    return hull;
}

std::vector<Point> clip_polygon(std::vector<Point> poly, const std::vector<Point>& clip) {
    for (size_t i = 0; i < clip.size() && !poly.empty(); ++i) {
        Point a = clip[i], b = clip[(i + 1) % clip.size()];
        Vec2 e = b - a;
        std::vector<Point> next;
        for (size_t j = 0; j < poly.size(); ++j) {
            Point p = poly[j], q = poly[(j + 1) % poly.size()];
            double dp = cross(e, p - a), dq = cross(e, q - a);
            if (dp >= 0) next.push_back(p);
            if ((dp > 0 && dq < 0) || (dp < 0 && dq > 0)) {
                double t = dp / (dp - dq);
                next.push_back(p + (q - p) * t);
            }
        }
        poly.swap(next);
    }
    return poly;
}

double polygon_area_abs(const std::vector<Point>& poly) {
    if (poly.size() < 3) return 0;
    return std::abs(polygon_signed_area(poly));
}

struct PairResult {
    bool confirmed = false;
    bool contact = false;
    double area = 0;
    double foot1 = 0, foot2 = 0;
};

double hull_gap(const std::vector<Point>& a, const std::vector<Point>& b) {
    double best = std::numeric_limits<double>::max();
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) {
            best = std::min(best, point_segment_distance(a[i], b[j], b[(j + 1) % b.size()]));
            best = std::min(best, point_segment_distance(b[j], a[i], a[(i + 1) % a.size()]));
        }
    return best;
}

PairResult test_quad_pair(const Ribbon& rb, double radius, int i, int j) {
    PairResult res;
    auto hi = convex_hull_pts(rb.quads[i]);
    auto hj = convex_hull_pts(rb.quads[j]);
    if (hi.size() < 3 || hj.size() < 3) return res;
    auto inter = clip_polygon(hi, hj);
    double area = polygon_area_abs(inter);
    double pitch = rb.params.size() > 1 ? rb.params[1] - rb.params[0] : 0.01;
    if (area < 1e-12) {
        if (hull_gap(hi, hj) < std::min(1e-3, pitch / 2)) res.contact = true;
        return res;
    }
    Point centroid{0, 0};
    for (Point p : inter) centroid += p;
    centroid = centroid / (double)inter.size();
    std::vector<double> feet;
    int m = ribbon_preimage_count(rb.pts, rb.tans, rb.params, centroid, radius, kEpsOverlap,
                                  &feet);
    if (m >= 2) {
        res.confirmed = true;
        res.area = area;
        res.foot1 = feet[0];
        res.foot2 = feet[1];
    } else {
        res.contact = true;
    }
    return res;
}

OverlapReport scan_pairs(const Ribbon& rb, double radius,
                         const std::vector<std::pair<int, int>>& cand) {
    OverlapReport rep;
    const size_t block = 4096;
    std::vector<PairResult> results;
    for (size_t base = 0; base < cand.size(); base += block) {
        size_t count = std::min(block, cand.size() - base);
        results.assign(count, {});
        parallel_for((std::ptrdiff_t)count, [&](std::ptrdiff_t k) {
            results[k] = test_quad_pair(rb, radius, cand[base + k].first, cand[base + k].second);
        });
        for (size_t k = 0; k < count; ++k) {
            if (results[k].contact) ++rep.tangential_contacts;
            if (results[k].confirmed) {
                rep.overlapping = true;
                rep.witness = {results[k].foot1, results[k].foot2};
                rep.overlap_area_estimate = results[k].area;
                return rep;
            }
        }
    }
    return rep;
}

bool adjacent_quads(const Ribbon& rb, int i, int j) {
    if (std::abs(i - j) <= 1) return true;
    if (rb.closed) {
        int n = (int)rb.quads.size();
        if ((i == 0 && j == n - 1) || (j == 0 && i == n - 1)) return true;
    }
    return false;
}

}  // namespace

OverlapReport check_overlap(const PolyCurve& spine, double radius) {
    spine.validate();
    Ribbon rb = build_ribbon(spine, radius);
    int n = (int)rb.quads.size();
    // broadphase: uniform grid over quad AABBs
    Bounds bb;
    for (auto& q : rb.quads)
        for (auto& p : q) bb.expand(p);
    bb.pad(0.1);
    double cell = std::max(0.5, radius);
    int nx = std::max(1, (int)std::ceil((bb.max_x - bb.min_x) / cell));
    int ny = std::max(1, (int)std::ceil((bb.max_y - bb.min_y) / cell));
    std::vector<std::vector<int>> grid((size_t)nx * ny);
    auto cell_range = [&](int qi) {
        Bounds qb;
        for (auto& p : rb.quads[qi]) qb.expand(p);
        int x0 = std::clamp((int)((qb.min_x - bb.min_x) / cell), 0, nx - 1);
        int x1 = std::clamp((int)((qb.max_x - bb.min_x) / cell), 0, nx - 1);
        int y0 = std::clamp((int)((qb.min_y - bb.min_y) / cell), 0, ny - 1);
        int y1 = std::clamp((int)((qb.max_y - bb.min_y) / cell), 0, ny - 1);
        return std::array<int, 4>{x0, x1, y0, y1};
    };
    for (int i = 0; i < n; ++i) {
        auto [x0, x1, y0, y1] = cell_range(i);
        for (int iy = y0; iy <= y1; ++iy)
            for (int ix = x0; ix <= x1; ++ix) grid[(size_t)iy * nx + ix].push_back(i);
    }
    std::vector<std::pair<int, int>> cand;
    {
        std::vector<int> last_seen(n, -1);
        for (int i = 0; i < n; ++i) {
            auto [x0, x1, y0, y1] = cell_range(i);
            for (int iy = y0; iy <= y1; ++iy)
                for (int ix = x0; ix <= x1; ++ix)
                    for (int j : grid[(size_t)iy * nx + ix]) {
                        if (j <= i) continue;
                        if (last_seen[j] == i) continue;
                        last_seen[j] = i;
                        if (!adjacent_quads(rb, i, j)) cand.push_back({i, j});
                    }
        }
    }
    std::sort(cand.begin(), cand.end());
    return scan_pairs(rb, radius, cand);
}

OverlapReport check_overlap_serial(const PolyCurve& spine, double radius) {
    spine.validate();
    Ribbon rb = build_ribbon(spine, radius);
    int n = (int)rb.quads.size();
    std::vector<std::pair<int, int>> cand;
    auto qb = [&](int i) {
        Bounds b;
        for (auto& p : rb.quads[i]) b.expand(p);
        return b;
    };
    std::vector<Bounds> boxes(n);
    for (int i = 0; i < n; ++i) boxes[i] = qb(i);
    for (int i = 0; i < n; ++i)
        for (int j = i + 2; j < n; ++j) {
            if (adjacent_quads(rb, i, j)) continue;
            if (boxes[i].min_x > boxes[j].max_x || boxes[j].min_x > boxes[i].max_x ||
                boxes[i].min_y > boxes[j].max_y || boxes[j].min_y > boxes[i].max_y)
                continue;
            cand.push_back({i, j});
        }
    bool saved = parallel_enabled();
    parallel_enabled() = false;
    auto rep = scan_pairs(rb, radius, cand);
    parallel_enabled() = saved;
    return rep;
}

bool spine_feasible(const PolyCurve& spine, const OffsetDomain& od) {
    if (spine.empty()) return false;
    double pitch = ribbon_pitch(spine.length());
    int n = std::max(1, (int)std::ceil(spine.length() / pitch));
    for (int i = 0; i <= n; ++i) {
        if (!point_in_offset(spine.point_at(spine.length() * i / n), od)) return false;
    }
    return true;
}

namespace {

// Graph node anchored on a feature of P^r.
struct ChewNode {
    int feature = -1;  // -1: s, -2: f, >=0: slide index
    double param = 0;  // arc length along the slide
    Point pos;
};

}  // namespace

std::optional<PolyCurve> route_chew(const OffsetDomain& od, Point s, Point f) {
    if (!point_in_offset(s, od))
        throw PreconditionError("start point outside the offset domain");
    if (!point_in_offset(f, od))
        throw PreconditionError("target point outside the offset domain");

    std::vector<ChewNode> nodes;
    auto add_node = [&](int feature, double param, Point pos) {
        for (size_t i = 0; i < nodes.size(); ++i) {
            if (nodes[i].feature == feature && std::abs(nodes[i].param - param) < 1e-9)
                return (int)i;
        }
        nodes.push_back({feature, param, pos});
        return (int)nodes.size() - 1;
    };
    int sid = add_node(-1, 0, s);
    int fid = add_node(-2, 0, f);
    for (int si = 0; si < (int)od.slides.size(); ++si) {
        const ArcSeg& a = od.slides[si].arc;
        add_node(si, 0.0, a.start());
        add_node(si, a.length(), a.end());
    }

    struct EdgeOut {
        int to;
        double cost;
        ArcSeg geo;
    };
    std::vector<std::vector<EdgeOut>> adj;

    auto slide_param_of_point = [&](int si, Point p) {
        const ArcSeg& a = od.slides[si].arc;
        double phi = std::atan2(p.y - a.c.y, p.x - a.c.x);
        double rel = phi - a.a0;
        if (a.sweep >= 0) {
            while (rel < -1e-9) rel += 2 * kPi;
            return std::clamp(rel, 0.0, a.sweep) * a.r;
        }
        while (rel > 1e-9) rel -= 2 * kPi;
        return std::clamp(-rel, 0.0, -a.sweep) * a.r;
    };

    std::vector<std::tuple<int, int, ArcSeg>> tangent_edges;
    auto feature_of = [&](int id) -> TangentFeature {
        if (id == -1) return TangentFeature{s};
        if (id == -2) return TangentFeature{f};
        return TangentFeature{od.slides[id]};
    };
    std::vector<int> fids{-1, -2};
    for (int si = 0; si < (int)od.slides.size(); ++si) fids.push_back(si);
    for (size_t i = 0; i < fids.size(); ++i) {
        for (size_t j = i + 1; j < fids.size(); ++j) {
            for (const auto& seg : bitangents(feature_of(fids[i]), feature_of(fids[j]), od)) {
                int na = fids[i] < 0 ? (fids[i] == -1 ? sid : fid)
                                     : add_node(fids[i], slide_param_of_point(fids[i], seg.a),
                                                seg.a);
                int nb = fids[j] < 0 ? (fids[j] == -1 ? sid : fid)
                                     : add_node(fids[j], slide_param_of_point(fids[j], seg.b),
                                                seg.b);
                tangent_edges.push_back({na, nb, seg});
            }
        }
    }

    adj.resize(nodes.size());
    for (auto& [na, nb, seg] : tangent_edges) {
        double c = seg.length();
        adj[na].push_back({nb, c, seg});
        adj[nb].push_back({na, c, seg.reversed()});
    }
    // slide arc edges between consecutive anchored params
    for (int si = 0; si < (int)od.slides.size(); ++si) {
        std::vector<std::pair<double, int>> on_slide;
        for (int ni = 0; ni < (int)nodes.size(); ++ni)
            if (nodes[ni].feature == si) on_slide.push_back({nodes[ni].param, ni});
        std::sort(on_slide.begin(), on_slide.end());
        const ArcSeg& a = od.slides[si].arc;
        for (size_t k = 0; k + 1 < on_slide.size(); ++k) {
            double p0 = on_slide[k].first, p1 = on_slide[k + 1].first;
            if (p1 - p0 < 1e-9) {
                adj[on_slide[k].second].push_back({on_slide[k + 1].second, 0.0,
                                                   ArcSeg::line(nodes[on_slide[k].second].pos,
                                                                nodes[on_slide[k].second].pos)});
                adj[on_slide[k + 1].second].push_back({on_slide[k].second, 0.0,
                                                       ArcSeg::line(nodes[on_slide[k].second].pos,
                                                                    nodes[on_slide[k].second].pos)});
                continue;
            }
            ArcSeg sub = a.sub(p0, p1);
            adj[on_slide[k].second].push_back({on_slide[k + 1].second, sub.length(), sub});
            adj[on_slide[k + 1].second].push_back({on_slide[k].second, sub.length(),
                                                   sub.reversed()});
        }
    }

    // Dijkstra, deterministic tie-break on node index
    const double INF = std::numeric_limits<double>::max();
    std::vector<double> dd(nodes.size(), INF);
    std::vector<int> pred(nodes.size(), -1);
    std::vector<int> pred_edge(nodes.size(), -1);
    using QE = std::pair<double, int>;
    std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;
    dd[sid] = 0;
    pq.push({0, sid});
    while (!pq.empty()) {
        auto [dv, v] = pq.top();
        pq.pop();
        if (dv > dd[v] + 1e-15) continue;
        if (v == fid) break;
        for (int e = 0; e < (int)adj[v].size(); ++e) {
            const auto& ed = adj[v][e];
            double nd = dv + ed.cost;
            if (nd < dd[ed.to] - 1e-15) {
                dd[ed.to] = nd;
                pred[ed.to] = v;
                pred_edge[ed.to] = e;
                pq.push({nd, ed.to});
            }
        }
    }
    if (dd[fid] == INF) return std::nullopt;

    std::vector<ArcSeg> rev;
    int cur = fid;
    while (cur != sid) {
        int pv = pred[cur];
        const auto& ed = adj[pv][pred_edge[cur]];
        if (ed.geo.length() > 1e-9) rev.push_back(ed.geo);
        cur = pv;
    }
    PolyCurve path;
    for (auto it = rev.rbegin(); it != rev.rend(); ++it) path.segs.push_back(*it);
    if (path.segs.empty()) path.segs.push_back(ArcSeg::line(s, f));
    path.recache();
    return path;
}

std::optional<PolyCurve> route_chew(const PolygonalDomain& domain, Point s, Point f,
                                    double radius) {
    OffsetDomain od = offset_domain(domain, radius);
    return route_chew(od, s, f);
}

}  // namespace snk
