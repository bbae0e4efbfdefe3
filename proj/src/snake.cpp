#include "snakeroute/snake.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "snakeroute/parallel.hpp"

namespace snk {

int layer_bound(double ell) {
    if (!(ell > 0)) throw PreconditionError("snake length must be positive");
    return std::max(1, (int)std::ceil(ell / (2 * kPi - 2) - 1e-12));
}

Snake Snake::initial(Point s, Vec2 dir0, double ell, const OffsetDomain& od) {
    if (!point_in_offset(s, od)) throw PreconditionError("start point outside P^1");
    Vec2 back = dir0.unit() * -1.0;
    double step = kTautPitch;
    std::vector<Point> pts{s};
    double len = 0;
    while (len + step <= ell + 1e-12) {
        Point nxt = pts.back() + back * step;
        if (!point_in_offset(nxt, od)) break;
        pts.push_back(nxt);
        len += step;
    }
    if (pts.size() < 2) {
        // squeeze in at least a token body
        Point nxt = s + back * std::min(step, ell);
        if (!point_in_offset(nxt, od))
            throw PreconditionError("no clearance behind the start point");
        pts.push_back(nxt);
    }
    Snake sn;
    sn.spine = PolyCurve::from_points(pts);
    sn.ell = ell;
    return sn;
}

namespace {

std::vector<Point> dense_points(const PolyCurve& c, double pitch) {
    return c.sample(pitch);
}

std::vector<Point> resample_uniform(const std::vector<Point>& pts, double pitch) {
    std::vector<double> cum{0};
    for (size_t i = 0; i + 1 < pts.size(); ++i) cum.push_back(cum.back() + dist(pts[i], pts[i + 1]));
    double total = cum.back();
    if (total <= pitch) return {pts.front(), pts.back()};
    int n = std::max(2, (int)std::round(total / pitch));
    std::vector<Point> out;
    out.reserve(n + 1);
    size_t k = 0;
    for (int i = 0; i <= n; ++i) {
        double s = total * i / n;
        while (k + 1 < cum.size() && cum[k + 1] < s) ++k;
        if (k + 1 >= cum.size()) {
            out.push_back(pts.back());
            continue;
        }
        double seg = cum[k + 1] - cum[k];
        double t = seg > 0 ? (s - cum[k]) / seg : 0;
        out.push_back(pts[k] + (pts[k + 1] - pts[k]) * t);
    }
    return out;
}

double polyline_length(const std::vector<Point>& pts) {
    double t = 0;
    for (size_t i = 0; i + 1 < pts.size(); ++i) t += dist(pts[i], pts[i + 1]);
    return t;
}

// Uniform hash grid over the current spine samples, for clearance queries.
struct PointGrid {
    double cell = 2.0;
    std::unordered_map<int64_t, std::vector<int>> cells;
    static int64_t key(int ix, int iy) { return ((int64_t)ix << 32) ^ (uint32_t)iy; }
    void build(const std::vector<Point>& pts) {
        cells.clear();
        for (int i = 0; i < (int)pts.size(); ++i) {
            int ix = (int)std::floor(pts[i].x / cell), iy = (int)std::floor(pts[i].y / cell);
            cells[key(ix, iy)].push_back(i);
        }
    }
    template <typename Fn>
    void near(Point p, Fn&& fn) const {
        int ix = (int)std::floor(p.x / cell), iy = (int)std::floor(p.y / cell);
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                auto it = cells.find(key(ix + dx, iy + dy));
                if (it == cells.end()) continue;
                for (int j : it->second) fn(j);
            }
    }
};

// Push a point to distance >= r from the boundary, on the free-space side.
Point project_free(Point p, const OffsetDomain& od) {
    double d = od.boundary.distance(p);
    if (d >= od.r && od.domain.contains(p, kEpsGeom)) return p;
    Point q = od.boundary.nearest(p);
    Vec2 dir = (p - q);
    if (dir.norm() < 1e-12) dir = Vec2{1, 0};
    dir = dir.unit();
    Point c1 = q + dir * od.r;
    if (od.domain.contains(c1, kEpsGeom) && od.boundary.distance(c1) >= od.r - 1e-6) return c1;
    Point c2 = q - dir * od.r;
    if (od.domain.contains(c2, kEpsGeom) && od.boundary.distance(c2) >= od.r - 1e-6) return c2;
    return c1;  // best effort; the feasibility check will catch real failures
}

struct TautSolver {
    const OffsetDomain& od;
    std::vector<Point> pts;
    double pitch = kTautPitch;
    int sweeps_used = 0;

    explicit TautSolver(const OffsetDomain& d) : od(d) {}

    // Self-clearance applies to sample pairs far apart along the spine whose
    // connecting segment midpoint stays inside P^1 (pairs bridged through an
    // inflated obstacle are the same wrap and exempt).
    bool clearance_pair(const std::vector<Point>& p, int i, int j) const {
        if (std::abs(i - j) * pitch <= kPi) return false;
        Point mid = (p[i] + p[j]) * 0.5;
        if (od.boundary.distance(mid) < od.r - kLayerTol) return false;
        return true;
    }

    double sweep(const PointGrid& grid, double lambda, const std::vector<char>* mask = nullptr) {
        int n = (int)pts.size();
        std::vector<Point> next(pts.size());
        next[0] = pts[0];
        next[n - 1] = pts[n - 1];
        std::vector<Point> cur = pts;
        parallel_for(n - 2, [&](std::ptrdiff_t ii) {
            int i = (int)ii + 1;
            if (mask && !(*mask)[i]) {
                next[i] = cur[i];
                return;
            }
            Point target = cur[i] + ((cur[i - 1] + cur[i + 1]) * 0.5 - cur[i]) * lambda;
            // clearance repulsion accumulated one-sided (symmetric over the sweep)
            Vec2 push{0, 0};
            grid.near(cur[i], [&](int j) {
                if (!clearance_pair(cur, i, j)) return;
                double d = dist(cur[i], cur[j]);
                if (d >= 2.0 - 1e-3 || d < 1e-9) return;
                push += (cur[i] - cur[j]).unit() * (0.5 * (2.0 - d) * 0.5);
            });
            target += push;
            next[i] = project_free(target, od);
        });
        double maxd = 0;
        for (int i = 0; i < n; ++i) maxd = std::max(maxd, dist(next[i], pts[i]));
        pts.swap(next);
        return maxd;
    }

    // Relax only samples within `reach` of the anchor; the rest stay put.
    double relax_near(Point anchor, double reach, int max_sweeps, double eps) {
        double maxd = 0;
        PointGrid grid;
        std::vector<char> mask(pts.size(), 0);
        for (int it = 0; it < max_sweeps; ++it) {
            if (it % 6 == 0) {
                grid.build(pts);
                mask.assign(pts.size(), 0);
                for (size_t i = 0; i < pts.size(); ++i)
                    if (dist(pts[i], anchor) <= reach) mask[i] = 1;
            }
            maxd = sweep(grid, 0.7, &mask);
            ++sweeps_used;
            if (maxd < eps) break;
        }
        return maxd;
    }

    // Replace pts[i..j] by the straight chord when it is feasible and clear.
    bool try_shortcut(int i, int j, const PointGrid& grid) {
        Point a = pts[i], b = pts[j];
        double chord = dist(a, b);
        double along = (j - i) * pitch;
        if (chord >= along - 1e-9) return false;
        int ns = std::max(2, (int)std::ceil(chord / pitch));
        std::vector<Point> repl;
        repl.reserve(ns + 1);
        for (int k = 0; k <= ns; ++k) {
            Point p = a + (b - a) * ((double)k / ns);
            if (!od.domain.contains(p, kEpsGeom) || od.boundary.distance(p) < od.r - kEpsGeom)
                return false;
            repl.push_back(p);
        }
        // keep clearance against the rest of the spine
        for (int k = 1; k + 1 <= ns; ++k) {
            bool bad = false;
            grid.near(repl[k], [&](int q) {
                if (bad || (q >= i && q <= j)) return;
                int approx_idx = i + (int)std::round((double)k / ns * (j - i));
                if (!clearance_pair(pts, approx_idx, q)) return;
                if (dist(repl[k], pts[q]) < 2.0 - 1e-3) bad = true;
            });
            if (bad) return false;
        }
        std::vector<Point> merged(pts.begin(), pts.begin() + i);
        merged.insert(merged.end(), repl.begin(), repl.end());
        merged.insert(merged.end(), pts.begin() + j + 1, pts.end());
        pts = resample_uniform(merged, pitch);
        return true;
    }

    bool shortcut_pass() {
        bool any = false;
        for (int window = (int)pts.size(); window >= 2; window /= 2) {
            PointGrid grid;
            grid.build(pts);
            for (int i = 0; i + 2 < (int)pts.size(); i += std::max(1, window / 2)) {
                int j = std::min(i + window, (int)pts.size() - 1);
                if (j - i < 2) continue;
                if (try_shortcut(i, j, grid)) {
                    any = true;
                    grid.build(pts);
                }
            }
        }
        return any;
    }

    // Relax until displacement falls below eps or the sweep budget runs out.
    double relax(int max_sweeps, double eps) {
        double maxd = 0;
        PointGrid grid;
        for (int it = 0; it < max_sweeps; ++it) {
            if (it % 10 == 0) grid.build(pts);
            maxd = sweep(grid, 0.7);
            ++sweeps_used;
            if ((it + 1) % 40 == 0) {
                pts = resample_uniform(pts, pitch);
                grid.build(pts);
            }
            if (maxd < eps) break;
        }
        return maxd;
    }
};

}  // namespace

PolyCurve taut(const PolyCurve& spine, const OffsetDomain& od) {
    spine.validate();
    double in_len = spine.length();
    TautSolver solver(od);
    solver.pts = resample_uniform(dense_points(spine, kTautPitch / 2), kTautPitch);
    double maxd = 1e9;
    for (int round = 0; round < 8 && solver.sweeps_used < kNTaut; ++round) {
        bool cut = solver.shortcut_pass();
        maxd = solver.relax(std::min(400, kNTaut - solver.sweeps_used), kEpsTaut);
        if (!cut && maxd < kEpsTaut) break;
    }
    if (maxd > 100 * kEpsTaut)
        throw TautFailure("taut relaxation did not converge");
    solver.pts = resample_uniform(solver.pts, kTautPitch);
    PolyCurve out = PolyCurve::from_points(solver.pts);
    if (out.length() > in_len + 1e-6) {
        // a taut input may only shorten; fall back to it on numerical drift
        return spine;
    }
    return out;
}

namespace {

struct BendRun {
    int lo = 0, hi = 0;  // sample index range
};

// Windowed turning angle marks curved runs; straight noise stays below the
// threshold while radius <= 20 arcs clear it.
std::vector<BendRun> curved_runs(const std::vector<Point>& pts) {
    int n = (int)pts.size();
    const int w = 4;
    std::vector<char> curved(n, 0);
    for (int i = w; i + w < n; ++i) {
        Vec2 u = (pts[i] - pts[i - w]).unit();
        Vec2 v = (pts[i + w] - pts[i]).unit();
        double turn = std::abs(std::atan2(cross(u, v), dot(u, v)));
        if (turn > 8e-3 * w) curved[i] = 1;
    }
    // close small gaps, drop tiny runs
    std::vector<BendRun> runs;
    int i = 0;
    while (i < n) {
        if (!curved[i]) { ++i; continue; }
        int j = i;
        while (j + 1 < n && (curved[j + 1] || (j + 3 < n && (curved[j + 2] || curved[j + 3]))))
            ++j;
        if (j - i + 1 >= 3) runs.push_back({i, j});
        i = j + 1;
    }
    return runs;
}

}  // namespace

std::string config_signature(const SnakeConfig& cfg) {
    std::ostringstream os;
    for (const auto& b : cfg.bends) {
        os << 'v' << b.vertex_id << 'L' << b.layer;
        if (b.tailed) os << 't';
        if (b.headed) os << 'h';
        os << ';';
    }
    os << "|H" << cfg.head_contact << "|T" << cfg.tail_contact;
    return os.str();
}

SnakeConfig assign_layers(const Snake& snake, const OffsetDomain& od) {
    SnakeConfig cfg;
    cfg.mouth = snake.mouth();
    cfg.antimouth = snake.antimouth();

    const double pitch = 0.01;
    std::vector<Point> pts = resample_uniform(dense_points(snake.spine, pitch), pitch);
    double step = snake.spine.length() / std::max<size_t>(1, pts.size() - 1);
    auto runs = curved_runs(pts);

    int K = layer_bound(snake.ell);
    int nverts = od.domain.vertex_count();

    struct Raw {
        BendRun run;
        int vertex = -1;
        double wrap_radius = 0;
        double spread = 0;
        int layer = 0;
    };
    std::vector<Raw> raws;
    for (const auto& run : runs) {
        Raw raw;
        raw.run = run;
        double best_spread = std::numeric_limits<double>::max();
        for (int v = 0; v < nverts; ++v) {
            Point vp = od.domain.vertex(v);
            double lo = 1e18, hi = -1e18, sum = 0;
            for (int k = run.lo; k <= run.hi; ++k) {
                double d = dist(pts[k], vp);
                lo = std::min(lo, d);
                hi = std::max(hi, d);
                sum += d;
            }
            double spread = hi - lo;
            if (spread < best_spread) {
                best_spread = spread;
                raw.vertex = v;
                raw.wrap_radius = sum / (run.hi - run.lo + 1);
                raw.spread = spread;
            }
        }
        raws.push_back(raw);
    }

    // recursive layers: layer 1 touches its vertex at distance 1; layer k+1
    // has a length-2 witness segment to a layer-k bend inside the snake body
    PointGrid body;
    body.cell = 1.2;
    body.build(pts);
    auto inside_snake = [&](Point p) {
        bool ok = false;
        body.near(p, [&](int j) {
            if (!ok && dist(p, pts[j]) <= 1.0 + kLayerTol) ok = true;
        });
        return ok;
    };

    int n_raw = (int)raws.size();
    std::vector<int> layer(n_raw, 0);
    for (int i = 0; i < n_raw; ++i) {
        Point vp = od.domain.vertex(raws[i].vertex);
        double dmin = 1e18;
        for (int k = raws[i].run.lo; k <= raws[i].run.hi; ++k)
            dmin = std::min(dmin, dist(pts[k], vp));
        if (std::abs(dmin - 1.0) <= kLayerTol) layer[i] = 1;
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i < n_raw; ++i) {
            if (layer[i] != 0) continue;
            for (int j = 0; j < n_raw && !layer[i]; ++j) {
                if (layer[j] == 0 || layer[j] >= K + 1) continue;
                for (int a = raws[i].run.lo; a <= raws[i].run.hi && !layer[i]; a += 2) {
                    for (int b = raws[j].run.lo; b <= raws[j].run.hi; b += 2) {
                        double d = dist(pts[a], pts[b]);
                        if (std::abs(d - 2.0) > kLayerTol) continue;
                        bool witness = true;
                        for (int m = 1; m < 5 && witness; ++m) {
                            Point q = pts[a] + (pts[b] - pts[a]) * (m / 5.0);
                            if (!inside_snake(q)) witness = false;
                        }
                        if (witness) {
                            layer[i] = layer[j] + 1;
                            changed = true;
                            break;
                        }
                    }
                }
            }
        }
    }

    double total_len = snake.spine.length();
    for (int i = 0; i < n_raw; ++i) {
        if (layer[i] == 0)
            throw TautFailure("bend without responsible vertex within the layer bound");
        Bend b;
        b.s_lo = raws[i].run.lo * step;
        b.s_hi = raws[i].run.hi * step;
        b.vertex_id = raws[i].vertex;
        b.layer = layer[i];
        b.fit_center = od.domain.vertex(raws[i].vertex);
        b.fit_radius = raws[i].wrap_radius;
        b.fit_residual = raws[i].spread;
        double reach = 2.0 * (layer[i] - 1);
        double dm = 1e18, dt = 1e18;
        for (int k = raws[i].run.lo; k <= raws[i].run.hi; ++k) {
            dm = std::min(dm, dist(pts[k], cfg.mouth));
            dt = std::min(dt, dist(pts[k], cfg.antimouth));
        }
        // exclude the trivial case of the bend containing the endpoint itself
        b.headed = b.s_lo > 0.5 && dm <= reach + kLayerTol && layer[i] > 1;
        b.tailed = b.s_hi < total_len - 0.5 && dt <= reach + kLayerTol && layer[i] > 1;
        cfg.bends.push_back(b);
    }

    // head/tail boundary contacts
    auto contact_feature = [&](Point p) -> int {
        double d = od.boundary.distance(p);
        if (d > od.r + 0.02) return -1;
        Point q = od.boundary.nearest(p);
        auto [vd, vid] = od.boundary.nearest_vertex(q);
        if (vd < 1e-3) return vid;
        // identify the edge by scanning
        for (int e = 0; e < (int)od.boundary.edges.size(); ++e) {
            if (point_segment_distance(q, od.boundary.edges[e].a, od.boundary.edges[e].b) < 1e-6)
                return kEdgeContactBase + e;
        }
        return -1;
    };
    cfg.head_contact = contact_feature(cfg.mouth);
    cfg.tail_contact = contact_feature(cfg.antimouth);
    Vec2 t0 = snake.spine.tangent_at(0.0);
    cfg.headcut_slope = std::atan2(t0.perp().y, t0.perp().x);
    cfg.signature = config_signature(cfg);
    return cfg;
}

namespace {

// Self-overlap monitor on the relaxed polyline: a pair separated by more
// than pi of arc, closer than the clearance margin, bridged inside P^1.
std::optional<std::pair<int, int>> overlap_pair(const std::vector<Point>& pts, double pitch,
                                                const OffsetDomain& od, double margin) {
    PointGrid grid;
    grid.build(pts);
    for (int i = 0; i < (int)pts.size(); ++i) {
        std::optional<std::pair<int, int>> hit;
        grid.near(pts[i], [&](int j) {
            if (hit || j <= i) return;
            if ((j - i) * pitch <= kPi) return;
            double d = dist(pts[i], pts[j]);
            if (d >= 2.0 - margin) return;
            Point mid = (pts[i] + pts[j]) * 0.5;
            if (od.boundary.distance(mid) < od.r - kLayerTol) return;
            hit = {i, j};
        });
        if (hit) return hit;
    }
    return std::nullopt;
}

}  // namespace

PullResult pull(const Snake& snake, const PolyCurve& gamma, const OffsetDomain& od) {
    gamma.validate();
    if (dist(gamma.start(), snake.mouth()) > 1e-5)
        throw PreconditionError("gamma must start at the snake mouth");
    {
        Vec2 fwd = snake.heading();
        Vec2 g0 = gamma.tangent_at(0.0);
        double ang = std::abs(std::atan2(cross(fwd, g0), dot(fwd, g0)));
        if (ang > kEpsDir && snake.spine.length() > 2 * kTautPitch)
            throw PreconditionError("gamma start tangent disagrees with the spine");
    }

    PullResult res;
    TautSolver solver(od);
    solver.pts = resample_uniform(dense_points(snake.spine, kTautPitch / 2), kTautPitch);
    double len = polyline_length(solver.pts);
    double glen = gamma.length();
    std::string prev_sig;

    auto materialize = [&]() {
        Snake sn;
        sn.spine = PolyCurve::from_points(solver.pts);
        sn.ell = snake.ell;
        return sn;
    };

    int step_count = std::max(1, (int)std::ceil(glen / kDeltaPull));
    for (int k = 1; k <= step_count; ++k) {
        double t = glen * k / step_count;
        Point m = gamma.point_at(t);
        if (dist(m, solver.pts.front()) > 1e-12)
            solver.pts.insert(solver.pts.begin(), m);
        double target_len = std::min(len + glen * (1.0 / step_count), snake.ell);

        solver.relax_near(m, 5.0, 12, kEpsTaut * 10);
        if (k % 16 == 0) solver.relax(40, kEpsTaut * 2);

        // truncate the tail at the target length
        std::vector<Point>& p = solver.pts;
        double acc = 0;
        size_t cut = p.size() - 1;
        for (size_t i = 0; i + 1 < p.size(); ++i) {
            double d = dist(p[i], p[i + 1]);
            if (acc + d >= target_len) {
                double tfrac = (target_len - acc) / d;
                p[i + 1] = p[i] + (p[i + 1] - p[i]) * tfrac;
                cut = i + 1;
                break;
            }
            acc += d;
        }
        p.resize(cut + 1);
        if ((k % 8) == 0) p = resample_uniform(p, kTautPitch);
        len = polyline_length(p);

        PullStep st;
        st.gamma_s = t;
        st.mouth = m;
        st.length = len;

        // containment check at the discrete tolerance
        std::string violation;
        for (const Point& q : p) {
            if (!od.domain.contains(q, kEpsGeom) ||
                od.boundary.distance(q) < od.r - 10 * kEpsTaut - 2e-3) {
                violation = "outside-domain";
                break;
            }
        }
        if (violation.empty()) {
            if (overlap_pair(p, kTautPitch, od, 0.08)) violation = "overlap";
        }
        std::string sig;
        if (violation.empty()) {
            try {
                Snake cur = materialize(t);
                sig = assign_layers(cur, od).signature;
            } catch (const TautFailure&) {
                violation = "taut-failure";
            }
        }
        st.feasible = violation.empty();
        st.signature = sig;
        res.trajectory.push_back(st);
        if (!violation.empty()) {
            res.feasible = false;
            res.first_violation = {t, violation};
            res.final_snake = materialize(t);
            return res;
        }
        prev_sig = sig;
    }

    // settle and run the full-strength overlap check on the final spine
    solver.relax(200, kEpsTaut);
    solver.pts = resample_uniform(solver.pts, kTautPitch);
    res.final_snake = materialize(glen);
    auto rep = check_overlap(res.final_snake.spine, 1.0);
    if (rep.overlapping) {
        res.feasible = false;
        res.first_violation = {glen, "overlap"};
    }
    return res;
}

}  // namespace snk
