#include "snakeroute/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>

#include "snakeroute/parallel.hpp"

namespace snk {

MultiplicityReport raster_multiplicity(const PolyCurve& spine, double radius, double pitch) {
    MultiplicityReport rep;
    rep.pitch = pitch;
    double len = spine.length();
    if (len <= 0) return rep;
    Bounds bb = spine.bounds();
    bb.pad(radius + 2 * pitch);
    int nx = std::max(1, (int)std::ceil((bb.max_x - bb.min_x) / pitch));
    int ny = std::max(1, (int)std::ceil((bb.max_y - bb.min_y) / pitch));

    int n = std::max(2, (int)std::ceil(len / pitch));
    std::vector<Point> pts(n + 1);
    std::vector<Vec2> nor(n + 1);
    for (int i = 0; i <= n; ++i) {
        double s = len * i / n;
        pts[i] = spine.point_at(s);
        nor[i] = spine.tangent_at(s).perp();
    }

    // Rasterize each perpendicular fiber; a cell is covered by fiber i when
    // the open-ribbon normal segment at sample i passes through it. Fiber
    // tips are pulled in by two cells so tangential contact does not register.
    double half = radius - 2 * pitch;
    if (half <= 0) return rep;
    std::vector<std::vector<int64_t>> hits(n + 1);
    parallel_for((std::ptrdiff_t)n + 1, [&](std::ptrdiff_t i) {
        Point a = pts[i] - nor[i] * half;
        Point b = pts[i] + nor[i] * half;
        int steps = (int)std::ceil(dist(a, b) / (0.5 * pitch));
        auto& out = hits[i];
        int64_t last = -1;
        for (int k = 0; k <= steps; ++k) {
            Point p = a + (b - a) * ((double)k / steps);
            int ix = (int)((p.x - bb.min_x) / pitch);
            int iy = (int)((p.y - bb.min_y) / pitch);
            if (ix < 0 || ix >= nx || iy < 0 || iy >= ny) continue;
            int64_t cell = (int64_t)iy * nx + ix;
            if (cell != last) out.push_back(cell);
            last = cell;
        }
    });

    // (cell, sample) pairs -> per-cell run count over sample indices
    std::vector<std::pair<int64_t, int32_t>> pairs;
    size_t total = 0;
    for (auto& h : hits) total += h.size();
    pairs.reserve(total);
    for (int i = 0; i <= n; ++i)
        for (int64_t c : hits[i]) pairs.push_back({c, i});
    std::sort(pairs.begin(), pairs.end());

    const int gap = std::max(4, (int)std::ceil(0.2 / (len / n)));
    int64_t cells_multi = 0;
    size_t i = 0;
    while (i < pairs.size()) {
        size_t j = i;
        int runs = 0;
        int last_s = std::numeric_limits<int32_t>::min() / 2;
        while (j < pairs.size() && pairs[j].first == pairs[i].first) {
            if (pairs[j].second - last_s > gap) ++runs;
            last_s = pairs[j].second;
            ++j;
        }
        rep.max_multiplicity = std::max(rep.max_multiplicity, runs);
        if (runs >= 2) ++cells_multi;
        i = j;
    }
    rep.overlap_area = (double)cells_multi * pitch * pitch;
    rep.overlapping = rep.overlap_area > 10 * pitch * pitch;
    return rep;
}

std::vector<float> raster_boundary_distance(const PolygonalDomain& domain, const Bounds& bb,
                                            double pitch, int nx, int ny) {
    BoundaryIndex idx(domain);
    std::vector<float> field((size_t)nx * ny);
    parallel_for((std::ptrdiff_t)ny, [&](std::ptrdiff_t iy) {
        for (int ix = 0; ix < nx; ++ix) {
            Point p{bb.min_x + (ix + 0.5) * pitch, bb.min_y + (iy + 0.5) * pitch};
            field[(size_t)iy * nx + ix] = (float)idx.distance(p);
        }
    });
    return field;
}

namespace {

struct Grid {
    Bounds bb;
    double pitch;
    int nx, ny;
    std::vector<char> pass;
    int idx(int ix, int iy) const { return iy * nx + ix; }
    bool ok(int ix, int iy) const {
        return ix >= 0 && ix < nx && iy >= 0 && iy < ny && pass[idx(ix, iy)];
    }
    Point center(int ix, int iy) const {
        return {bb.min_x + (ix + 0.5) * pitch, bb.min_y + (iy + 0.5) * pitch};
    }
};

// Supercover line-of-sight on passable cells.
bool grid_visible(const Grid& g, int x0, int y0, int x1, int y1) {
    int steps = 2 * std::max(std::abs(x1 - x0), std::abs(y1 - y0)) + 1;
    for (int k = 0; k <= steps; ++k) {
        double t = (double)k / steps;
        double fx = x0 + (x1 - x0) * t;
        double fy = y0 + (y1 - y0) * t;
        int ix = (int)std::lround(fx);
        int iy = (int)std::lround(fy);
        if (!g.ok(ix, iy)) return false;
    }
    return true;
}

}  // namespace

std::optional<double> grid_route_oracle(const PolygonalDomain& domain, Point s, Point f,
                                        double radius, double pitch) {
    Grid g;
    g.bb = domain.bounds();
    g.pitch = pitch;
    g.nx = std::max(1, (int)std::ceil((g.bb.max_x - g.bb.min_x) / pitch));
    g.ny = std::max(1, (int)std::ceil((g.bb.max_y - g.bb.min_y) / pitch));
    auto field = raster_boundary_distance(domain, g.bb, pitch, g.nx, g.ny);
    g.pass.assign((size_t)g.nx * g.ny, 0);
    parallel_for((std::ptrdiff_t)g.ny, [&](std::ptrdiff_t iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            size_t id = (size_t)iy * g.nx + ix;
            if (field[id] < radius - 1e-9) continue;
            if (!domain.contains(g.center(ix, (int)iy), 0.0)) continue;
            g.pass[id] = 1;
        }
    });

    auto locate = [&](Point p) -> std::optional<std::pair<int, int>> {
        int cx = (int)((p.x - g.bb.min_x) / pitch);
        int cy = (int)((p.y - g.bb.min_y) / pitch);
        for (int ring = 0; ring <= 3; ++ring)
            for (int dy = -ring; dy <= ring; ++dy)
                for (int dx = -ring; dx <= ring; ++dx)
                    if (g.ok(cx + dx, cy + dy)) return std::pair{cx + dx, cy + dy};
        return std::nullopt;
    };
    auto sc = locate(s);
    auto fc = locate(f);
    if (!sc || !fc) return std::nullopt;

    const double INF = std::numeric_limits<double>::max();
    std::vector<double> dd((size_t)g.nx * g.ny, INF);
    std::vector<int32_t> pred((size_t)g.nx * g.ny, -1);
    using QE = std::pair<double, int>;
    std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;
    int start = g.idx(sc->first, sc->second);
    int goal = g.idx(fc->first, fc->second);
    dd[start] = 0;
    pq.push({0, start});
    const int DX[8] = {1, -1, 0, 0, 1, 1, -1, -1};
    const int DY[8] = {0, 0, 1, -1, 1, -1, 1, -1};
    const double DC[8] = {1, 1, 1, 1, kSqrt2, kSqrt2, kSqrt2, kSqrt2};
    while (!pq.empty()) {
        auto [dv, v] = pq.top();
        pq.pop();
        if (dv > dd[v]) continue;
        if (v == goal) break;
        int vx = v % g.nx, vy = v / g.nx;
        for (int k = 0; k < 8; ++k) {
            int ux = vx + DX[k], uy = vy + DY[k];
            if (!g.ok(ux, uy)) continue;
            // forbid diagonal corner cutting
            if (DX[k] != 0 && DY[k] != 0 && (!g.ok(vx + DX[k], vy) || !g.ok(vx, vy + DY[k])))
                continue;
            int u = g.idx(ux, uy);
            double nd = dv + DC[k] * pitch;
            if (nd < dd[u]) {
                dd[u] = nd;
                pred[u] = v;
                pq.push({nd, u});
            }
        }
    }
    if (dd[goal] == INF) return std::nullopt;

    std::vector<std::pair<int, int>> cells;
    for (int v = goal; v != -1; v = pred[v]) cells.push_back({v % g.nx, v / g.nx});
    std::reverse(cells.begin(), cells.end());

    // chord correction: greedy line-of-sight shortcutting on the grid path
    std::vector<std::pair<int, int>> way;
    size_t i = 0;
    way.push_back(cells[0]);
    while (i + 1 < cells.size()) {
        size_t j = cells.size() - 1;
        while (j > i + 1 &&
               !grid_visible(g, cells[i].first, cells[i].second, cells[j].first, cells[j].second))
            --j;
        way.push_back(cells[j]);
        i = j;
    }
    // rubber-band polish: slide interior waypoints within their neighborhood
    // while both adjacent chords stay passable
    auto plen = [&](const std::vector<std::pair<int, int>>& w) {
        double t = 0;
        for (size_t k = 0; k + 1 < w.size(); ++k)
            t += dist(g.center(w[k].first, w[k].second), g.center(w[k + 1].first, w[k + 1].second));
        return t;
    };
    for (int pass = 0; pass < 60; ++pass) {
        bool improved = false;
        for (size_t k = 1; k + 1 < way.size(); ++k) {
            auto [px, py] = way[k];
            auto [ax, ay] = way[k - 1];
            auto [bx, by] = way[k + 1];
            double cur = dist(g.center(ax, ay), g.center(px, py)) +
                         dist(g.center(px, py), g.center(bx, by));
            int bestx = px, besty = py;
            for (int dy = -2; dy <= 2; ++dy)
                for (int dx = -2; dx <= 2; ++dx) {
                    int qx = px + dx, qy = py + dy;
                    if (!g.ok(qx, qy)) continue;
                    double cand = dist(g.center(ax, ay), g.center(qx, qy)) +
                                  dist(g.center(qx, qy), g.center(bx, by));
                    if (cand < cur - 1e-12 && grid_visible(g, ax, ay, qx, qy) &&
                        grid_visible(g, qx, qy, bx, by)) {
                        cur = cand;
                        bestx = qx;
                        besty = qy;
                    }
                }
            if (bestx != px || besty != py) {
                way[k] = {bestx, besty};
                improved = true;
            }
        }
        // drop waypoints made redundant by visibility
        std::vector<std::pair<int, int>> pruned{way.front()};
        for (size_t k = 1; k + 1 < way.size(); ++k) {
            auto& a = pruned.back();
            auto& b = way[k + 1];
            if (!grid_visible(g, a.first, a.second, b.first, b.second)) pruned.push_back(way[k]);
        }
        pruned.push_back(way.back());
        if (pruned.size() < way.size()) {
            way.swap(pruned);
            improved = true;
        }
        if (!improved) break;
        (void)plen;
    }
    double total = 0;
    // true endpoints replace the snapped cells at both ends
    std::vector<Point> wpts;
    wpts.push_back(s);
    for (size_t k = 1; k + 1 < way.size(); ++k) wpts.push_back(g.center(way[k].first, way[k].second));
    wpts.push_back(f);
    for (size_t k = 0; k + 1 < wpts.size(); ++k) total += dist(wpts[k], wpts[k + 1]);
    return total;
}

}  // namespace snk
