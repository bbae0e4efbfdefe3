#pragma once

#include <optional>

#include "snakeroute/geom.hpp"

namespace snk {

// Rasterized sweep-multiplicity count for a ribbon of half-width `radius`
// around the spine. A cell is covered once per perpendicular-fiber run
// crossing it; cells with two or more runs witness self-overlap.
struct MultiplicityReport {
    int max_multiplicity = 0;
    double overlap_area = 0.0;  // cells with multiplicity >= 2, times pitch^2
    double pitch = 0.0;
    bool overlapping = false;   // overlap_area > 10 * pitch^2
};

MultiplicityReport raster_multiplicity(const PolyCurve& spine, double radius,
                                       double pitch = 0.005);

// Distance-to-boundary field sampled at cell centers; row-major, ny rows of
// nx cells covering `bb`. The hot kernel behind the grid oracles.
std::vector<float> raster_boundary_distance(const PolygonalDomain& domain, const Bounds& bb,
                                            double pitch, int nx, int ny);

// Dense-grid route length oracle: 8-connected Dijkstra over cells of P^radius
// followed by grid-native line-of-sight shortcutting (chord correction).
// nullopt when s and f are not connected on the grid.
std::optional<double> grid_route_oracle(const PolygonalDomain& domain, Point s, Point f,
                                        double radius, double pitch = 0.02);

}  // namespace snk
