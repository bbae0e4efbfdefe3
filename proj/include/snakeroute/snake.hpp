#pragma once

#include <string>

#include "snakeroute/thick.hpp"

namespace snk {

// Discretization and solver constants for the pulled-taut model. The
// continuous tail-speed equation is replaced by fixed-step re-tautening.
inline constexpr double kDeltaPull = 0.01;   // mouth step along gamma
inline constexpr double kTautPitch = 0.02;   // spine sample spacing
inline constexpr double kEpsTaut = 1e-5;     // relaxation stop displacement
inline constexpr int kNTaut = 5000;          // max relaxation sweeps
inline constexpr double kEpsDir = 1e-2;      // start tangent agreement (rad)
inline constexpr double kLayerTol = 0.08;    // discrete distance tolerance for layers

// K <= ceil(ell / (2*pi - 2)).
int layer_bound(double ell);

// Spine runs mouth -> antimouth; radius fixed at 1.
struct Snake {
    PolyCurve spine;
    double ell = 0.0;

    Point mouth() const { return spine.start(); }
    Point antimouth() const { return spine.end(); }
    Vec2 heading() const { return spine.tangent_at(0.0) * -1.0; }

    // "Just slithered in": straight spine of length min(ell, clearance)
    // behind s along -dir0, truncated at the offset-domain boundary.
    static Snake initial(Point s, Vec2 dir0, double ell, const OffsetDomain& od);
};

struct Bend {
    double s_lo = 0, s_hi = 0;   // spine arc-length interval
    int vertex_id = -1;          // responsible vertex
    int layer = 0;
    bool tailed = false;
    bool headed = false;
    Point fit_center;
    double fit_radius = 0;
    double fit_residual = 0;
};

// Contact feature id: domain vertex id, or kEdgeContactBase + edge index.
inline constexpr int kEdgeContactBase = 1 << 20;

struct SnakeConfig {
    std::vector<Bend> bends;       // ordered from the mouth
    int head_contact = -1;         // feature touching the head disk, if any
    double headcut_slope = 0.0;
    int tail_contact = -1;
    Point mouth, antimouth;
    std::string signature;
};

// Bend extraction and the recursive layer assignment. Throws TautFailure when
// a curved spine piece has no responsible vertex within the layer bound.
SnakeConfig assign_layers(const Snake& snake, const OffsetDomain& od);

// Canonical key over (vertex, layer, tailed, headed) sequence plus contact
// features; mouth/antimouth poses are excluded.
std::string config_signature(const SnakeConfig& cfg);

// Shortens the spine within its homotopy class in P^1, keeping endpoints
// fixed and respecting clearance 2 between distinct layers.
PolyCurve taut(const PolyCurve& spine, const OffsetDomain& od);

struct PullStep {
    double gamma_s = 0;    // mouth travel along gamma
    Point mouth;
    double length = 0;
    std::string signature;
    bool feasible = true;
};

struct PullResult {
    Snake final_snake;
    std::vector<PullStep> trajectory;
    bool feasible = true;
    std::optional<std::pair<double, std::string>> first_violation;  // (arc length, reason)
};

// Advances the mouth along gamma in kDeltaPull steps, re-tautening and
// validating containment and self-overlap at every step. The spine grows at
// the tail until the full length ell is inside, then the tail retracts.
PullResult pull(const Snake& snake, const PolyCurve& gamma, const OffsetDomain& od);

}  // namespace snk
