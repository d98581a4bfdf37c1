#pragma once

#include <utility>
#include <vector>

#include "opdet/core/rng.hpp"
#include "opdet/core/types.hpp"

namespace opdet::synthgen {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

struct Segment {
    Vec2 p0;
    Vec2 p1;
};

/// Meta parameters for random platform-cluster geometries: how many line
/// segments, their lengths, the discrete set of connection angles, and the
/// spacing of platform points along each segment.
struct ClusterParams {
    std::pair<int, int> n_lines{1, 3};
    std::pair<double, double> line_length_px{24.0, 64.0};
    std::vector<double> connection_angles_deg{45.0, 60.0, 90.0, 120.0, 135.0};
    std::pair<double, double> point_spacing_px{10.0, 18.0};

    void validate() const;  // throws "degenerate cluster params"
};

/// A cluster as a connected set of segments with platform points arranged
/// along them (both endpoints always carry a point). Local coordinates,
/// first segment starts at the origin.
struct ClusterGeometry {
    std::vector<Segment> lines;
    std::vector<Vec2> points;
};

/// Random cluster geometry: first segment at a random heading, each further
/// segment branching from an existing endpoint at a connection angle drawn
/// from the configured set (random sign).
ClusterGeometry gen_cluster_geometry(const ClusterParams& params, Rng& rng);

/// Degenerate single-point geometry for single platforms and wind turbines.
/// Throws for PlatformCluster.
ClusterGeometry gen_point_geometry(ObjectClass cls);

}  // namespace opdet::synthgen
