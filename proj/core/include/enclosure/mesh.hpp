#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "enclosure/geometry.hpp"
#include "enclosure/types.hpp"

namespace enclosure {

/// Complex 2-vector data on the ordered boundary nodes.
using BoundaryField = std::vector<CVec2>;

/// Conforming triangulation of the disc domain with region tags.
struct Mesh {
    std::vector<Point> nodes;
    std::vector<std::array<int, 3>> triangles;   // counterclockwise
    std::vector<int> boundaryNodes;              // ordered around the circle
    std::vector<int> elementRegion;              // -1 background, else inclusion index
    double meshSize = 0.0;
    std::vector<std::string> warnings;

    int node_count() const { return int(nodes.size()); }
    int triangle_count() const { return int(triangles.size()); }
    double triangle_area(int t) const;
    Point centroid(int t) const;
    bool is_boundary_node(int n) const;

    /// Length of the boundary polyline segment after boundary node b.
    double boundary_segment_length(int b) const;
};

/// Quasi-uniform triangulation of the disc with equally spaced boundary nodes;
/// elements tagged by centroid membership. Optional single-level red/green
/// refinement of elements crossing an inclusion boundary.
Mesh generate_mesh(const DomainSpec& domain, const MaterialConfig& material, double meshSize,
                   bool refineInclusionBoundary = false);

void write_mesh(const Mesh& mesh, std::ostream& os);
void write_mesh_file(const Mesh& mesh, const std::string& path);

struct WaveNumbers;
struct ProbeParams;

/// Probe trace f_{d,h} = p_{d,h} restricted to the boundary nodes.
BoundaryField probe_trace(const ConeFrame& frame, const WaveNumbers& waves,
                          const ProbeParams& params, const Mesh& mesh);

}  // namespace enclosure
