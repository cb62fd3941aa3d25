#include "enclosure/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <stdexcept>

#include "enclosure/cgo.hpp"

namespace enclosure {

namespace {

constexpr double kPi = std::numbers::pi;

double signed_area(const Point& a, const Point& b, const Point& c) {
    return 0.5 * ((b.x1 - a.x1) * (c.x2 - a.x2) - (c.x1 - a.x1) * (b.x2 - a.x2));
}

void push_ccw(std::vector<std::array<int, 3>>& tris, const std::vector<Point>& nodes, int a,
              int b, int c) {
    if (signed_area(nodes[a], nodes[b], nodes[c]) < 0.0) std::swap(b, c);
    tris.push_back({a, b, c});
}

// One-level red refinement of the marked triangles with green closure.
void refine_marked(Mesh& mesh, std::vector<char>& marked) {
    const int nt = mesh.triangle_count();

    // Promote triangles that would end up with two or three split edges.
    std::set<std::pair<int, int>> splitEdges;
    auto edge_key = [](int a, int b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
    bool changed = true;
    while (changed) {
        changed = false;
        splitEdges.clear();
        for (int t = 0; t < nt; ++t) {
            if (!marked[t]) continue;
            const auto& tri = mesh.triangles[t];
            for (int e = 0; e < 3; ++e) splitEdges.insert(edge_key(tri[e], tri[(e + 1) % 3]));
        }
        for (int t = 0; t < nt; ++t) {
            if (marked[t]) continue;
            const auto& tri = mesh.triangles[t];
            int nsplit = 0;
            for (int e = 0; e < 3; ++e)
                if (splitEdges.count(edge_key(tri[e], tri[(e + 1) % 3]))) ++nsplit;
            if (nsplit >= 2) {
                marked[t] = 1;
                changed = true;
            }
        }
    }

    std::map<std::pair<int, int>, int> midpoint;
    auto midpoint_of = [&](int a, int b) {
        const auto key = edge_key(a, b);
        auto it = midpoint.find(key);
        if (it != midpoint.end()) return it->second;
        const Point m{0.5 * (mesh.nodes[a].x1 + mesh.nodes[b].x1),
                      0.5 * (mesh.nodes[a].x2 + mesh.nodes[b].x2)};
        const int id = int(mesh.nodes.size());
        mesh.nodes.push_back(m);
        midpoint.emplace(key, id);
        return id;
    };

    std::vector<std::array<int, 3>> newTris;
    newTris.reserve(mesh.triangles.size() * 2);
    for (int t = 0; t < nt; ++t) {
        const auto [a, b, c] = mesh.triangles[t];
        if (marked[t]) {
            const int ab = midpoint_of(a, b), bc = midpoint_of(b, c), ca = midpoint_of(c, a);
            push_ccw(newTris, mesh.nodes, a, ab, ca);
            push_ccw(newTris, mesh.nodes, ab, b, bc);
            push_ccw(newTris, mesh.nodes, ca, bc, c);
            push_ccw(newTris, mesh.nodes, ab, bc, ca);
        } else {
            int splitE = -1;
            const std::array<int, 3> v = {a, b, c};
            for (int e = 0; e < 3; ++e)
                if (splitEdges.count(edge_key(v[e], v[(e + 1) % 3]))) splitE = e;
            if (splitE < 0) {
                newTris.push_back({a, b, c});
            } else {
                const int p = v[splitE], q = v[(splitE + 1) % 3], o = v[(splitE + 2) % 3];
                const int m = midpoint_of(p, q);
                push_ccw(newTris, mesh.nodes, p, m, o);
                push_ccw(newTris, mesh.nodes, m, q, o);
            }
        }
    }
    mesh.triangles = std::move(newTris);
}

}  // namespace

double Mesh::triangle_area(int t) const {
    const auto& tri = triangles[t];
    return signed_area(nodes[tri[0]], nodes[tri[1]], nodes[tri[2]]);
}

Point Mesh::centroid(int t) const {
    const auto& tri = triangles[t];
    return {(nodes[tri[0]].x1 + nodes[tri[1]].x1 + nodes[tri[2]].x1) / 3.0,
            (nodes[tri[0]].x2 + nodes[tri[1]].x2 + nodes[tri[2]].x2) / 3.0};
}

bool Mesh::is_boundary_node(int n) const {
    return std::find(boundaryNodes.begin(), boundaryNodes.end(), n) != boundaryNodes.end();
}

double Mesh::boundary_segment_length(int b) const {
    const int n = int(boundaryNodes.size());
    return dist(nodes[boundaryNodes[b]], nodes[boundaryNodes[(b + 1) % n]]);
}

Mesh generate_mesh(const DomainSpec& domain, const MaterialConfig& material, double meshSize,
                   bool refineInclusionBoundary) {
    if (!(meshSize > 0.0)) throw std::invalid_argument("generate_mesh requires meshSize > 0");
    if (!(domain.radius > 0.0)) throw std::invalid_argument("domain radius must be positive");

    Mesh mesh;
    mesh.meshSize = meshSize;

    const double R = domain.radius;
    const int nRings = std::max(1, int(std::ceil(R / meshSize)));
    const double dr = R / nRings;

    // Spiderweb layout: ring j carries 6j nodes, so arcs stay near dr and
    // consecutive rings share every sixth angle.
    std::vector<std::vector<int>> rings(nRings + 1);
    mesh.nodes.push_back(domain.center);
    rings[0] = {0};
    for (int j = 1; j <= nRings; ++j) {
        const double r = j * dr;
        const int n = 6 * j;
        rings[j].resize(n);
        for (int i = 0; i < n; ++i) {
            const double phi = 2.0 * kPi * i / n;
            rings[j][i] = int(mesh.nodes.size());
            mesh.nodes.push_back(
                {domain.center.x1 + r * std::cos(phi), domain.center.x2 + r * std::sin(phi)});
        }
    }

    // Center fan.
    {
        const auto& ring1 = rings[1];
        const int n = int(ring1.size());
        for (int i = 0; i < n; ++i)
            push_ccw(mesh.triangles, mesh.nodes, 0, ring1[i], ring1[(i + 1) % n]);
    }

    // Zipper between consecutive rings, advancing greedily along the shorter
    // diagonal.
    for (int j = 1; j < nRings; ++j) {
        const auto& in = rings[j];
        const auto& out = rings[j + 1];
        const int ni = int(in.size()), no = int(out.size());
        int i = 0, o = 0;
        while (i < ni || o < no) {
            bool advanceOuter;
            if (o == no) {
                advanceOuter = false;
            } else if (i == ni) {
                advanceOuter = true;
            } else {
                const double dInner = dist(mesh.nodes[in[(i + 1) % ni]], mesh.nodes[out[o % no]]);
                const double dOuter = dist(mesh.nodes[in[i % ni]], mesh.nodes[out[(o + 1) % no]]);
                advanceOuter = dOuter <= dInner;
            }
            if (advanceOuter) {
                push_ccw(mesh.triangles, mesh.nodes, out[o % no], out[(o + 1) % no], in[i % ni]);
                ++o;
            } else {
                push_ccw(mesh.triangles, mesh.nodes, in[i % ni], in[(i + 1) % ni], out[o % no]);
                ++i;
            }
        }
    }

    mesh.boundaryNodes = rings[nRings];

    // Resolution warnings: an inclusion needs several elements across it.
    for (std::size_t s = 0; s < material.inclusions.size(); ++s) {
        const auto [lo, hi] = material.inclusions[s].bbox();
        const double diam = std::max(hi.x1 - lo.x1, hi.x2 - lo.x2);
        if (diam / meshSize < 8.0)
            mesh.warnings.push_back("inclusion[" + std::to_string(s) +
                                    "] spans fewer than 8 elements across its diameter");
    }

    if (refineInclusionBoundary && !material.inclusions.empty()) {
        std::vector<char> marked(mesh.triangle_count(), 0);
        bool skippedAtBoundary = false;
        std::vector<char> onBoundary(mesh.nodes.size(), 0);
        for (int b : mesh.boundaryNodes) onBoundary[b] = 1;
        for (int t = 0; t < mesh.triangle_count(); ++t) {
            const auto& tri = mesh.triangles[t];
            const int rc = material.region_of(mesh.centroid(t));
            bool mixed = false;
            for (int v = 0; v < 3; ++v)
                if (material.region_of(mesh.nodes[tri[v]]) != rc) mixed = true;
            if (!mixed) continue;
            if (onBoundary[tri[0]] || onBoundary[tri[1]] || onBoundary[tri[2]]) {
                skippedAtBoundary = true;
                continue;
            }
            marked[t] = 1;
        }
        if (skippedAtBoundary)
            mesh.warnings.push_back(
                "inclusion touches the boundary layer; refinement skipped there");
        refine_marked(mesh, marked);
    }

    mesh.elementRegion.resize(mesh.triangle_count());
    for (int t = 0; t < mesh.triangle_count(); ++t)
        mesh.elementRegion[t] = material.region_of(mesh.centroid(t));

    return mesh;
}

void write_mesh(const Mesh& mesh, std::ostream& os) {
    os << "# enclosure2d mesh v1\n";
    os << "# sections: nodes (x1 x2), triangles (i j k region), boundary (node index)\n";
    os << "nodes " << mesh.nodes.size() << "\n";
    char buf[128];
    for (const Point& p : mesh.nodes) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g\n", p.x1, p.x2);
        os << buf;
    }
    os << "triangles " << mesh.triangles.size() << "\n";
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tri = mesh.triangles[t];
        os << tri[0] << ' ' << tri[1] << ' ' << tri[2] << ' ' << mesh.elementRegion[t] << "\n";
    }
    os << "boundary " << mesh.boundaryNodes.size() << "\n";
    for (int b : mesh.boundaryNodes) os << b << "\n";
}

void write_mesh_file(const Mesh& mesh, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open mesh output file: " + path);
    write_mesh(mesh, os);
}

BoundaryField probe_trace(const ConeFrame& frame, const WaveNumbers& waves,
                          const ProbeParams& params, const Mesh& mesh) {
    BoundaryField field;
    field.reserve(mesh.boundaryNodes.size());
    for (int b : mesh.boundaryNodes)
        field.push_back(probe(frame, waves, params, mesh.nodes[b]).value);
    return field;
}

}  // namespace enclosure
