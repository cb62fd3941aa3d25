#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

#include "enclosure/mesh.hpp"

using namespace enclosure;

namespace {

MaterialConfig reference_material() {
    MaterialConfig mat;
    mat.lambda0 = 2.0;
    mat.mu0 = 1.0;
    mat.k = 1.0;
    return mat;
}

double max_edge_length(const Mesh& mesh) {
    double worst = 0.0;
    for (const auto& tri : mesh.triangles) {
        for (int e = 0; e < 3; ++e)
            worst = std::max(worst, dist(mesh.nodes[tri[e]], mesh.nodes[tri[(e + 1) % 3]]));
    }
    return worst;
}

}  // namespace

TEST_SUITE_BEGIN("mesh");

TEST_CASE("generator contract: edge lengths, areas, boundary placement") {
    const DomainSpec domain{{3.0, 0.0}, 1.0};
    const Mesh mesh = generate_mesh(domain, reference_material(), 0.1);

    CHECK(max_edge_length(mesh) <= 0.15);
    for (int t = 0; t < mesh.triangle_count(); ++t) CHECK(mesh.triangle_area(t) > 0.0);

    const int nb = int(mesh.boundaryNodes.size());
    REQUIRE(nb >= 3);
    for (int b : mesh.boundaryNodes)
        CHECK(std::abs(dist(mesh.nodes[b], domain.center) - domain.radius) <= 1e-12);
    // equal spacing along the circle
    const double expected = mesh.boundary_segment_length(0);
    for (int b = 1; b < nb; ++b)
        CHECK(mesh.boundary_segment_length(b) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("conforming triangulation: every interior edge is shared exactly twice") {
    const DomainSpec domain{{0.0, 0.0}, 1.0};
    const Mesh mesh = generate_mesh(domain, reference_material(), 0.15);
    std::map<std::pair<int, int>, int> edges;
    for (const auto& tri : mesh.triangles) {
        for (int e = 0; e < 3; ++e) {
            const int a = tri[e], b = tri[(e + 1) % 3];
            ++edges[{std::min(a, b), std::max(a, b)}];
        }
    }
    std::set<int> boundary(mesh.boundaryNodes.begin(), mesh.boundaryNodes.end());
    for (const auto& [edge, count] : edges) {
        const bool onBoundary = boundary.count(edge.first) && boundary.count(edge.second);
        if (count == 1) CHECK(onBoundary);
        else CHECK(count == 2);
    }
}

TEST_CASE("no inclusions: every element is background") {
    const Mesh mesh = generate_mesh({{3.0, 0.0}, 1.0}, reference_material(), 0.2);
    for (int r : mesh.elementRegion) CHECK(r == -1);
}

TEST_CASE("elements are tagged by centroid membership") {
    MaterialConfig mat = reference_material();
    mat.inclusions.push_back({DiscShape{{3.0, 0.2}, 0.3}, 0.0, 2.0});
    const Mesh mesh = generate_mesh({{3.0, 0.0}, 1.0}, mat, 0.05);
    int tagged = 0;
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const int expected = mat.region_of(mesh.centroid(t));
        CHECK(mesh.elementRegion[t] == expected);
        if (mesh.elementRegion[t] == 0) ++tagged;
    }
    CHECK(tagged > 0);
    // tagged area approximates the disc area
    double area = 0.0;
    for (int t = 0; t < mesh.triangle_count(); ++t)
        if (mesh.elementRegion[t] == 0) area += mesh.triangle_area(t);
    CHECK(area == doctest::Approx(M_PI * 0.09).epsilon(0.05));
}

TEST_CASE("refinement roughly quadruples the element count") {
    const auto coarse = generate_mesh({{0, 0}, 1.0}, reference_material(), 0.2);
    const auto fine = generate_mesh({{0, 0}, 1.0}, reference_material(), 0.1);
    const double ratio = double(fine.triangle_count()) / coarse.triangle_count();
    CHECK(ratio >= 2.8);
    CHECK(ratio <= 5.2);
}

TEST_CASE("under-resolved inclusions are reported") {
    MaterialConfig mat = reference_material();
    mat.inclusions.push_back({DiscShape{{3.0, 0.2}, 0.05}, 0.0, 1.0});
    const Mesh mesh = generate_mesh({{3.0, 0.0}, 1.0}, mat, 0.1);
    REQUIRE(!mesh.warnings.empty());
    CHECK(mesh.warnings.front().find("fewer than 8 elements") != std::string::npos);
}

TEST_CASE("inclusion-boundary refinement keeps the mesh conforming") {
    MaterialConfig mat = reference_material();
    mat.inclusions.push_back({DiscShape{{3.0, 0.2}, 0.3}, 0.0, 2.0});
    const Mesh plain = generate_mesh({{3.0, 0.0}, 1.0}, mat, 0.1, false);
    const Mesh refined = generate_mesh({{3.0, 0.0}, 1.0}, mat, 0.1, true);
    CHECK(refined.triangle_count() > plain.triangle_count());
    for (int t = 0; t < refined.triangle_count(); ++t) CHECK(refined.triangle_area(t) > 0.0);

    std::map<std::pair<int, int>, int> edges;
    for (const auto& tri : refined.triangles)
        for (int e = 0; e < 3; ++e) {
            const int a = tri[e], b = tri[(e + 1) % 3];
            ++edges[{std::min(a, b), std::max(a, b)}];
        }
    for (const auto& [edge, count] : edges) CHECK(count <= 2);
    CHECK(refined.boundaryNodes == plain.boundaryNodes);
}

TEST_CASE("mesh export carries nodes, elements, regions and the boundary loop") {
    MaterialConfig mat = reference_material();
    mat.inclusions.push_back({DiscShape{{3.0, 0.2}, 0.3}, 0.0, 2.0});
    const Mesh mesh = generate_mesh({{3.0, 0.0}, 1.0}, mat, 0.2);
    std::ostringstream os;
    write_mesh(mesh, os);
    const std::string text = os.str();
    CHECK(text.find("nodes " + std::to_string(mesh.nodes.size())) != std::string::npos);
    CHECK(text.find("triangles " + std::to_string(mesh.triangles.size())) != std::string::npos);
    CHECK(text.find("boundary " + std::to_string(mesh.boundaryNodes.size())) != std::string::npos);
}

TEST_SUITE_END();
