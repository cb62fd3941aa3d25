#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "enclosure/report.hpp"

using namespace enclosure;

namespace {

ReconstructionResult tiny_result() {
    ReconstructionResult r;
    DirectionEstimate dir;
    dir.frame = {{0, 0}, 1, 0.0};
    dir.sStar = 3.3;
    dir.dStar = 1.0 / 3.3;
    dir.detected = true;
    dir.carveThreshold = 3.3;
    dir.bisectionTrace = {{0.26, Classification::Decay, -0.2},
                          {0.34, Classification::Growth, 0.4}};
    dir.touchingCurve = {{3.3, -0.5}, {3.3, 0.0}, {3.3, 0.5}};
    r.directions.push_back(dir);
    r.rateChecks.push_back({{0.34, 0.5, 0.6, 0.1667, false}});

    SweepResult sweep;
    sweep.frame = dir.frame;
    sweep.d = 0.3;
    for (double h : {0.25, 0.2, 0.16, 0.128}) {
        IndicatorSample s;
        s.d = 0.3;
        s.h = h;
        s.E = {1.5, 0.0};
        s.absE = 1.5;
        s.energyD = 1.0;
        s.energyW = 0.25;
        s.l2w = 0.125;
        sweep.samples.push_back(s);
    }
    r.sweeps.push_back(sweep);

    r.carveout.nx = 2;
    r.carveout.ny = 2;
    r.carveout.x0 = 2.0;
    r.carveout.y0 = -1.0;
    r.carveout.dx = 1.0;
    r.carveout.dy = 1.0;
    r.carveout.mask = {0, 1, 1, 0};
    return r;
}

}  // namespace

TEST_SUITE_BEGIN("report");

TEST_CASE("sweep CSV carries the pinned header and one row per sample") {
    std::ostringstream os;
    write_sweep_csv(tiny_result().sweeps, os);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    CHECK(header == "N,theta0,apex_x,apex_y,d,h,re_E,im_E,abs_E,energyD,energyW,l2w");
    int rows = 0;
    std::string line;
    while (std::getline(is, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 4);
    CHECK(os.str().find("0.29999999999999999") != std::string::npos);  // full precision
}

TEST_CASE("reconstruction JSON exposes directions and the carve grid") {
    const std::string text = reconstruction_json(tiny_result());
    const auto j = nlohmann::json::parse(text);
    REQUIRE(j.contains("directions"));
    REQUIRE(j["directions"].size() == 1);
    CHECK(j["directions"][0]["N"] == 1);
    CHECK(j["directions"][0]["s_star"] == doctest::Approx(3.3));
    CHECK(j["directions"][0]["d_star"] == doctest::Approx(1.0 / 3.3));
    CHECK(j["directions"][0]["bisection"].size() == 2);
    CHECK(j["directions"][0]["slope_checks"].size() == 1);
    CHECK(j["carveout"]["grid"]["nx"] == 2);
    CHECK(j["carveout"]["mask"].size() == 4);
}

TEST_CASE("SVG plot is well formed and shows the pieces") {
    RunConfig cfg;
    cfg.material.inclusions.push_back({DiscShape{{3.0, 0.2}, 0.3}, 0.0, 2.0});
    cfg.cones.push_back({{0, 0}, 1, 0.0});
    const std::string svg = reconstruction_svg(cfg, tiny_result());
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("<circle") != std::string::npos);   // domain
    CHECK(svg.find("<path") != std::string::npos);     // inclusion + curve
    CHECK(svg.find("<rect") != std::string::npos);     // carve cells
    CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("byte-stable double formatting") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-2.5e-17) == "-2.4999999999999999e-17");
    // %.17g round-trips every double exactly
    CHECK(std::stod(format_double(0.30000000000000004)) == 0.30000000000000004);
}

TEST_SUITE_END();
