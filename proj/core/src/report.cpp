#include "enclosure/report.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace enclosure {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_sweep_csv(const std::vector<SweepResult>& sweeps, std::ostream& os) {
    os << "N,theta0,apex_x,apex_y,d,h,re_E,im_E,abs_E,energyD,energyW,l2w\n";
    for (const SweepResult& sweep : sweeps) {
        for (const IndicatorSample& s : sweep.samples) {
            os << sweep.frame.order << ',' << format_double(sweep.frame.axis) << ','
               << format_double(sweep.frame.apex.x1) << ',' << format_double(sweep.frame.apex.x2)
               << ',' << format_double(s.d) << ',' << format_double(s.h) << ','
               << format_double(s.E.real()) << ',' << format_double(s.E.imag()) << ','
               << format_double(s.absE) << ',' << format_double(s.energyD) << ','
               << format_double(s.energyW) << ',' << format_double(s.l2w) << '\n';
        }
    }
}

void write_probe_trace_csv(int coneIndex, double d, double h, const Mesh& mesh,
                           const BoundaryField& f, std::ostream& os, bool header) {
    if (header) os << "cone,d,h,node,x1,x2,re_u1,im_u1,re_u2,im_u2\n";
    for (std::size_t b = 0; b < f.size(); ++b) {
        const Point p = mesh.nodes[mesh.boundaryNodes[b]];
        os << coneIndex << ',' << format_double(d) << ',' << format_double(h) << ',' << b << ','
           << format_double(p.x1) << ',' << format_double(p.x2) << ','
           << format_double(f[b].u1.real()) << ',' << format_double(f[b].u1.imag()) << ','
           << format_double(f[b].u2.real()) << ',' << format_double(f[b].u2.imag()) << '\n';
    }
}

void write_solution_csv(const Mesh& mesh, const std::vector<CVec2>& values, std::ostream& os) {
    os << "node,x1,x2,re_u1,im_u1,re_u2,im_u2\n";
    for (std::size_t n = 0; n < values.size(); ++n) {
        os << n << ',' << format_double(mesh.nodes[n].x1) << ',' << format_double(mesh.nodes[n].x2)
           << ',' << format_double(values[n].u1.real()) << ',' << format_double(values[n].u1.imag())
           << ',' << format_double(values[n].u2.real()) << ','
           << format_double(values[n].u2.imag()) << '\n';
    }
}

std::string reconstruction_json(const ReconstructionResult& result) {
    using json = nlohmann::ordered_json;
    json root;
    root["directions"] = json::array();
    for (std::size_t i = 0; i < result.directions.size(); ++i) {
        const DirectionEstimate& dir = result.directions[i];
        json j;
        j["N"] = dir.frame.order;
        j["theta0"] = dir.frame.axis;
        j["apex"] = {dir.frame.apex.x1, dir.frame.apex.x2};
        j["s_star"] = dir.sStar;
        j["d_star"] = dir.dStar;
        j["detected"] = dir.detected;
        if (!dir.flag.empty()) j["flag"] = dir.flag;
        j["carve_threshold"] = dir.carveThreshold;
        j["bisection"] = json::array();
        for (const BisectionStep& step : dir.bisectionTrace)
            j["bisection"].push_back(
                {{"d", step.d}, {"classification", to_string(step.classification)},
                 {"slope", step.slope}});
        j["slope_checks"] = json::array();
        if (i < result.rateChecks.size()) {
            for (const RateReport& rc : result.rateChecks[i])
                j["slope_checks"].push_back({{"d", rc.d},
                                             {"fitted_rate", rc.fittedRate},
                                             {"reference_rate", rc.referenceRate},
                                             {"relative_deviation", rc.relativeDeviation},
                                             {"touching", rc.touching}});
        }
        j["touching_curve"] = json::array();
        for (const Point& p : dir.touchingCurve) j["touching_curve"].push_back({p.x1, p.x2});
        root["directions"].push_back(j);
    }
    const CarveGrid& g = result.carveout;
    root["carveout"]["grid"] = {{"nx", g.nx}, {"ny", g.ny}, {"x0", g.x0},
                                {"y0", g.y0}, {"dx", g.dx}, {"dy", g.dy}};
    root["carveout"]["mask"] = g.mask;
    return root.dump(1, '\t') + "\n";
}

namespace {

std::string svg_path(const std::vector<Point>& pts, const char* style) {
    if (pts.empty()) return "";
    std::ostringstream os;
    os << "<path d=\"M";
    for (std::size_t i = 0; i < pts.size(); ++i)
        os << (i ? " L" : " ") << format_double(pts[i].x1) << ' ' << format_double(-pts[i].x2);
    os << "\" " << style << "/>\n";
    return os.str();
}

}  // namespace

std::string reconstruction_svg(const RunConfig& config, const ReconstructionResult& result) {
    const DomainSpec& dom = config.domain;
    const double pad = 0.15 * dom.radius;
    const double x0 = dom.center.x1 - dom.radius - pad;
    const double y0 = -(dom.center.x2 + dom.radius + pad);
    const double wh = 2.0 * (dom.radius + pad);

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << format_double(x0) << ' '
       << format_double(y0) << ' ' << format_double(wh) << ' ' << format_double(wh)
       << "\" width=\"800\" height=\"800\">\n";

    // carve-out shading (certified-outside cells)
    const CarveGrid& g = result.carveout;
    if (!g.mask.empty()) {
        os << "<g fill=\"#9ecae1\" stroke=\"none\" opacity=\"0.55\">\n";
        for (int j = 0; j < g.ny; ++j) {
            int i = 0;
            while (i < g.nx) {
                if (!g.mask[std::size_t(j) * g.nx + i]) {
                    ++i;
                    continue;
                }
                int i2 = i;  // merge a horizontal run into one rect
                while (i2 < g.nx && g.mask[std::size_t(j) * g.nx + i2]) ++i2;
                os << "<rect x=\"" << format_double(g.x0 + i * g.dx) << "\" y=\""
                   << format_double(-(g.y0 + (j + 1) * g.dy)) << "\" width=\""
                   << format_double((i2 - i) * g.dx) << "\" height=\"" << format_double(g.dy)
                   << "\"/>\n";
                i = i2;
            }
        }
        os << "</g>\n";
    }

    os << "<circle cx=\"" << format_double(dom.center.x1) << "\" cy=\""
       << format_double(-dom.center.x2) << "\" r=\"" << format_double(dom.radius)
       << "\" fill=\"none\" stroke=\"black\" stroke-width=\"" << format_double(0.01 * dom.radius)
       << "\"/>\n";

    for (const auto& inc : config.material.inclusions) {
        std::vector<Point> pts;
        for (int t = 0; t <= 256; ++t) pts.push_back(inc.boundary_point(t / 256.0));
        os << svg_path(pts, "fill=\"#fdae6b\" fill-opacity=\"0.8\" stroke=\"#e6550d\" "
                            "stroke-width=\"0.005\"");
    }

    for (const DirectionEstimate& dir : result.directions) {
        if (!dir.detected) continue;
        os << svg_path(dir.touchingCurve,
                       "fill=\"none\" stroke=\"#31a354\" stroke-width=\"0.008\"");
    }
    os << "</svg>\n";
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file: " + path);
    os << content;
}

}  // namespace enclosure
