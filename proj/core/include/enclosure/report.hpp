#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "enclosure/config.hpp"
#include "enclosure/reconstruct.hpp"

namespace enclosure {

/// Full-precision, locale-independent formatting used by every artifact.
std::string format_double(double v);

/// Sweep table rows, one line per (direction, d, h) sample.
/// Header: N,theta0,apex_x,apex_y,d,h,re_E,im_E,abs_E,energyD,energyW,l2w
void write_sweep_csv(const std::vector<SweepResult>& sweeps, std::ostream& os);

/// Probe trace rows: cone,d,h,node,x1,x2,re_u1,im_u1,re_u2,im_u2
void write_probe_trace_csv(int coneIndex, double d, double h, const Mesh& mesh,
                           const BoundaryField& f, std::ostream& os, bool header);

/// Nodal solution export: node,x1,x2,re_u1,im_u1,re_u2,im_u2
void write_solution_csv(const Mesh& mesh, const std::vector<CVec2>& values, std::ostream& os);

/// Reconstruction JSON: directions (s_star, bisection trace, slope checks)
/// plus the carve-out grid and mask.
std::string reconstruction_json(const ReconstructionResult& result);

/// Domain, inclusions, touching level curves and carve-out shading.
std::string reconstruction_svg(const RunConfig& config, const ReconstructionResult& result);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace enclosure
