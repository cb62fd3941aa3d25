#include "enclosure/indicator.hpp"

#include <cmath>
#include <stdexcept>

namespace enclosure {

namespace {

struct ElementTerms {
    double area;
    double lambdaD, muD;   // jumps (zero on background elements)
    double lambda, mu;     // total coefficients
    ElementDeriv du, du0, dw;
};

// |dev eps|^2 for a complex strain (e11, e12, e22).
double dev_norm2(Complex e11, Complex e12, Complex e22, Complex div) {
    const Complex d11 = e11 - 0.5 * div;
    const Complex d22 = e22 - 0.5 * div;
    return std::norm(d11) + std::norm(d22) + 2.0 * std::norm(e12);
}

double eps_norm2(const ElementDeriv& d) {
    return std::norm(d.e11) + std::norm(d.e22) + 2.0 * std::norm(d.e12);
}

template <typename F>
void for_each_element(const Mesh& mesh, const MaterialConfig& material, const FemSolution& u,
                      const FemSolution& u0, F&& f) {
    std::vector<CVec2> w(u.values.size());
    for (std::size_t n = 0; n < w.size(); ++n) w[n] = u.values[n] - u0.values[n];
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        ElementTerms e;
        e.area = mesh.triangle_area(t);
        const int r = mesh.elementRegion[t];
        e.lambdaD = r >= 0 ? material.inclusions[r].lambdaD : 0.0;
        e.muD = r >= 0 ? material.inclusions[r].muD : 0.0;
        e.lambda = material.lambda0 + e.lambdaD;
        e.mu = material.mu0 + e.muD;
        e.du = element_deriv(mesh, u.values, t);
        e.du0 = element_deriv(mesh, u0.values, t);
        e.dw = element_deriv(mesh, w, t);
        f(t, e, w);
    }
}

double mass_norm2(const Mesh& mesh, const std::vector<CVec2>& w) {
    double q = 0.0;
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tri = mesh.triangles[t];
        const double area = mesh.triangle_area(t);
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                const double m = area / 12.0 * (a == b ? 2.0 : 1.0);
                q += m * std::real(w[tri[a]].u1 * std::conj(w[tri[b]].u1) +
                                   w[tri[a]].u2 * std::conj(w[tri[b]].u2));
            }
        }
    }
    return q;
}

}  // namespace

IndicatorContext::IndicatorContext(const Mesh& mesh, const MaterialConfig& material)
    : mesh_(mesh), material_(material) {
    full_ = assemble(mesh_, material_, CoefficientSet::Full);
    background_ = assemble(mesh_, material_, CoefficientSet::Background);
    jumpStiffness_ = full_.stiffness - background_.stiffness;
    jumpStiffness_.prune([](int, int, double v) { return v != 0.0; });
    solverFull_ = std::make_unique<DirichletSolver>(mesh_, full_);
    solverBg_ = std::make_unique<DirichletSolver>(mesh_, background_);
}

std::pair<FemSolution, FemSolution> IndicatorContext::solve_pair(const BoundaryField& f) const {
    return {solverFull_->solve(f), solverBg_->solve(f)};
}

IndicatorSample IndicatorContext::evaluate(const BoundaryField& f, double d, double h) const {
    const auto [u, u0] = solve_pair(f);

    // E = u0^H K_D u0 - w^H (K - k^2 M) w; equal to the difference of the two
    // boundary energies by Galerkin orthogonality of the zero-trace field w,
    // but free of the large cancellation between the gross energies.
    double termD = 0.0;        // tr(sigma_D(u0) grad conj(u0)) over the inclusions
    double termWGrad = 0.0;    // full-coefficient gradient energy of w
    double energyD = 0.0;      // same inclusion integral in its isotropic split
    double energyW = 0.0;      // (lambda+mu)|div w|^2 + 2 mu |dev eps w|^2
    std::vector<CVec2> wField(u.values.size());
    for (std::size_t n = 0; n < wField.size(); ++n) wField[n] = u.values[n] - u0.values[n];

    for_each_element(mesh_, material_, u, u0, [&](int, const ElementTerms& e,
                                                  const std::vector<CVec2>&) {
        if (e.muD != 0.0 || e.lambdaD != 0.0) {
            termD += e.area * (e.lambdaD * std::norm(e.du0.div) + 2.0 * e.muD * eps_norm2(e.du0));
            energyD += e.area * ((e.lambdaD + e.muD) * std::norm(e.du0.div) +
                                 2.0 * e.muD *
                                     dev_norm2(e.du0.e11, e.du0.e12, e.du0.e22, e.du0.div));
        }
        termWGrad += e.area * (e.lambda * std::norm(e.dw.div) + 2.0 * e.mu * eps_norm2(e.dw));
        energyW += e.area * ((e.lambda + e.mu) * std::norm(e.dw.div) +
                             2.0 * e.mu * dev_norm2(e.dw.e11, e.dw.e12, e.dw.e22, e.dw.div));
    });

    const double k2 = material_.k * material_.k;
    const double l2w = k2 * mass_norm2(mesh_, wField);
    const double termW = termWGrad - l2w;

    IndicatorSample s;
    s.d = d;
    s.h = h;
    s.E = Complex(termD - termW, 0.0);
    s.absE = std::abs(s.E);
    s.energyD = energyD;
    s.energyW = energyW;
    s.l2w = l2w;
    s.energyScale = std::abs(termD) + std::abs(termW);
    return s;
}

IndicatorSample indicator_E(const Mesh& mesh, const MaterialConfig& material,
                            const BoundaryField& f) {
    const IndicatorContext ctx(mesh, material);
    return ctx.evaluate(f);
}

IndicatorSample IndicatorContext::evaluate_probe(const ConeFrame& frame,
                                                 const WaveNumbers& waves,
                                                 const ProbeParams& base, double d,
                                                 double h) const {
    ProbeParams params = base;
    params.d = d;
    params.h = h;

    const int nt = mesh_.triangle_count();
    const int nn = mesh_.node_count();

    // Elements where the cutoff transitions: there the probe fails to solve
    // the background system and drives the correction e = u0 - p.
    std::vector<double> nodePhi(nn, -1.0);
    auto phi_at_node = [&](int n) {
        if (nodePhi[n] < 0.0) nodePhi[n] = cutoff(frame, params, mesh_.nodes[n]);
        return nodePhi[n];
    };
    std::vector<char> quadNode(nn, 0);
    bool anySupport = false;
    for (int t = 0; t < nt; ++t) {
        const auto& tri = mesh_.triangles[t];
        double lo = 1.0, hi = 0.0;
        for (int v = 0; v < 3; ++v) {
            const double p = phi_at_node(tri[v]);
            lo = std::min(lo, p);
            hi = std::max(hi, p);
        }
        if (hi > 0.0) anySupport = true;
        if (hi > 0.0 && lo < 1.0)
            for (int v = 0; v < 3; ++v) quadNode[tri[v]] = 1;
    }

    IndicatorSample out;
    out.d = d;
    out.h = h;
    if (!anySupport) return out;  // probe vanishes on the whole domain

    // rhs_a[dof] = a_0(p, hat_dof), integrated with the mid-edge rule over the
    // band elements and their one-element halo (the sum telescopes to zero on
    // hats fully inside the exact-solution region).
    std::vector<CVec2> rhsA(nn, CVec2{});
    const double k2 = material_.k * material_.k;
    for (int t = 0; t < nt; ++t) {
        const auto& tri = mesh_.triangles[t];
        if (!quadNode[tri[0]] && !quadNode[tri[1]] && !quadNode[tri[2]]) continue;
        const double area = mesh_.triangle_area(t);

        // P1 hat gradients
        const Point p0 = mesh_.nodes[tri[0]], p1 = mesh_.nodes[tri[1]], p2 = mesh_.nodes[tri[2]];
        const double det = 2.0 * area;
        const double gb[3] = {(p1.x2 - p2.x2) / det, (p2.x2 - p0.x2) / det,
                              (p0.x2 - p1.x2) / det};
        const double gc[3] = {(p2.x1 - p1.x1) / det, (p0.x1 - p2.x1) / det,
                              (p1.x1 - p0.x1) / det};

        const Point mids[3] = {{0.5 * (p0.x1 + p1.x1), 0.5 * (p0.x2 + p1.x2)},
                               {0.5 * (p1.x1 + p2.x1), 0.5 * (p1.x2 + p2.x2)},
                               {0.5 * (p2.x1 + p0.x1), 0.5 * (p2.x2 + p0.x2)}};
        // hat values at the mid-edge points
        const double hatAt[3][3] = {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}};

        for (int q = 0; q < 3; ++q) {
            const ProbeDeriv pd = probe_with_gradient(frame, waves, params, mids[q]);
            if (pd.zero) continue;
            const double w = area / 3.0;
            const Complex div = pd.g11 + pd.g22;
            // sigma0(p) entries
            const Complex s11 = material_.lambda0 * div + 2.0 * material_.mu0 * pd.g11;
            const Complex s22 = material_.lambda0 * div + 2.0 * material_.mu0 * pd.g22;
            const Complex s12 = material_.mu0 * (pd.g12 + pd.g21);
            for (int a = 0; a < 3; ++a) {
                const double hv = hatAt[q][a];
                rhsA[tri[a]].u1 +=
                    w * (s11 * gb[a] + s12 * gc[a] - k2 * pd.value.u1 * hv);
                rhsA[tri[a]].u2 +=
                    w * (s12 * gb[a] + s22 * gc[a] - k2 * pd.value.u2 * hv);
            }
        }
    }

    // a_0(e, v) = -a_0(p, v) for interior v
    for (CVec2& v : rhsA) v = Complex(-1.0, 0.0) * v;
    const FemSolution e = solverBg_->solve_interior_load(rhsA);

    // u0 = p + e on the inclusion elements (exact probe plus the correction)
    std::vector<CVec2> u0(nn, CVec2{});
    std::vector<char> dNode(nn, 0);
    for (int t = 0; t < nt; ++t) {
        if (mesh_.elementRegion[t] < 0) continue;
        for (int v = 0; v < 3; ++v) dNode[mesh_.triangles[t][v]] = 1;
    }
    for (int n = 0; n < nn; ++n) {
        if (!dNode[n]) continue;
        u0[n] = probe(frame, waves, params, mesh_.nodes[n]).value + e.values[n];
    }

    // w from its inclusion-supported load: A_full w = -K_D u0
    const int ndof = 2 * nn;
    Eigen::VectorXd u0Re = Eigen::VectorXd::Zero(ndof), u0Im = Eigen::VectorXd::Zero(ndof);
    for (int n = 0; n < nn; ++n) {
        if (!dNode[n]) continue;
        u0Re[2 * n] = u0[n].u1.real();
        u0Im[2 * n] = u0[n].u1.imag();
        u0Re[2 * n + 1] = u0[n].u2.real();
        u0Im[2 * n + 1] = u0[n].u2.imag();
    }
    const Eigen::VectorXd kdRe = jumpStiffness_ * u0Re;
    const Eigen::VectorXd kdIm = jumpStiffness_ * u0Im;
    std::vector<CVec2> wLoad(nn, CVec2{});
    for (int n = 0; n < nn; ++n) {
        wLoad[n].u1 = -Complex(kdRe[2 * n], kdIm[2 * n]);
        wLoad[n].u2 = -Complex(kdRe[2 * n + 1], kdIm[2 * n + 1]);
    }
    const FemSolution wSol = solverFull_->solve_interior_load(wLoad);

    // E per the energy identity: inclusion integral of u0 minus the
    // full-coefficient w energy plus the k^2 mass term.
    double energyD = 0.0, energyW = 0.0;
    for (int t = 0; t < nt; ++t) {
        const double area = mesh_.triangle_area(t);
        const int r = mesh_.elementRegion[t];
        const double lambdaD = r >= 0 ? material_.inclusions[r].lambdaD : 0.0;
        const double muD = r >= 0 ? material_.inclusions[r].muD : 0.0;
        if (r >= 0) {
            const ElementDeriv du0 = element_deriv(mesh_, u0, t);
            energyD += area * ((lambdaD + muD) * std::norm(du0.div) +
                               2.0 * muD * dev_norm2(du0.e11, du0.e12, du0.e22, du0.div));
        }
        const ElementDeriv dw = element_deriv(mesh_, wSol.values, t);
        const double lambda = material_.lambda0 + lambdaD;
        const double mu = material_.mu0 + muD;
        energyW += area * ((lambda + mu) * std::norm(dw.div) +
                           2.0 * mu * dev_norm2(dw.e11, dw.e12, dw.e22, dw.div));
    }
    const double l2w = k2 * mass_norm2(mesh_, wSol.values);

    out.E = Complex(energyD - energyW + l2w, 0.0);
    out.absE = std::abs(out.E);
    out.energyD = energyD;
    out.energyW = energyW;
    out.l2w = l2w;
    out.energyScale = std::abs(energyD) + energyW + l2w;
    return out;
}

Complex identity_via_background(const Mesh& mesh, const MaterialConfig& material, const FemSolution& u,
                    const FemSolution& u0) {
    Complex termD{0, 0}, termW{0, 0};
    double l2w = 0.0;
    std::vector<CVec2> wField(u.values.size());
    for (std::size_t n = 0; n < wField.size(); ++n) wField[n] = u.values[n] - u0.values[n];
    l2w = material.k * material.k * mass_norm2(mesh, wField);
    for_each_element(mesh, material, u, u0,
                     [&](int, const ElementTerms& e, const std::vector<CVec2>&) {
                         termD += e.area * ((e.lambdaD + e.muD) * std::norm(e.du0.div) +
                                            2.0 * e.muD * dev_norm2(e.du0.e11, e.du0.e12,
                                                                    e.du0.e22, e.du0.div));
                         termW += e.area * ((e.lambda + e.mu) * std::norm(e.dw.div) +
                                            2.0 * e.mu * dev_norm2(e.dw.e11, e.dw.e12, e.dw.e22,
                                                                   e.dw.div));
                     });
    return termD - termW + l2w;
}

Complex identity_via_total(const Mesh& mesh, const MaterialConfig& material, const FemSolution& u,
                    const FemSolution& u0) {
    Complex termD{0, 0}, termW{0, 0};
    double l2w = 0.0;
    std::vector<CVec2> wField(u.values.size());
    for (std::size_t n = 0; n < wField.size(); ++n) wField[n] = u.values[n] - u0.values[n];
    l2w = material.k * material.k * mass_norm2(mesh, wField);
    const double lambda0 = material.lambda0, mu0 = material.mu0;
    for_each_element(mesh, material, u, u0,
                     [&](int, const ElementTerms& e, const std::vector<CVec2>&) {
                         termD += e.area * ((e.lambdaD + e.muD) * std::norm(e.du.div) +
                                            2.0 * e.muD * dev_norm2(e.du.e11, e.du.e12, e.du.e22,
                                                                    e.du.div));
                         termW += e.area * ((lambda0 + mu0) * std::norm(e.dw.div) +
                                            2.0 * mu0 * dev_norm2(e.dw.e11, e.dw.e12, e.dw.e22,
                                                                  e.dw.div));
                     });
    return termD + termW - l2w;
}

IndicatorBounds indicator_bounds(const Mesh& mesh, const MaterialConfig& material,
                               const FemSolution& u, const FemSolution& u0) {
    double upperD = 0.0, lowerD = 0.0;
    std::vector<CVec2> wField(u.values.size());
    for (std::size_t n = 0; n < wField.size(); ++n) wField[n] = u.values[n] - u0.values[n];
    const double l2w = material.k * material.k * mass_norm2(mesh, wField);

    for_each_element(mesh, material, u, u0,
                     [&](int, const ElementTerms& e, const std::vector<CVec2>&) {
                         if (e.lambdaD == 0.0 && e.muD == 0.0) return;
                         const double divN = std::norm(e.du0.div);
                         const double devN =
                             dev_norm2(e.du0.e11, e.du0.e12, e.du0.e22, e.du0.div);
                         upperD += e.area * ((e.lambdaD + e.muD) * divN + 2.0 * e.muD * devN);
                         lowerD += e.area * ((e.lambdaD + e.muD) * (material.lambda0 + material.mu0) /
                                                 (e.lambda + e.mu) * divN +
                                             2.0 * e.muD * material.mu0 / e.mu * devN);
                     });
    return {upperD + l2w, lowerD - l2w};
}

}  // namespace enclosure
