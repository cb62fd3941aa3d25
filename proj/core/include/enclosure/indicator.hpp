#pragma once

#include <memory>

#include "enclosure/cgo.hpp"
#include "enclosure/fem.hpp"

namespace enclosure {

/// One indicator evaluation with its diagnostic decomposition.
struct IndicatorSample {
    double d = 0.0;
    double h = 0.0;
    Complex E{0.0, 0.0};
    double absE = 0.0;
    double energyD = 0.0;   // inclusion integral of the u0 decomposition
    double energyW = 0.0;   // full-coefficient gradient energy of w
    double l2w = 0.0;       // k^2 ||w||^2
    /// Magnitude of the terms whose difference forms E; the scale against
    /// which the numerical floor is judged. Not serialized.
    double energyScale = 0.0;
};

/// Shared mesh, assembled systems and factorizations for repeated indicator
/// evaluations; safe for concurrent use across boundary data.
class IndicatorContext {
public:
    IndicatorContext(const Mesh& mesh, const MaterialConfig& material);

    const Mesh& mesh() const { return mesh_; }
    const MaterialConfig& material() const { return material_; }
    const FemSystem& system(CoefficientSet set) const {
        return set == CoefficientSet::Full ? full_ : background_;
    }

    /// Solves with both coefficient sets and evaluates E; d and h are stamped
    /// into the sample for bookkeeping.
    IndicatorSample evaluate(const BoundaryField& f, double d = 0.0, double h = 0.0) const;

    /// Scattered-field evaluation for probe data: u0 is represented as the
    /// analytic probe plus a small correction driven by the cutoff band, and
    /// w is solved from its inclusion-supported load. Unlike evaluate(), the
    /// discretization error stays relative to each field's own scale, so the
    /// exponentially small indicator survives on the decay side of the sweep.
    IndicatorSample evaluate_probe(const ConeFrame& frame, const WaveNumbers& waves,
                                   const ProbeParams& base, double d, double h) const;

    /// (u, u0) pair for the same Dirichlet data.
    std::pair<FemSolution, FemSolution> solve_pair(const BoundaryField& f) const;

private:
    const Mesh& mesh_;
    MaterialConfig material_;
    FemSystem full_;
    FemSystem background_;
    Eigen::SparseMatrix<double> jumpStiffness_;  // K_D, supported on inclusion elements
    std::unique_ptr<DirichletSolver> solverFull_;
    std::unique_ptr<DirichletSolver> solverBg_;
};

/// Convenience one-shot form; assembles and factorizes internally.
IndicatorSample indicator_E(const Mesh& mesh, const MaterialConfig& material,
                            const BoundaryField& f);

/// Right-hand sides of the two energy identities, evaluated by elementwise
/// quadrature with w = u - u0.
Complex identity_via_background(const Mesh& mesh, const MaterialConfig& material, const FemSolution& u,
                    const FemSolution& u0);
Complex identity_via_total(const Mesh& mesh, const MaterialConfig& material, const FemSolution& u,
                    const FemSolution& u0);

struct IndicatorBounds {
    double upper = 0.0;
    double lower = 0.0;
};

/// Upper and lower energy bounds on Re E under the strong convexity condition.
IndicatorBounds indicator_bounds(const Mesh& mesh, const MaterialConfig& material,
                               const FemSolution& u, const FemSolution& u0);

}  // namespace enclosure
