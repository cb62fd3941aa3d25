#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <memory>
#include <mutex>

#include "enclosure/mesh.hpp"

namespace enclosure {

enum class CoefficientSet { Background, Full };

/// Nodal complex displacement field interpolating Dirichlet data exactly.
struct FemSolution {
    std::vector<CVec2> values;
    BoundaryField dirichletData;
    CoefficientSet coefficientSet = CoefficientSet::Background;
};

/// Assembled P1 system A = K - k^2 M (real symmetric), parts kept separately.
struct FemSystem {
    Eigen::SparseMatrix<double> stiffness;
    Eigen::SparseMatrix<double> mass;
    Eigen::SparseMatrix<double> matrix;
    CoefficientSet coefficientSet = CoefficientSet::Background;
    double kSquared = 0.0;
};

/// Assembles K from int lambda (div u)(div v) + 2 mu eps(u):eps(v) dx with
/// per-element constant coefficients, and the vector mass matrix M.
FemSystem assemble(const Mesh& mesh, const MaterialConfig& material, CoefficientSet set);

/// Sparse direct factorization of the interior block, reusable across
/// right-hand sides; real factors serve both parts of complex data.
class DirichletSolver {
public:
    DirichletSolver(const Mesh& mesh, const FemSystem& system);

    FemSolution solve(const BoundaryField& f) const;

    /// Solves A e = load with zero boundary values; load is the assembled
    /// dual vector (one complex pair per node, boundary rows ignored).
    FemSolution solve_interior_load(const std::vector<CVec2>& load) const;

    /// Rough 2-norm condition estimate of the interior block.
    double condition_estimate() const { return condEstimate_; }

private:
    const Mesh& mesh_;
    const FemSystem& system_;
    std::vector<int> interiorOf_;  // dof -> interior index or -1
    std::vector<int> interiorDofs_;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
    double condEstimate_ = 0.0;
    mutable std::mutex solveMutex_;

    Eigen::VectorXd solve_interior(const Eigen::VectorXd& rhs) const;
};

/// One-off Dirichlet solve (factorizes internally).
FemSolution solve_dirichlet(const FemSystem& system, const Mesh& mesh, const BoundaryField& f);

/// int_Omega tr(sigma(u) grad(conj v)) - k^2 u . conj(v) dx with the selected
/// coefficients; the volume realization of the boundary pairing int (Lambda f) . conj(g).
Complex energy_form(const Mesh& mesh, const MaterialConfig& material, CoefficientSet set,
                    const FemSolution& u, const FemSolution& v);

/// Consistent-flux traction sigma(u) nu on the boundary: the discrete residual
/// paired against boundary hat functions, mass-lifted to nodal values.
BoundaryField traction(const Mesh& mesh, const MaterialConfig& material, CoefficientSet set,
                       const FemSolution& u);

/// Per-element constant derivatives of a P1 nodal field.
struct ElementDeriv {
    Complex div;
    Complex e11, e12, e22;  // strain components
    Complex g11, g12, g21, g22;  // full gradient, g_ij = d u_i / d x_j
};
ElementDeriv element_deriv(const Mesh& mesh, const std::vector<CVec2>& values, int t);

/// Mass-matrix L2 norm of a nodal field.
double l2_norm(const FemSystem& system, const std::vector<CVec2>& values);

/// Boundary-mass L2 norm of a boundary field.
double boundary_l2_norm(const Mesh& mesh, const BoundaryField& f);

}  // namespace enclosure
