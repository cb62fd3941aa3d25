#include "enclosure/fem.hpp"

#include <cmath>
#include <stdexcept>

namespace enclosure {

namespace {

struct P1Element {
    double area;
    double b[3];  // d/dx1 of the hat functions
    double c[3];  // d/dx2
};

P1Element element_geometry(const Mesh& mesh, int t) {
    const auto& tri = mesh.triangles[t];
    const Point p0 = mesh.nodes[tri[0]], p1 = mesh.nodes[tri[1]], p2 = mesh.nodes[tri[2]];
    const double det = (p1.x1 - p0.x1) * (p2.x2 - p0.x2) - (p2.x1 - p0.x1) * (p1.x2 - p0.x2);
    if (det <= 0.0) throw std::runtime_error("degenerate or inverted triangle in mesh");
    P1Element e;
    e.area = 0.5 * det;
    e.b[0] = (p1.x2 - p2.x2) / det;
    e.b[1] = (p2.x2 - p0.x2) / det;
    e.b[2] = (p0.x2 - p1.x2) / det;
    e.c[0] = (p2.x1 - p1.x1) / det;
    e.c[1] = (p0.x1 - p2.x1) / det;
    e.c[2] = (p1.x1 - p0.x1) / det;
    return e;
}

void element_coefficients(const Mesh& mesh, const MaterialConfig& material, CoefficientSet set,
                          int t, double& lambda, double& mu) {
    lambda = material.lambda0;
    mu = material.mu0;
    if (set == CoefficientSet::Full) {
        const int r = mesh.elementRegion[t];
        if (r >= 0) {
            lambda += material.inclusions[r].lambdaD;
            mu += material.inclusions[r].muD;
        }
    }
}

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

FemSystem assemble(const Mesh& mesh, const MaterialConfig& material, CoefficientSet set) {
    const int ndof = 2 * mesh.node_count();
    std::vector<Eigen::Triplet<double>> kTrip, mTrip;
    kTrip.reserve(std::size_t(mesh.triangle_count()) * 36);
    mTrip.reserve(std::size_t(mesh.triangle_count()) * 12);

    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const P1Element el = element_geometry(mesh, t);
        double lambda, mu;
        element_coefficients(mesh, material, set, t, lambda, mu);

        // Voigt strain [e11, e22, 2 e12]; D maps it to stress for the
        // lambda div/2 mu eps form.
        const double D00 = lambda + 2.0 * mu, D01 = lambda, D22 = mu;
        double B[3][6] = {};
        for (int a = 0; a < 3; ++a) {
            B[0][2 * a] = el.b[a];
            B[1][2 * a + 1] = el.c[a];
            B[2][2 * a] = el.c[a];
            B[2][2 * a + 1] = el.b[a];
        }
        const auto& tri = mesh.triangles[t];
        for (int i = 0; i < 6; ++i) {
            const int gi = 2 * tri[i / 2] + (i % 2);
            for (int j = 0; j < 6; ++j) {
                const int gj = 2 * tri[j / 2] + (j % 2);
                // (B^T D B)_ij with the diagonal-block D
                const double v = B[0][i] * (D00 * B[0][j] + D01 * B[1][j]) +
                                 B[1][i] * (D01 * B[0][j] + D00 * B[1][j]) +
                                 B[2][i] * D22 * B[2][j];
                kTrip.emplace_back(gi, gj, v * el.area);
            }
        }
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                const double m = el.area / 12.0 * (a == b ? 2.0 : 1.0);
                mTrip.emplace_back(2 * tri[a], 2 * tri[b], m);
                mTrip.emplace_back(2 * tri[a] + 1, 2 * tri[b] + 1, m);
            }
        }
    }

    FemSystem sys;
    sys.coefficientSet = set;
    sys.kSquared = material.k * material.k;
    sys.stiffness.resize(ndof, ndof);
    sys.stiffness.setFromTriplets(kTrip.begin(), kTrip.end());
    sys.mass.resize(ndof, ndof);
    sys.mass.setFromTriplets(mTrip.begin(), mTrip.end());
    sys.matrix = sys.stiffness - sys.kSquared * sys.mass;
    sys.matrix.makeCompressed();
    return sys;
}

DirichletSolver::DirichletSolver(const Mesh& mesh, const FemSystem& system)
    : mesh_(mesh), system_(system) {
    const int ndof = 2 * mesh.node_count();
    std::vector<char> isBoundary(mesh.node_count(), 0);
    for (int b : mesh.boundaryNodes) isBoundary[b] = 1;

    interiorOf_.assign(ndof, -1);
    for (int n = 0; n < mesh.node_count(); ++n) {
        if (isBoundary[n]) continue;
        interiorOf_[2 * n] = int(interiorDofs_.size());
        interiorDofs_.push_back(2 * n);
        interiorOf_[2 * n + 1] = int(interiorDofs_.size());
        interiorDofs_.push_back(2 * n + 1);
    }
    const int ni = int(interiorDofs_.size());

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(std::size_t(system.matrix.nonZeros()));
    for (int col = 0; col < system.matrix.outerSize(); ++col) {
        const int jc = interiorOf_[col];
        if (jc < 0) continue;
        for (Eigen::SparseMatrix<double>::InnerIterator it(system.matrix, col); it; ++it) {
            const int ir = interiorOf_[int(it.row())];
            if (ir >= 0) trip.emplace_back(ir, jc, it.value());
        }
    }
    Eigen::SparseMatrix<double> aii(ni, ni);
    aii.setFromTriplets(trip.begin(), trip.end());
    aii.makeCompressed();

    lu_.compute(aii);
    if (lu_.info() != Eigen::Success)
        throw std::runtime_error(
            "k^2 near a discrete Dirichlet eigenvalue; choose a different k");

    // Power iteration on A^{-1} (symmetric block) against the 1-norm of A.
    std::uint64_t rng = 0x2545f4914f6cdd1dULL;
    Eigen::VectorXd v(ni);
    for (int i = 0; i < ni; ++i)
        v[i] = (double(splitmix64(rng) >> 11) / 9007199254740992.0) - 0.5;
    v.normalize();
    double invNorm = 0.0;
    for (int iter = 0; iter < 8; ++iter) {
        v = lu_.solve(v);
        invNorm = v.norm();
        if (!(invNorm > 0.0) || !std::isfinite(invNorm)) {
            invNorm = std::numeric_limits<double>::infinity();
            break;
        }
        v /= invNorm;
    }
    double anorm = 0.0;
    for (int col = 0; col < aii.outerSize(); ++col) {
        double c = 0.0;
        for (Eigen::SparseMatrix<double>::InnerIterator it(aii, col); it; ++it)
            c += std::abs(it.value());
        anorm = std::max(anorm, c);
    }
    condEstimate_ = anorm * invNorm;
    if (!std::isfinite(condEstimate_) || condEstimate_ > 1e12)
        throw std::runtime_error(
            "k^2 near a discrete Dirichlet eigenvalue; choose a different k");
}

Eigen::VectorXd DirichletSolver::solve_interior(const Eigen::VectorXd& rhs) const {
    std::lock_guard<std::mutex> lock(solveMutex_);
    return lu_.solve(rhs);
}

FemSolution DirichletSolver::solve(const BoundaryField& f) const {
    if (f.size() != mesh_.boundaryNodes.size())
        throw std::invalid_argument("boundary data length does not match the boundary nodes");
    const int ndof = 2 * mesh_.node_count();
    const int ni = int(interiorDofs_.size());

    Eigen::VectorXd bcRe = Eigen::VectorXd::Zero(ndof), bcIm = Eigen::VectorXd::Zero(ndof);
    for (std::size_t b = 0; b < f.size(); ++b) {
        const int n = mesh_.boundaryNodes[b];
        bcRe[2 * n] = f[b].u1.real();
        bcIm[2 * n] = f[b].u1.imag();
        bcRe[2 * n + 1] = f[b].u2.real();
        bcIm[2 * n + 1] = f[b].u2.imag();
    }
    const Eigen::VectorXd rRe = system_.matrix * bcRe;
    const Eigen::VectorXd rIm = system_.matrix * bcIm;
    Eigen::VectorXd rhsRe(ni), rhsIm(ni);
    for (int i = 0; i < ni; ++i) {
        rhsRe[i] = -rRe[interiorDofs_[i]];
        rhsIm[i] = -rIm[interiorDofs_[i]];
    }
    const Eigen::VectorXd xRe = solve_interior(rhsRe);
    const Eigen::VectorXd xIm = solve_interior(rhsIm);

    FemSolution sol;
    sol.coefficientSet = system_.coefficientSet;
    sol.dirichletData = f;
    sol.values.assign(mesh_.node_count(), CVec2{});
    for (int n = 0; n < mesh_.node_count(); ++n) {
        sol.values[n].u1 = Complex(bcRe[2 * n], bcIm[2 * n]);
        sol.values[n].u2 = Complex(bcRe[2 * n + 1], bcIm[2 * n + 1]);
    }
    for (int i = 0; i < ni; ++i) {
        const int dof = interiorDofs_[i];
        Complex& target = (dof % 2 == 0) ? sol.values[dof / 2].u1 : sol.values[dof / 2].u2;
        target = Complex(xRe[i], xIm[i]);
    }
    return sol;
}

FemSolution DirichletSolver::solve_interior_load(const std::vector<CVec2>& load) const {
    if (int(load.size()) != mesh_.node_count())
        throw std::invalid_argument("interior load length does not match the node count");
    const int ni = int(interiorDofs_.size());
    Eigen::VectorXd rhsRe(ni), rhsIm(ni);
    for (int i = 0; i < ni; ++i) {
        const int dof = interiorDofs_[i];
        const Complex v = (dof % 2 == 0) ? load[dof / 2].u1 : load[dof / 2].u2;
        rhsRe[i] = v.real();
        rhsIm[i] = v.imag();
    }
    const Eigen::VectorXd xRe = solve_interior(rhsRe);
    const Eigen::VectorXd xIm = solve_interior(rhsIm);

    FemSolution sol;
    sol.coefficientSet = system_.coefficientSet;
    sol.dirichletData.assign(mesh_.boundaryNodes.size(), CVec2{});
    sol.values.assign(mesh_.node_count(), CVec2{});
    for (int i = 0; i < ni; ++i) {
        const int dof = interiorDofs_[i];
        Complex& target = (dof % 2 == 0) ? sol.values[dof / 2].u1 : sol.values[dof / 2].u2;
        target = Complex(xRe[i], xIm[i]);
    }
    return sol;
}

FemSolution solve_dirichlet(const FemSystem& system, const Mesh& mesh, const BoundaryField& f) {
    DirichletSolver solver(mesh, system);
    return solver.solve(f);
}

ElementDeriv element_deriv(const Mesh& mesh, const std::vector<CVec2>& values, int t) {
    const P1Element el = element_geometry(mesh, t);
    const auto& tri = mesh.triangles[t];
    ElementDeriv d{};
    for (int a = 0; a < 3; ++a) {
        const Complex u1 = values[tri[a]].u1, u2 = values[tri[a]].u2;
        d.g11 += u1 * el.b[a];
        d.g12 += u1 * el.c[a];
        d.g21 += u2 * el.b[a];
        d.g22 += u2 * el.c[a];
    }
    d.div = d.g11 + d.g22;
    d.e11 = d.g11;
    d.e22 = d.g22;
    d.e12 = 0.5 * (d.g12 + d.g21);
    return d;
}

Complex energy_form(const Mesh& mesh, const MaterialConfig& material, CoefficientSet set,
                    const FemSolution& u, const FemSolution& v) {
    if (u.values.size() != v.values.size() || int(u.values.size()) != mesh.node_count())
        throw std::invalid_argument("energy_form: mesh mismatch");
    const double k2 = material.k * material.k;
    Complex total{0.0, 0.0};
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const P1Element el = element_geometry(mesh, t);
        double lambda, mu;
        element_coefficients(mesh, material, set, t, lambda, mu);
        const ElementDeriv du = element_deriv(mesh, u.values, t);
        const ElementDeriv dv = element_deriv(mesh, v.values, t);
        const Complex grad = lambda * du.div * std::conj(dv.div) +
                             2.0 * mu *
                                 (du.e11 * std::conj(dv.e11) + du.e22 * std::conj(dv.e22) +
                                  2.0 * du.e12 * std::conj(dv.e12));
        // exact P1 mass on the element
        const auto& tri = mesh.triangles[t];
        Complex massTerm{0.0, 0.0};
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                const double m = el.area / 12.0 * (a == b ? 2.0 : 1.0);
                massTerm += m * (u.values[tri[a]].u1 * std::conj(v.values[tri[b]].u1) +
                                 u.values[tri[a]].u2 * std::conj(v.values[tri[b]].u2));
            }
        }
        total += el.area * grad - k2 * massTerm;
    }
    return total;
}

BoundaryField traction(const Mesh& mesh, const MaterialConfig& material, CoefficientSet set,
                       const FemSolution& u) {
    const FemSystem sys = assemble(mesh, material, set);
    const int ndof = 2 * mesh.node_count();
    Eigen::VectorXd uRe(ndof), uIm(ndof);
    for (int n = 0; n < mesh.node_count(); ++n) {
        uRe[2 * n] = u.values[n].u1.real();
        uIm[2 * n] = u.values[n].u1.imag();
        uRe[2 * n + 1] = u.values[n].u2.real();
        uIm[2 * n + 1] = u.values[n].u2.imag();
    }
    const Eigen::VectorXd rRe = sys.matrix * uRe;
    const Eigen::VectorXd rIm = sys.matrix * uIm;

    // Boundary mass matrix of the boundary polyline (per component).
    const int nb = int(mesh.boundaryNodes.size());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(std::size_t(nb) * 4);
    for (int b = 0; b < nb; ++b) {
        const double len = mesh.boundary_segment_length(b);
        const int i = b, j = (b + 1) % nb;
        trip.emplace_back(i, i, len / 3.0);
        trip.emplace_back(j, j, len / 3.0);
        trip.emplace_back(i, j, len / 6.0);
        trip.emplace_back(j, i, len / 6.0);
    }
    Eigen::SparseMatrix<double> massB(nb, nb);
    massB.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(massB);
    if (lu.info() != Eigen::Success) throw std::runtime_error("boundary mass factorization failed");

    BoundaryField out(nb);
    for (int comp = 0; comp < 2; ++comp) {
        Eigen::VectorXd re(nb), im(nb);
        for (int b = 0; b < nb; ++b) {
            const int dof = 2 * mesh.boundaryNodes[b] + comp;
            re[b] = rRe[dof];
            im[b] = rIm[dof];
        }
        const Eigen::VectorXd tre = lu.solve(re);
        const Eigen::VectorXd tim = lu.solve(im);
        for (int b = 0; b < nb; ++b) {
            Complex& target = comp == 0 ? out[b].u1 : out[b].u2;
            target = Complex(tre[b], tim[b]);
        }
    }
    return out;
}

double l2_norm(const FemSystem& system, const std::vector<CVec2>& values) {
    const int ndof = int(values.size()) * 2;
    Eigen::VectorXd re(ndof), im(ndof);
    for (std::size_t n = 0; n < values.size(); ++n) {
        re[2 * n] = values[n].u1.real();
        im[2 * n] = values[n].u1.imag();
        re[2 * n + 1] = values[n].u2.real();
        im[2 * n + 1] = values[n].u2.imag();
    }
    const double q = re.dot(system.mass * re) + im.dot(system.mass * im);
    return std::sqrt(std::max(q, 0.0));
}

double boundary_l2_norm(const Mesh& mesh, const BoundaryField& f) {
    const int nb = int(mesh.boundaryNodes.size());
    double q = 0.0;
    for (int b = 0; b < nb; ++b) {
        const double len = mesh.boundary_segment_length(b);
        const CVec2& a = f[b];
        const CVec2& c = f[(b + 1) % nb];
        // exact P1 segment integral of |f|^2
        q += len / 6.0 *
             (2.0 * abs2(a) + 2.0 * abs2(c) +
              2.0 * std::real(a.u1 * std::conj(c.u1) + a.u2 * std::conj(c.u2)));
    }
    return std::sqrt(std::max(q, 0.0));
}

}  // namespace enclosure
