#include "qbeit/linops.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace qbeit {

double hermitian_deviation(const ComplexMatrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("hermitian check on non-square matrix");
    return max_norm(ComplexMatrix(a - a.adjoint()));
}

bool is_hermitian(const ComplexMatrix& a, const NumericPolicy& policy) {
    const double scale = std::max(max_norm(a), 1e-300);
    return hermitian_deviation(a) <= policy.hermitian_tol * scale;
}

EigenSystem eig_hermitian(const ComplexMatrix& a, const NumericPolicy& policy) {
    if (a.rows() != a.cols()) throw DimensionError("eig_hermitian: matrix is not square");
    if (a.size() == 0) return {};
    if (!is_hermitian(a, policy)) throw NonHermitianError(hermitian_deviation(a));

    // Only the lower triangle is read; symmetrise first so rounding noise
    // in the upper triangle cannot bias the result.
    const ComplexMatrix sym = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eig_hermitian: solver did not converge");
    return {solver.eigenvalues().cast<Complex>(), solver.eigenvectors()};
}

EigenSystem eig_general(const ComplexMatrix& a, const NumericPolicy& policy) {
    const Eigen::Index n = a.rows();
    if (n != a.cols()) throw DimensionError("eig_general: matrix is not square");
    if (n > policy.max_dim_general)
        throw DimensionError("eig_general: dimension " + std::to_string(n) + " exceeds " +
                             std::to_string(policy.max_dim_general));
    if (n == 0) return {};

    Eigen::ComplexEigenSolver<ComplexMatrix> solver(a, true);
    if (solver.info() != Eigen::Success) throw DefectiveMatrixError("eig_general: Schur iteration did not converge");

    ComplexVector vals = solver.eigenvalues();
    ComplexMatrix vecs = solver.eigenvectors();
    for (Eigen::Index j = 0; j < n; ++j) {
        const double nrm = vecs.col(j).norm();
        if (nrm == 0.0) throw DefectiveMatrixError("eig_general: zero eigenvector");
        vecs.col(j) /= nrm;
        // fix the phase: largest component real and positive
        Eigen::Index imax = 0;
        vecs.col(j).cwiseAbs().maxCoeff(&imax);
        vecs.col(j) *= std::polar(1.0, -std::arg(vecs(imax, j)));
    }

    const double scale = std::max(max_norm(a), 1e-300);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double residual = (a * vecs.col(j) - vals(j) * vecs.col(j)).norm();
        if (residual > policy.general_residual_tol * scale)
            throw DefectiveMatrixError("eig_general: eigenpair residual " + std::to_string(residual) +
                                       " above tolerance");
    }

    Eigen::JacobiSVD<ComplexMatrix> svd(vecs);
    const double smin = svd.singularValues()(n - 1);
    if (smin < policy.defective_tol)
        throw DefectiveMatrixError("eig_general: eigenvectors are linearly dependent (sigma_min = " +
                                   std::to_string(smin) + "); matrix is defective");

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index l, Eigen::Index r) {
        if (vals(l).real() != vals(r).real()) return vals(l).real() < vals(r).real();
        return vals(l).imag() < vals(r).imag();
    });

    EigenSystem out{ComplexVector(n), ComplexMatrix(n, n)};
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values(k) = vals(order[static_cast<std::size_t>(k)]);
        out.vectors.col(k) = vecs.col(order[static_cast<std::size_t>(k)]);
    }
    return out;
}

ComplexMatrix expm(const ComplexMatrix& a, Complex scale, const NumericPolicy& policy) {
    if (a.rows() != a.cols()) throw DimensionError("expm: matrix is not square");
    if (a.rows() > policy.max_dim_expm)
        throw DimensionError("expm: dimension " + std::to_string(a.rows()) + " exceeds " +
                             std::to_string(policy.max_dim_expm));
    if (a.size() == 0) return a;

    const ComplexMatrix m = scale * a;
    const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
    if (!std::isfinite(norm1)) throw std::overflow_error("expm: input norm is not finite");

    ComplexMatrix out = m.exp();
    if (!out.allFinite())
        throw std::overflow_error("expm: result overflowed (1-norm of argument " + std::to_string(norm1) + ")");
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, std::pair<int, int> dims, Keep keep) {
    const auto [da, db] = dims;
    if (da <= 0 || db <= 0 || rho.rows() != rho.cols() || rho.rows() != Eigen::Index(da) * db)
        throw DimensionError("partial_trace: rho dimension " + std::to_string(rho.rows()) + " != " +
                             std::to_string(da) + "*" + std::to_string(db));

    if (keep == Keep::B) {
        ComplexMatrix out = ComplexMatrix::Zero(db, db);
        for (int i = 0; i < da; ++i) out += rho.block(Eigen::Index(i) * db, Eigen::Index(i) * db, db, db);
        return out;
    }
    ComplexMatrix out(da, da);
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < da; ++j)
            out(i, j) = rho.block(Eigen::Index(i) * db, Eigen::Index(j) * db, db, db).trace();
    return out;
}

ComplexMatrix partial_trace_pure(const ComplexVector& psi, std::pair<int, int> dims, Keep keep) {
    const auto [da, db] = dims;
    if (da <= 0 || db <= 0 || psi.size() != Eigen::Index(da) * db)
        throw DimensionError("partial_trace_pure: state dimension " + std::to_string(psi.size()) + " != " +
                             std::to_string(da) + "*" + std::to_string(db));
    // psi viewed as a db x da column-major matrix: M(i_b, i_a) = psi(i_a*db + i_b)
    const Eigen::Map<const ComplexMatrix> m(psi.data(), db, da);
    if (keep == Keep::B) return m * m.adjoint();
    return (m.transpose() * m.conjugate()).eval();
}

ComplexMatrix annihilation(int n_max) {
    if (n_max < 0) throw DimensionError("annihilation: negative truncation");
    ComplexMatrix a = ComplexMatrix::Zero(n_max + 1, n_max + 1);
    for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(double(n));
    return a;
}

}  // namespace qbeit
