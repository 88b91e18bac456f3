// Dense complex linear algebra shared by every model: eigensystems of small
// matrices, the matrix exponential, Kronecker products and partial traces.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace qbeit {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// Tolerances used by the linear-algebra layer. All fields have the
/// documented defaults; callers may pass a modified copy.
struct NumericPolicy {
    double hermitian_tol = 1e-12;        // relative to max-norm
    double general_residual_tol = 1e-9;  // relative to max-norm
    double defective_tol = 1e-7;         // smallest singular value of the eigenvector matrix
    int max_dim_general = 64;
    int max_dim_expm = 4096;
};

inline constexpr NumericPolicy kDefaultPolicy{};

struct EigenSystem {
    ComplexVector values;
    ComplexMatrix vectors;  // unit-norm right eigenvectors, one per column
};

class NonHermitianError : public std::invalid_argument {
public:
    NonHermitianError(double deviation)
        : std::invalid_argument("matrix is not Hermitian: max|A - A^H| = " + std::to_string(deviation)),
          deviation_(deviation) {}
    double deviation() const noexcept { return deviation_; }

private:
    double deviation_;
};

class DefectiveMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Largest absolute entry.
template <typename Derived>
double max_norm(const Eigen::MatrixBase<Derived>& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

/// max|A - A^H|.
double hermitian_deviation(const ComplexMatrix& a);

bool is_hermitian(const ComplexMatrix& a, const NumericPolicy& policy = kDefaultPolicy);

/// Real ascending eigenvalues and orthonormal eigenvectors of a Hermitian matrix.
EigenSystem eig_hermitian(const ComplexMatrix& a, const NumericPolicy& policy = kDefaultPolicy);

/// Right eigenpairs of an arbitrary complex matrix, sorted lexicographically
/// on (Re, Im). Throws DefectiveMatrixError when the eigenvectors do not span.
EigenSystem eig_general(const ComplexMatrix& a, const NumericPolicy& policy = kDefaultPolicy);

/// exp(scale * a) by scaling and squaring with a Pade approximant.
ComplexMatrix expm(const ComplexMatrix& a, Complex scale = 1.0, const NumericPolicy& policy = kDefaultPolicy);

enum class Keep { A, B };

/// Reduced matrix of rho on the factor `keep` of a (d_a x d_b) bipartition,
/// index ordering i = i_a * d_b + i_b.
ComplexMatrix partial_trace(const ComplexMatrix& rho, std::pair<int, int> dims, Keep keep);

/// Reduced matrix of the projector |psi><psi| without forming the projector.
ComplexMatrix partial_trace_pure(const ComplexVector& psi, std::pair<int, int> dims, Keep keep);

template <typename A, typename B>
ComplexMatrix kron(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = Complex(a(i, j)) * b.template cast<Complex>();
    return out;
}

/// Truncated bosonic annihilation operator on {|0>, ..., |n_max>}.
ComplexMatrix annihilation(int n_max);

}  // namespace qbeit
