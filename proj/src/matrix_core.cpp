#include "cyclodetect/matrix_core.hpp"

#include <string>

namespace cyclodetect {

namespace {

constexpr double kConditioningFloor = 1e-12;

void check_floor(const Eigen::VectorXd& evals, int dim, const char* context)
{
    const double lambda_max = evals(dim - 1);
    const double floor = dim * kConditioningFloor * lambda_max;
    if (evals(0) <= 0.0 || evals(0) <= floor) {
        throw NotPositiveDefinite(std::string(context)
                                  + ": eigenvalue below conditioning floor ("
                                  + std::to_string(evals(0)) + " vs floor "
                                  + std::to_string(floor) + ")");
    }
}

} // namespace

HermitianMatrix::HermitianMatrix(CMatrix m)
{
    if (m.rows() != m.cols()) {
        throw InvalidSpec("HermitianMatrix: input must be square");
    }
    mat_ = 0.5 * (m + m.adjoint());
    // Symmetrization leaves a conjugate-symmetric matrix whose diagonal may
    // still carry dead imaginary parts from rounding; clear them.
    for (Eigen::Index i = 0; i < mat_.rows(); ++i) {
        mat_(i, i) = cdouble(mat_(i, i).real(), 0.0);
    }
}

HermitianMatrix HermitianMatrix::identity(int dim)
{
    return HermitianMatrix(CMatrix::Identity(dim, dim));
}

void BlockDiagonalMatrix::validate() const
{
    if (block_dim <= 0) {
        throw InvalidSpec("BlockDiagonalMatrix: block_dim must be positive");
    }
    for (const auto& b : blocks) {
        if (b.dim() != block_dim) {
            throw InvalidSpec("BlockDiagonalMatrix: block dimension mismatch");
        }
    }
}

Eigen::VectorXd pd_eigenvalues(const CMatrix& h, const char* context)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw NotPositiveDefinite(std::string(context)
                                  + ": eigendecomposition failed");
    }
    check_floor(es.eigenvalues(), static_cast<int>(h.rows()), context);
    return es.eigenvalues();
}

HermitianMatrix inv_sqrt(const HermitianMatrix& h)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h.mat());
    if (es.info() != Eigen::Success) {
        throw NotPositiveDefinite("inv_sqrt: eigendecomposition failed");
    }
    check_floor(es.eigenvalues(), h.dim(), "inv_sqrt");
    const Eigen::VectorXd scale = es.eigenvalues().array().rsqrt();
    CMatrix r = es.eigenvectors() * scale.asDiagonal()
                * es.eigenvectors().adjoint();
    return HermitianMatrix(std::move(r));
}

double logdet(const HermitianMatrix& h)
{
    return pd_eigenvalues(h.mat(), "logdet").array().log().sum();
}

double frob_sq(const HermitianMatrix& h)
{
    return h.mat().squaredNorm();
}

} // namespace cyclodetect
