#ifndef GEOMC_LINALG_HPP
#define GEOMC_LINALG_HPP

#include <Eigen/Dense>

namespace geomc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Matrix exponential by scaling and squaring with a Pade approximant whose
/// degree (3, 5, 7, 9 or 13) is chosen from the 1-norm of the argument.
/// Throws DimensionError for non-square input, DomainError for non-finite
/// entries.
Matrix matrix_exp(const Matrix& m);

/// Returns (I - N N^T) u for a matrix N with orthonormal columns.
Vector project_out_basis(const Matrix& basis, const Vector& u);

/// Thin QR orthonormalisation with the sign of each column fixed so that the
/// triangular factor has a non-negative diagonal. Maps a point that drifted
/// slightly off the Stiefel manifold back to the nearest QR representative.
Matrix orthonormalize(const Matrix& x);

/// Frobenius norm of X^T X - I.
double orthonormality_residual(const Matrix& x);

bool all_finite(const Vector& v);

}  // namespace geomc

#endif  // GEOMC_LINALG_HPP
