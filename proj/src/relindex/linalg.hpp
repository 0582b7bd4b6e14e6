#pragma once

#include "relindex/types.hpp"

#include <cstdint>
#include <random>

namespace relindex {

using Rng = std::mt19937_64;

/// Largest entry magnitude of a complex matrix.
double max_abs_entry(const CMatrix& m);

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases
/// of R's diagonal folded back into Q.
CMatrix haar_unitary(Eigen::Index dim, Rng& rng);

/// Orthogonal projection onto the span of the first `rank` columns of a Haar
/// unitary; uniform over the Grassmannian of rank-`rank` subspaces.
CMatrix random_projection(Eigen::Index dim, Eigen::Index rank, Rng& rng);

/// Diagonal matrix with the given entries.
CMatrix diagonal_matrix(const CVector& entries);

/// Trace of A^power for a square matrix, computed with
/// ceil(log2(power)) multiplications.
cplx trace_of_power(const CMatrix& a, int power);

}  // namespace relindex
