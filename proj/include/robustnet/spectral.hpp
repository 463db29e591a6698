#pragma once

#include <Eigen/Dense>

#include "robustnet/graph.hpp"

namespace robustnet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Combinatorial Laplacian L = D - A over the full label space; rows and
// columns of removed nodes are zero. Symmetric, rows sum to zero.
Matrix laplacian(const Graph& g);

struct EigenDecomposition {
  Vector eigenvalues;   // ascending
  Matrix eigenvectors;  // column i pairs with eigenvalues[i]; orthonormal
};

// Symmetric eigendecomposition by cyclic Jacobi rotations. Sweeps until the
// off-diagonal Frobenius norm drops below off_tol, throwing if max_sweeps
// sweeps do not get there.
EigenDecomposition eigh(const Matrix& a, int max_sweeps = 100, double off_tol = 1e-10);

// Eigenvector of the second-smallest Laplacian eigenvalue. Requires g
// connected (algebraic connectivity > 0 is what makes "second" well named).
Vector fiedler_vector(const Graph& g);

// Moore-Penrose pseudoinverse of the Laplacian: zero eigenvalues stay zero,
// the rest invert. Requires g connected.
Matrix laplacian_pseudoinverse(const Graph& g);

// Effective resistance between u and v given L's pseudoinverse.
double effective_resistance(const Matrix& lpinv, int u, int v);

}  // namespace robustnet
