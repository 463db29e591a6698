#include "robustnet/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace robustnet {

Matrix laplacian(const Graph& g) {
  const int n = g.node_count();
  Matrix l = Matrix::Zero(n, n);
  for (int v = 0; v < n; ++v) {
    if (!g.is_alive(v)) continue;
    l(v, v) = static_cast<double>(g.degree(v));
    for (int u : g.neighbors(v)) l(v, u) = -1.0;
  }
  return l;
}

namespace {

double off_diagonal_norm(const Matrix& a) {
  double ss = 0.0;
  for (int p = 0; p < a.rows(); ++p)
    for (int q = p + 1; q < a.cols(); ++q) ss += a(p, q) * a(p, q);
  return std::sqrt(2.0 * ss);
}

}  // namespace

EigenDecomposition eigh(const Matrix& a, int max_sweeps, double off_tol) {
  if (a.rows() != a.cols()) throw std::invalid_argument("eigh: matrix is not square");
  const int n = static_cast<int>(a.rows());
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("eigh: matrix is not symmetric");

  Matrix d = a;
  Matrix v = Matrix::Identity(n, n);

  bool converged = false;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_norm(d) < off_tol) {
      converged = true;
      break;
    }
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = d(p, q);
        if (std::fabs(apq) < 1e-300) continue;
        const double tau = (d(q, q) - d(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int i = 0; i < n; ++i) {
          const double dip = d(i, p), diq = d(i, q);
          d(i, p) = c * dip - s * diq;
          d(i, q) = s * dip + c * diq;
        }
        for (int i = 0; i < n; ++i) {
          const double dpi = d(p, i), dqi = d(q, i);
          d(p, i) = c * dpi - s * dqi;
          d(q, i) = s * dpi + c * dqi;
        }
        d(p, q) = 0.0;
        d(q, p) = 0.0;
        for (int i = 0; i < n; ++i) {
          const double vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
  }
  if (!converged && off_diagonal_norm(d) >= off_tol)
    throw std::runtime_error("eigh: Jacobi sweeps did not converge");

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&d](int i, int j) { return d(i, i) < d(j, j); });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (int i = 0; i < n; ++i) {
    out.eigenvalues(i) = d(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]);
    out.eigenvectors.col(i) = v.col(order[static_cast<std::size_t>(i)]);
  }
  return out;
}

namespace {

// Eigendecomposition of the Laplacian restricted to live nodes.
struct LiveEig {
  std::vector<int> live;
  EigenDecomposition eig;
};

LiveEig live_laplacian_eig(const Graph& g) {
  if (!g.is_connected()) throw std::invalid_argument("laplacian spectrum: graph is disconnected");
  LiveEig out;
  out.live = g.live_nodes();
  const int n = static_cast<int>(out.live.size());
  std::vector<int> where(static_cast<std::size_t>(g.node_count()), -1);
  for (int i = 0; i < n; ++i) where[static_cast<std::size_t>(out.live[static_cast<std::size_t>(i)])] = i;

  Matrix l = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const int v = out.live[static_cast<std::size_t>(i)];
    l(i, i) = static_cast<double>(g.degree(v));
    for (int u : g.neighbors(v)) l(i, where[static_cast<std::size_t>(u)]) = -1.0;
  }
  out.eig = eigh(l);
  return out;
}

}  // namespace

Vector fiedler_vector(const Graph& g) {
  LiveEig le = live_laplacian_eig(g);
  const int n = static_cast<int>(le.live.size());
  if (n < 2) throw std::invalid_argument("fiedler_vector: need at least 2 live nodes");
  if (le.eig.eigenvalues(1) <= 1e-9)
    throw std::invalid_argument("fiedler_vector: algebraic connectivity is zero");

  Vector full = Vector::Zero(g.node_count());
  for (int i = 0; i < n; ++i) full(le.live[static_cast<std::size_t>(i)]) = le.eig.eigenvectors(i, 1);
  return full;
}

Matrix laplacian_pseudoinverse(const Graph& g) {
  LiveEig le = live_laplacian_eig(g);
  const int n = static_cast<int>(le.live.size());

  int zero_count = 0;
  Vector inv = Vector::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (std::fabs(le.eig.eigenvalues(i)) <= 1e-9) {
      ++zero_count;
    } else {
      inv(i) = 1.0 / le.eig.eigenvalues(i);
    }
  }
  if (zero_count != 1)
    throw std::invalid_argument("laplacian_pseudoinverse: graph is disconnected");

  const Matrix compact =
      le.eig.eigenvectors * inv.asDiagonal() * le.eig.eigenvectors.transpose();
  Matrix full = Matrix::Zero(g.node_count(), g.node_count());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      full(le.live[static_cast<std::size_t>(i)], le.live[static_cast<std::size_t>(j)]) =
          compact(i, j);
  return full;
}

double effective_resistance(const Matrix& lpinv, int u, int v) {
  if (lpinv.rows() != lpinv.cols()) throw std::invalid_argument("effective_resistance: matrix not square");
  if (u < 0 || v < 0 || u >= lpinv.rows() || v >= lpinv.rows())
    throw std::out_of_range("effective_resistance: node index out of range");
  return lpinv(u, u) + lpinv(v, v) - 2.0 * lpinv(u, v);
}

}  // namespace robustnet
