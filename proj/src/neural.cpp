#include "robustnet/neural.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace robustnet {

void NetConfig::validate() const {
  if (embed_dim < 1 || hidden < 1 || rounds < 1)
    throw std::invalid_argument("NetConfig: embed_dim, hidden and rounds must all be >= 1");
}

std::array<Matrix*, 6> NetworkParams::tensors() {
  return {&theta1, &theta2, &theta3, &theta4, &theta5, &theta6};
}

std::array<const Matrix*, 6> NetworkParams::tensors() const {
  return {&theta1, &theta2, &theta3, &theta4, &theta5, &theta6};
}

NetworkParams NetworkParams::zeros(const NetConfig& cfg) {
  cfg.validate();
  const int d = cfg.embed_dim, h = cfg.hidden;
  NetworkParams p;
  p.theta1 = Matrix::Zero(d, 2);
  p.theta2 = Matrix::Zero(d, d);
  p.theta3 = Matrix::Zero(1, h);
  p.theta4 = Matrix::Zero(h, 2 * d);
  p.theta5 = Matrix::Zero(1, h);
  p.theta6 = Matrix::Zero(h, 3 * d);
  return p;
}

NetworkParams NetworkParams::glorot(const NetConfig& cfg, Rng& rng) {
  NetworkParams p = zeros(cfg);
  for (Matrix* t : p.tensors()) {
    const double limit = std::sqrt(6.0 / static_cast<double>(t->rows() + t->cols()));
    for (Eigen::Index i = 0; i < t->rows(); ++i)
      for (Eigen::Index j = 0; j < t->cols(); ++j) (*t)(i, j) = rng.uniform(-limit, limit);
  }
  return p;
}

void NetworkParams::check_shapes(const NetConfig& cfg) const {
  const NetworkParams ref = zeros(cfg);
  const auto mine = tensors();
  const auto want = ref.tensors();
  for (std::size_t i = 0; i < mine.size(); ++i) {
    if (mine[i]->rows() != want[i]->rows() || mine[i]->cols() != want[i]->cols())
      throw std::invalid_argument(std::string("NetworkParams: ") + kNames[i] +
                                  " has the wrong shape for this config");
  }
}

Matrix node_features(const Graph& g, std::optional<int> stub) {
  Matrix x = Matrix::Zero(2, g.node_count());
  for (int v : g.live_nodes()) x(0, v) = 1.0;
  if (stub.has_value()) {
    if (*stub < 0 || *stub >= g.node_count() || !g.is_alive(*stub))
      throw std::invalid_argument("node_features: stub is not a live node");
    x(1, *stub) = 1.0;
  }
  return x;
}

namespace {

struct EmbedCache {
  std::vector<Matrix> mu;            // rounds+1 entries, embed_dim x N
  std::vector<Matrix> neighbor_sum;  // rounds entries
  Vector graph_embedding;
};

EmbedCache embed_cached(const Graph& g, const Matrix& x, const NetworkParams& params,
                        const NetConfig& cfg) {
  cfg.validate();
  params.check_shapes(cfg);
  const int n = g.node_count();
  if (x.rows() != 2 || x.cols() != n)
    throw std::invalid_argument("embed: feature matrix must be 2 x node_count");

  const int d = cfg.embed_dim;
  EmbedCache cache;
  cache.mu.reserve(static_cast<std::size_t>(cfg.rounds) + 1);
  cache.neighbor_sum.reserve(static_cast<std::size_t>(cfg.rounds));
  cache.mu.push_back(Matrix::Zero(d, n));

  const std::vector<int> live = g.live_nodes();
  const Matrix lifted = params.theta1 * x;
  for (int k = 0; k < cfg.rounds; ++k) {
    Matrix ns = Matrix::Zero(d, n);
    for (int v : live) {
      auto col = ns.col(v);
      for (int u : g.neighbors(v)) col += cache.mu.back().col(u);
    }
    cache.mu.push_back((lifted + params.theta2 * ns).cwiseMax(0.0));
    cache.neighbor_sum.push_back(std::move(ns));
  }

  // Explicit low-to-high pooling: the sum order is part of the contract.
  cache.graph_embedding = Vector::Zero(d);
  for (int v : live) cache.graph_embedding += cache.mu.back().col(v);
  return cache;
}

// Value heads. c packs [action; graph] or [stub; action; graph].
double head_forward(const Matrix& w_in, const Matrix& w_out, const Vector& c, Vector* z_out) {
  Vector z = w_in * c;
  const double q = (w_out * z.cwiseMax(0.0))(0);
  if (z_out) *z_out = std::move(z);
  return q;
}

void check_first_endpoint(const Graph& g, int a) {
  if (a < 0 || a >= g.node_count() || !g.is_alive(a))
    throw std::invalid_argument("q_values: action " + std::to_string(a) + " is not a live node");
  if (g.degree(a) >= g.live_node_count() - 1)
    throw std::invalid_argument("q_values: node " + std::to_string(a) +
                                " has no remaining non-neighbour");
}

void check_second_endpoint(const Graph& g, int stub, int a) {
  if (stub < 0 || stub >= g.node_count() || !g.is_alive(stub))
    throw std::invalid_argument("q_values: stub is not a live node");
  if (a < 0 || a >= g.node_count() || !g.is_alive(a))
    throw std::invalid_argument("q_values: action " + std::to_string(a) + " is not a live node");
  if (a == stub || g.has_edge(stub, a))
    throw std::invalid_argument("q_values: (" + std::to_string(stub) + ", " + std::to_string(a) +
                                ") is not an addable edge");
}

}  // namespace

EmbedResult embed(const Graph& g, const Matrix& x, const NetworkParams& params,
                  const NetConfig& cfg) {
  EmbedCache cache = embed_cached(g, x, params, cfg);
  return EmbedResult{std::move(cache.mu.back()), std::move(cache.graph_embedding)};
}

std::vector<double> q_values(const Graph& g, std::optional<int> stub,
                             std::span<const int> actions, const NetworkParams& params,
                             const NetConfig& cfg) {
  const EmbedCache cache = embed_cached(g, node_features(g, stub), params, cfg);
  const Matrix& mu = cache.mu.back();
  const int d = cfg.embed_dim;

  std::vector<double> out;
  out.reserve(actions.size());
  Vector c(stub.has_value() ? 3 * d : 2 * d);
  for (int a : actions) {
    if (stub.has_value()) {
      check_second_endpoint(g, *stub, a);
      c.segment(0, d) = mu.col(*stub);
      c.segment(d, d) = mu.col(a);
      c.segment(2 * d, d) = cache.graph_embedding;
      out.push_back(head_forward(params.theta6, params.theta5, c, nullptr));
    } else {
      check_first_endpoint(g, a);
      c.segment(0, d) = mu.col(a);
      c.segment(d, d) = cache.graph_embedding;
      out.push_back(head_forward(params.theta4, params.theta3, c, nullptr));
    }
  }
  return out;
}

double sl_value(const Graph& g, const NetworkParams& params, const NetConfig& cfg) {
  const EmbedCache cache = embed_cached(g, node_features(g, std::nullopt), params, cfg);
  const int d = cfg.embed_dim;
  Vector c = Vector::Zero(2 * d);
  c.segment(d, d) = cache.graph_embedding;
  return head_forward(params.theta4, params.theta3, c, nullptr);
}

namespace {

// Shared backward pass. Given the gradient already accumulated in the final
// node embeddings, pushes it down through every round.
void backprop_rounds(const Graph& g, const Matrix& x, const NetworkParams& params,
                     const EmbedCache& cache, Matrix d_mu, NetworkParams& grads) {
  const std::vector<int> live = g.live_nodes();
  const int rounds = static_cast<int>(cache.neighbor_sum.size());
  for (int k = rounds - 1; k >= 0; --k) {
    const Matrix& mu_next = cache.mu[static_cast<std::size_t>(k) + 1];
    const Matrix dz =
        (mu_next.array() > 0.0).cast<double>().matrix().cwiseProduct(d_mu);
    grads.theta1 += dz * x.transpose();
    grads.theta2 += dz * cache.neighbor_sum[static_cast<std::size_t>(k)].transpose();
    const Matrix d_ns = params.theta2.transpose() * dz;
    d_mu.setZero();
    for (int u : live) {
      auto col = d_mu.col(u);
      for (int v : g.neighbors(u)) col += d_ns.col(v);
    }
  }
}

// dq flows into the head (w_in, w_out) evaluated at c with pre-activation z;
// returns dc.
Vector backprop_head(const Matrix& w_in, const Matrix& w_out, const Vector& c, const Vector& z,
                     double dq, Matrix& d_w_in, Matrix& d_w_out) {
  const Vector r = z.cwiseMax(0.0);
  d_w_out += dq * r.transpose();
  Vector dz = dq * w_out.transpose();
  for (Eigen::Index i = 0; i < dz.size(); ++i)
    if (z(i) <= 0.0) dz(i) = 0.0;
  d_w_in += dz * c.transpose();
  return w_in.transpose() * dz;
}

}  // namespace

LossGrads grad_td_loss(std::span<const TdSample> batch, const NetworkParams& params,
                       const NetConfig& cfg) {
  if (batch.empty()) throw std::invalid_argument("grad_td_loss: empty batch");
  const int d = cfg.embed_dim;
  LossGrads out{NetworkParams::zeros(cfg), 0.0};
  const double inv_b = 1.0 / static_cast<double>(batch.size());

  for (const TdSample& s : batch) {
    const Graph& g = *s.graph;
    const Matrix x = node_features(g, s.stub);
    const EmbedCache cache = embed_cached(g, x, params, cfg);
    const Matrix& mu = cache.mu.back();

    Vector c, z;
    double q;
    if (s.stub.has_value()) {
      check_second_endpoint(g, *s.stub, s.action);
      c.resize(3 * d);
      c.segment(0, d) = mu.col(*s.stub);
      c.segment(d, d) = mu.col(s.action);
      c.segment(2 * d, d) = cache.graph_embedding;
      q = head_forward(params.theta6, params.theta5, c, &z);
    } else {
      check_first_endpoint(g, s.action);
      c.resize(2 * d);
      c.segment(0, d) = mu.col(s.action);
      c.segment(d, d) = cache.graph_embedding;
      q = head_forward(params.theta4, params.theta3, c, &z);
    }

    const double err = q - s.target;
    out.loss += err * err * inv_b;
    const double dq = 2.0 * err * inv_b;

    Vector dc;
    Matrix d_mu = Matrix::Zero(d, g.node_count());
    Vector d_graph;
    if (s.stub.has_value()) {
      dc = backprop_head(params.theta6, params.theta5, c, z, dq, out.grads.theta6,
                         out.grads.theta5);
      d_mu.col(*s.stub) += dc.segment(0, d);
      d_mu.col(s.action) += dc.segment(d, d);
      d_graph = dc.segment(2 * d, d);
    } else {
      dc = backprop_head(params.theta4, params.theta3, c, z, dq, out.grads.theta4,
                         out.grads.theta3);
      d_mu.col(s.action) += dc.segment(0, d);
      d_graph = dc.segment(d, d);
    }
    for (int v : g.live_nodes()) d_mu.col(v) += d_graph;

    backprop_rounds(g, x, params, cache, std::move(d_mu), out.grads);
  }
  return out;
}

LossGrads grad_sl_loss(std::span<const SlSample> batch, const NetworkParams& params,
                       const NetConfig& cfg) {
  if (batch.empty()) throw std::invalid_argument("grad_sl_loss: empty batch");
  const int d = cfg.embed_dim;
  LossGrads out{NetworkParams::zeros(cfg), 0.0};
  const double inv_b = 1.0 / static_cast<double>(batch.size());

  for (const SlSample& s : batch) {
    const Graph& g = *s.graph;
    const Matrix x = node_features(g, std::nullopt);
    const EmbedCache cache = embed_cached(g, x, params, cfg);

    Vector c = Vector::Zero(2 * d);
    c.segment(d, d) = cache.graph_embedding;
    Vector z;
    const double q = head_forward(params.theta4, params.theta3, c, &z);

    const double err = q - s.target;
    out.loss += err * err * inv_b;
    const double dq = 2.0 * err * inv_b;

    const Vector dc =
        backprop_head(params.theta4, params.theta3, c, z, dq, out.grads.theta4, out.grads.theta3);
    // The action slot is pinned to zero; only the graph half reaches the
    // embeddings.
    Matrix d_mu = Matrix::Zero(d, g.node_count());
    const Vector d_graph = dc.segment(d, d);
    for (int v : g.live_nodes()) d_mu.col(v) += d_graph;
    backprop_rounds(g, x, params, cache, std::move(d_mu), out.grads);
  }
  return out;
}

AdamState AdamState::init(const NetConfig& cfg, double lr) {
  AdamState s;
  s.lr = lr;
  s.m = NetworkParams::zeros(cfg);
  s.v = NetworkParams::zeros(cfg);
  return s;
}

void adam_step(NetworkParams& params, const NetworkParams& grads, AdamState& state) {
  const auto g = grads.tensors();
  const auto p = params.tensors();
  const auto m = state.m.tensors();
  const auto v = state.v.tensors();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g[i]->allFinite())
      throw std::runtime_error(std::string("adam_step: non-finite gradient in ") +
                               NetworkParams::kNames[i]);
    if (g[i]->rows() != p[i]->rows() || g[i]->cols() != p[i]->cols())
      throw std::invalid_argument("adam_step: gradient shape mismatch");
  }
  ++state.step;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < g.size(); ++i) {
    *m[i] = state.beta1 * *m[i] + (1.0 - state.beta1) * *g[i];
    *v[i] = state.beta2 * *v[i] + (1.0 - state.beta2) * g[i]->cwiseProduct(*g[i]);
    const Matrix m_hat = *m[i] / bc1;
    const Matrix v_hat = *v[i] / bc2;
    *p[i] -= state.lr * (m_hat.array() / (v_hat.array().sqrt() + state.eps)).matrix();
  }
}

}  // namespace robustnet
