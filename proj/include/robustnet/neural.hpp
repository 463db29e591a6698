#pragma once

#include <array>
#include <optional>
#include <span>

#include <Eigen/Dense>

#include "robustnet/graph.hpp"
#include "robustnet/rng.hpp"

namespace robustnet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct NetConfig {
  int embed_dim = 64;
  int hidden = 128;
  int rounds = 3;

  void validate() const;
  bool operator==(const NetConfig&) const = default;
};

// Parameters of the embedding network and the two value heads.
//   theta1: embed_dim x 2        node-feature lift
//   theta2: embed_dim x embed_dim neighbour-sum mixer
//   theta3: 1 x hidden           no-stub head output
//   theta4: hidden x 2*embed_dim no-stub head input  [action; graph]
//   theta5: 1 x hidden           stub head output
//   theta6: hidden x 3*embed_dim stub head input     [stub; action; graph]
struct NetworkParams {
  Matrix theta1, theta2, theta3, theta4, theta5, theta6;

  static constexpr std::array<const char*, 6> kNames = {"theta1", "theta2", "theta3",
                                                        "theta4", "theta5", "theta6"};
  std::array<Matrix*, 6> tensors();
  std::array<const Matrix*, 6> tensors() const;

  static NetworkParams zeros(const NetConfig& cfg);
  // Glorot uniform, filled row-major tensor by tensor off one stream.
  static NetworkParams glorot(const NetConfig& cfg, Rng& rng);

  void check_shapes(const NetConfig& cfg) const;
};

// 2 x node_count feature matrix: row 0 is 1 for live nodes, row 1 marks the
// pending stub. Removed nodes get zero columns.
Matrix node_features(const Graph& g, std::optional<int> stub);

struct EmbedResult {
  Matrix node_embeddings;  // embed_dim x node_count
  Vector graph_embedding;  // sum over live columns, low label first
};

// rounds of mu <- relu(theta1 x + theta2 * neighbour_sum(mu)), mu starting
// at zero.
EmbedResult embed(const Graph& g, const Matrix& x, const NetworkParams& params,
                  const NetConfig& cfg);

// Q value of each candidate action. With no stub pending, actions are first
// endpoints scored by the [action; graph] head; with a stub, second
// endpoints scored by the [stub; action; graph] head. Duplicate actions are
// allowed and score identically.
std::vector<double> q_values(const Graph& g, std::optional<int> stub,
                             std::span<const int> actions, const NetworkParams& params,
                             const NetConfig& cfg);

// Scalar graph value: the no-stub head applied to a zero action slot. Used
// for regression on the objective value.
double sl_value(const Graph& g, const NetworkParams& params, const NetConfig& cfg);

struct TdSample {
  const Graph* graph;
  std::optional<int> stub;
  int action;
  double target;
};

struct SlSample {
  const Graph* graph;
  double target;
};

struct LossGrads {
  NetworkParams grads;
  double loss;  // mean squared error over the batch
};

// Mean squared TD error and its gradient in every parameter, by
// backpropagation through the head and all embedding rounds.
LossGrads grad_td_loss(std::span<const TdSample> batch, const NetworkParams& params,
                       const NetConfig& cfg);

LossGrads grad_sl_loss(std::span<const SlSample> batch, const NetworkParams& params,
                       const NetConfig& cfg);

struct AdamState {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long long step = 0;
  NetworkParams m, v;

  static AdamState init(const NetConfig& cfg, double lr = 1e-4);
};

// One Adam update; throws on non-finite gradients.
void adam_step(NetworkParams& params, const NetworkParams& grads, AdamState& state);

}  // namespace robustnet
