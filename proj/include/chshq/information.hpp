#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace chshq {

/// Pr[X = row, Y = col] over explicit finite alphabets.
class JointDist {
 public:
  /// Throws InvalidInput on negative entries or a total differing from 1 by
  /// more than 1e-12.
  explicit JointDist(Eigen::MatrixXd table);

  const Eigen::MatrixXd& table() const { return table_; }
  Eigen::Index x_size() const { return table_.rows(); }
  Eigen::Index y_size() const { return table_.cols(); }
  Eigen::VectorXd x_marginal() const { return table_.rowwise().sum(); }
  Eigen::VectorXd y_marginal() const { return table_.colwise().sum().transpose(); }

 private:
  Eigen::MatrixXd table_;
};

/// Shannon entropy in bits; 0 log 0 = 0.
double entropy(const Eigen::Ref<const Eigen::VectorXd>& pmf);
/// H(X, Y)
double joint_entropy(const JointDist& d);
/// I(X; Y) = H(X) + H(Y) - H(X, Y), clamped at 0 against rounding.
double mutual_information(const JointDist& d);

/// Joint of (X, f(Y)) for a deterministic relabelling f of Y's alphabet into [0, out_size).
JointDist relabel_y(const JointDist& d, std::span<const int> f, int out_size);

struct BinaryReduction {
  /// f(y) = 1 exactly at y = selected.
  std::vector<int> indicator;
  Eigen::Index selected = 0;
  double original_mi = 0.0;
  double achieved_mi = 0.0;
  /// I(X;Y) / H(X)
  double information_ratio = 0.0;
  /// Pr[Y = j] and H(X | Y = j) / H(X)
  Eigen::VectorXd r;
  Eigen::VectorXd t;
};

/// For X uniform, picks j maximising Pr[Y=j] (1 - H(X|Y=j)/H(X)) and returns
/// its indicator, which keeps at least I(X;Y)/|B| bits about X.
/// Throws InvalidInput when X is not uniform (tolerance 1e-9).
BinaryReduction binary_reduction_select(const JointDist& d);

/// A classical one-way protocol: Alice, holding X uniform, sends alpha with
/// Pr[alpha | x] = message(x, alpha); Bob outputs Z with Pr[z | alpha] = decoder(alpha, z).
struct ClassicalProtocol {
  Eigen::MatrixXd message;  // |X| x |Sigma|, rows sum to 1
  Eigen::MatrixXd decoder;  // |Sigma| x |Lambda|, rows sum to 1

  Eigen::Index sigma() const { return message.cols(); }
  Eigen::Index lambda() const { return decoder.cols(); }
};

/// Throws InvalidInput on shape mismatch or non-stochastic rows.
void validate(const ClassicalProtocol& protocol);

/// Joint of (X, Z) under the full-message protocol.
JointDist original_joint(const ClassicalProtocol& protocol);

/// Exact statistics of the one-bit reduction: both parties share a uniform
/// guess of alpha; Alice sends whether her alpha matched, and Bob keeps his
/// decoded output on a match or outputs a uniform symbol otherwise.
struct CStarModel {
  double p_match = 0.0;
  JointDist given_match;     // (X, Z~) | alpha_bin = 1
  JointDist given_mismatch;  // (X, Z~) | alpha_bin = 0
};

CStarModel cstar_model(const ClassicalProtocol& protocol);

struct CStarSimulation {
  std::uint64_t runs = 0;
  std::uint64_t matches = 0;
  double match_rate = 0.0;
  double match_rate_stderr = 0.0;
  /// Plug-in MI of the empirical (X, Z~) table given a match.
  double conditional_mi = 0.0;
  /// First-order (Miller-Madow) bias of that plug-in estimate.
  double conditional_mi_bias = 0.0;
  /// Standard error combining the delta-method term and the second-order
  /// chi-square fluctuation.
  double conditional_mi_stderr = 0.0;
  /// Exact I(X; Z) of the original protocol.
  double original_mi = 0.0;
  Eigen::MatrixXd match_counts;  // |X| x |Lambda|
};

CStarSimulation simulate_cstar(const ClassicalProtocol& protocol, std::uint64_t runs,
                               std::uint64_t seed);

}  // namespace chshq
