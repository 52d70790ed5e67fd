#include "chshq/information.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "chshq/errors.hpp"
#include "chshq/random.hpp"

namespace chshq {

JointDist::JointDist(Eigen::MatrixXd table) : table_(std::move(table)) {
  if (table_.size() == 0) throw InvalidInput("joint distribution must be nonempty");
  if ((table_.array() < 0.0).any()) throw InvalidInput("joint distribution has negative entries");
  if (std::abs(table_.sum() - 1.0) > 1e-12) throw InvalidInput("joint distribution must sum to 1");
}

double entropy(const Eigen::Ref<const Eigen::VectorXd>& pmf) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < pmf.size(); ++i) {
    if (pmf[i] > 0.0) h -= pmf[i] * std::log2(pmf[i]);
  }
  return h;
}

double joint_entropy(const JointDist& d) {
  const auto& t = d.table();
  return entropy(Eigen::Map<const Eigen::VectorXd>(t.data(), t.size()));
}

double mutual_information(const JointDist& d) {
  const double mi = entropy(d.x_marginal()) + entropy(d.y_marginal()) - joint_entropy(d);
  return std::max(mi, 0.0);
}

JointDist relabel_y(const JointDist& d, std::span<const int> f, int out_size) {
  if (static_cast<Eigen::Index>(f.size()) != d.y_size()) throw InvalidInput("relabelling size mismatch");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d.x_size(), out_size);
  for (Eigen::Index j = 0; j < d.y_size(); ++j) {
    if (f[j] < 0 || f[j] >= out_size) throw InvalidInput("relabelling target out of range");
    out.col(f[j]) += d.table().col(j);
  }
  return JointDist(std::move(out));
}

BinaryReduction binary_reduction_select(const JointDist& d) {
  const Eigen::VectorXd px = d.x_marginal();
  const double uniform = 1.0 / static_cast<double>(d.x_size());
  if (((px.array() - uniform).abs() > 1e-9).any()) {
    throw InvalidInput("binary reduction requires X uniform on its alphabet");
  }
  BinaryReduction out;
  const double hx = entropy(px);
  out.original_mi = mutual_information(d);
  out.information_ratio = hx > 0.0 ? out.original_mi / hx : 0.0;
  out.r = d.y_marginal();
  out.t = Eigen::VectorXd::Ones(d.y_size());
  double best_score = -1.0;
  for (Eigen::Index j = 0; j < d.y_size(); ++j) {
    if (out.r[j] > 0.0 && hx > 0.0) {
      out.t[j] = entropy(d.table().col(j) / out.r[j]) / hx;
    }
    const double score = out.r[j] * (1.0 - out.t[j]);
    if (score > best_score) {
      best_score = score;
      out.selected = j;
    }
  }
  out.indicator.assign(static_cast<std::size_t>(d.y_size()), 0);
  out.indicator[static_cast<std::size_t>(out.selected)] = 1;
  out.achieved_mi = mutual_information(relabel_y(d, out.indicator, 2));
  return out;
}

void validate(const ClassicalProtocol& protocol) {
  if (protocol.message.size() == 0 || protocol.decoder.size() == 0) {
    throw InvalidInput("protocol matrices must be nonempty");
  }
  if (protocol.message.cols() != protocol.decoder.rows()) {
    throw InvalidInput("message alphabet of Alice and Bob's decoder disagree");
  }
  for (const Eigen::MatrixXd* m : {&protocol.message, &protocol.decoder}) {
    if ((m->array() < 0.0).any() ||
        ((m->rowwise().sum().array() - 1.0).abs() > 1e-12).any()) {
      throw InvalidInput("protocol rows must be probability distributions");
    }
  }
}

JointDist original_joint(const ClassicalProtocol& protocol) {
  validate(protocol);
  const double px = 1.0 / static_cast<double>(protocol.message.rows());
  return JointDist(px * protocol.message * protocol.decoder);
}

CStarModel cstar_model(const ClassicalProtocol& protocol) {
  validate(protocol);
  const auto sigma = static_cast<double>(protocol.sigma());
  const auto n_x = protocol.message.rows();
  const auto n_z = protocol.lambda();
  // Given a match, Bob decoded the true alpha: (X, Z~) has the original joint.
  // Given a mismatch, Z~ is uniform and independent of X.
  Eigen::MatrixXd mismatch = Eigen::MatrixXd::Constant(
      n_x, n_z, 1.0 / (static_cast<double>(n_x) * static_cast<double>(n_z)));
  return CStarModel{1.0 / sigma, original_joint(protocol), JointDist(std::move(mismatch))};
}

namespace {

Eigen::Index draw(const Eigen::Ref<const Eigen::VectorXd>& pmf, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  Eigen::Index last = 0;
  for (Eigen::Index i = 0; i < pmf.size(); ++i) {
    if (pmf[i] <= 0.0) continue;
    acc += pmf[i];
    last = i;
    if (u < acc) return i;
  }
  return last;
}

}  // namespace

CStarSimulation simulate_cstar(const ClassicalProtocol& protocol, std::uint64_t runs,
                               std::uint64_t seed) {
  validate(protocol);
  if (runs == 0) throw InvalidInput("runs must be at least 1");
  const auto n_x = protocol.message.rows();
  const auto sigma = protocol.sigma();
  const auto lambda = protocol.lambda();
  Rng rng(seed);

  CStarSimulation out;
  out.runs = runs;
  out.match_counts = Eigen::MatrixXd::Zero(n_x, lambda);
  for (std::uint64_t n = 0; n < runs; ++n) {
    // Shared randomness first: the guess and Bob's decoding of it.
    const auto guess = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(sigma)));
    const Eigen::VectorXd decoder_row = protocol.decoder.row(guess).transpose();
    const Eigen::Index z_bar = draw(decoder_row, rng);
    const auto x = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n_x)));
    const Eigen::VectorXd message_row = protocol.message.row(x).transpose();
    const Eigen::Index alpha = draw(message_row, rng);
    if (alpha == guess) {
      ++out.matches;
      out.match_counts(x, z_bar) += 1.0;
    } else {
      rng.below(static_cast<std::uint64_t>(lambda));  // Bob's uniform output, discarded
    }
  }

  const auto n = static_cast<double>(runs);
  out.match_rate = static_cast<double>(out.matches) / n;
  out.match_rate_stderr = std::sqrt(out.match_rate * (1.0 - out.match_rate) / n);
  out.original_mi = mutual_information(original_joint(protocol));
  if (out.matches == 0) return out;

  const auto m = static_cast<double>(out.matches);
  const JointDist empirical(out.match_counts / m);
  out.conditional_mi = mutual_information(empirical);

  const Eigen::VectorXd px = empirical.x_marginal();
  const Eigen::VectorXd pz = empirical.y_marginal();
  double second_moment = 0.0;
  for (Eigen::Index i = 0; i < n_x; ++i) {
    for (Eigen::Index j = 0; j < lambda; ++j) {
      const double p = empirical.table()(i, j);
      if (p <= 0.0) continue;
      const double l = std::log2(p / (px[i] * pz[j]));
      second_moment += p * l * l;
    }
  }
  const double delta_var = std::max(second_moment - out.conditional_mi * out.conditional_mi, 0.0);
  const auto cells = static_cast<double>((empirical.table().array() > 0.0).count());
  const auto rows = static_cast<double>((px.array() > 0.0).count());
  const auto cols = static_cast<double>((pz.array() > 0.0).count());
  const double scale = 2.0 * m * std::numbers::ln2;
  out.conditional_mi_bias = (cells - rows - cols + 1.0) / scale;
  const double dof = std::max((rows - 1.0) * (cols - 1.0), 1.0);
  out.conditional_mi_stderr = std::sqrt(delta_var / m + 2.0 * dof / (scale * scale));
  return out;
}

}  // namespace chshq
