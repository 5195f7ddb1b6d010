#pragma once

#include <string>
#include <utility>
#include <vector>

#include "corrconv/states.hpp"

namespace corrconv {

/// Operator-sum representation of a channel. Construction enforces the
/// completeness relation sum_i N_i^dag N_i = I.
class KrausChannel {
 public:
  KrausChannel(std::vector<ComplexMatrix> operators, std::string label)
      : ops_(std::move(operators)), label_(std::move(label)) {
    if (ops_.empty()) throw std::invalid_argument("Kraus channel needs at least one operator");
    const Eigen::Index rows = ops_.front().rows();
    const Eigen::Index cols = ops_.front().cols();
    for (const auto& op : ops_)
      if (op.rows() != rows || op.cols() != cols)
        throw std::invalid_argument("Kraus operators must share one shape");
    ComplexMatrix sum = ComplexMatrix::Zero(cols, cols);
    for (const auto& op : ops_) sum += op.adjoint() * op;
    const double dev = (sum - ComplexMatrix::Identity(cols, cols)).cwiseAbs().maxCoeff();
    if (dev > tol::completeness)
      throw std::invalid_argument("Kraus completeness violated by " + std::to_string(dev));
  }

  const std::vector<ComplexMatrix>& operators() const { return ops_; }
  const std::string& label() const { return label_; }
  Eigen::Index input_dim() const { return ops_.front().cols(); }
  Eigen::Index output_dim() const { return ops_.front().rows(); }

 private:
  std::vector<ComplexMatrix> ops_;
  std::string label_;
};

struct PauliNoise {
  double px = 0.0;
  double py = 0.0;
  double pz = 0.0;
};

struct PauliCapacity {
  double raw = 0.0;
  bool is_positive = false;
};

/// Single-shot quantum-capacity expression for a Pauli channel. The raw value
/// may be negative; only its sign is meaningful as a capacity statement.
inline PauliCapacity pauli_quantum_capacity(const PauliNoise& n) {
  if (n.px < 0.0 || n.py < 0.0 || n.pz < 0.0 || n.px + n.py + n.pz > 1.0 + 1e-12)
    throw std::invalid_argument("Pauli noise components must be nonnegative with sum <= 1");
  const double raw = 1.0 - 2.0 * (n.px + n.py + n.pz + std::sqrt(n.px * n.py) +
                                  std::sqrt(n.px * n.pz) + std::sqrt(n.py * n.pz));
  return PauliCapacity{raw, raw > 0.0};
}

/// Dephasing channel with error probability p: operators
/// sqrt(1 - p/2) I and sqrt(p/2) diag(1, -1). Coherences shrink by (1 - p).
inline KrausChannel phase_flip(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("phase flip probability must be in [0, 1]");
  ComplexMatrix n0 = std::sqrt(1.0 - 0.5 * p) * ComplexMatrix::Identity(2, 2);
  ComplexMatrix n1 = ComplexMatrix::Zero(2, 2);
  n1(0, 0) = std::sqrt(0.5 * p);
  n1(1, 1) = -std::sqrt(0.5 * p);
  return KrausChannel({std::move(n0), std::move(n1)}, "phase_flip(" + std::to_string(p) + ")");
}

inline KrausChannel identity_channel(int dim = 2) {
  return KrausChannel({ComplexMatrix::Identity(dim, dim)}, "identity");
}

/// Applies a channel to one subsystem: sum_i (I x N_i x I) rho (...)^dag.
inline DensityMatrix kraus_apply(const KrausChannel& channel, const DensityMatrix& rho, int target) {
  detail::check_subsystem(target, rho.subsystem_dims());
  if (channel.input_dim() != rho.subsystem_dims()[target] ||
      channel.output_dim() != channel.input_dim())
    throw std::invalid_argument("channel dimension does not match the target subsystem");
  ComplexMatrix out = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (const auto& op : channel.operators()) {
    const ComplexMatrix k = embed_operator(op, rho.subsystem_dims(), {target});
    out += k * rho.matrix() * k.adjoint();
  }
  return DensityMatrix(std::move(out), rho.subsystem_dims());
}

struct MeasurementOutcome {
  int outcome = 0;
  double probability = 0.0;
  DensityMatrix post_state;
};

/// Measure-and-prepare qubit channel: a projective measurement in the
/// standard basis whose classical result is re-encoded as |x><x|. Its Kraus
/// operators |0><0| and |1><1| are unit rank, and its action on half of any
/// entangled pair leaves a separable output.
class EntanglementBreakingChannel {
 public:
  EntanglementBreakingChannel() : kraus_(make_kraus()) {}

  const KrausChannel& kraus() const { return kraus_; }

  /// Measures a single-qubit state; the prepared post states are |x><x|.
  std::vector<MeasurementOutcome> measure(const DensityMatrix& rho) const {
    if (rho.dim() != 2) throw std::invalid_argument("flag measurement expects a single qubit");
    std::vector<MeasurementOutcome> outcomes;
    for (int x = 0; x < 2; ++x) {
      ComplexVector basis = ComplexVector::Zero(2);
      basis(x) = 1.0;
      outcomes.push_back(MeasurementOutcome{x, std::real(rho.matrix()(x, x)),
                                            pure_state(basis, {2})});
    }
    return outcomes;
  }

 private:
  static KrausChannel make_kraus() {
    ComplexMatrix p0 = ComplexMatrix::Zero(2, 2);
    ComplexMatrix p1 = ComplexMatrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    return KrausChannel({std::move(p0), std::move(p1)}, "measure_prepare");
  }

  KrausChannel kraus_;
};

/// Projective flag readout on the last subsystem of a three-part state.
/// Returns both outcomes with Born probabilities and the normalized
/// conditioned state of the leading subsystems. A zero-probability branch
/// gets the maximally mixed conditioned state.
inline std::vector<MeasurementOutcome> measure_flag(const DensityMatrix& rho_abc) {
  if (rho_abc.num_subsystems() != 3 || rho_abc.subsystem_dims().back() != 2)
    throw std::invalid_argument("flag measurement expects three subsystems with a qubit flag");
  const auto& dims = rho_abc.subsystem_dims();
  const long dab = dims[0] * dims[1];
  std::vector<MeasurementOutcome> outcomes;
  for (int x = 0; x < 2; ++x) {
    ComplexMatrix proj = ComplexMatrix::Zero(2, 2);
    proj(x, x) = 1.0;
    const ComplexMatrix p = embed_operator(proj, dims, {2});
    const ComplexMatrix projected = p * rho_abc.matrix() * p;
    const double prob = std::real(projected.trace());
    ComplexMatrix cond = partial_trace(projected, dims, {0, 1});
    if (prob > tol::support)
      cond /= prob;
    else
      cond = ComplexMatrix::Identity(dab, dab) / static_cast<double>(dab);
    outcomes.push_back(MeasurementOutcome{x, prob,
                                          DensityMatrix(std::move(cond), {dims[0], dims[1]})});
  }
  return outcomes;
}

/// Stacks the Kraus operators into an isometry U: input -> output x env with
/// U[(b*k + e), a] = N_e[b, a]. Tracing the environment out of U rho U^dag
/// recovers the operator-sum action.
inline ComplexMatrix isometric_extension(const KrausChannel& channel) {
  const Eigen::Index din = channel.input_dim();
  const Eigen::Index dout = channel.output_dim();
  const Eigen::Index k = static_cast<Eigen::Index>(channel.operators().size());
  ComplexMatrix u(dout * k, din);
  for (Eigen::Index b = 0; b < dout; ++b)
    for (Eigen::Index e = 0; e < k; ++e)
      u.row(b * k + e) = channel.operators()[static_cast<std::size_t>(e)].row(b);
  return u;
}

struct JointChannelResult {
  DensityMatrix state;
  /// True when the dephasing probability sits in the zero-quantum-capacity
  /// regime p >= 1/3; below it the construction still evaluates, tagged here.
  bool zero_capacity_regime = false;
};

/// Joint channel action on the three-qubit input: dephasing on B, and the
/// identity-measure-identity staging on the flag C with the measurement
/// deferred to measure_flag. The output is X-shaped on the A,B marginal with
/// corner gap (1 - p) times the input gap.
inline JointChannelResult apply_joint(const DensityMatrix& rho_abc, double p) {
  if (rho_abc.subsystem_dims() != std::vector<int>{2, 2, 2})
    throw std::invalid_argument("joint channel expects a three-qubit state");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("noise must lie in [0, 1]");
  DensityMatrix out = kraus_apply(phase_flip(p), rho_abc, 1);
  return JointChannelResult{std::move(out), p >= 1.0 / 3.0 - 1e-12};
}

}  // namespace corrconv
