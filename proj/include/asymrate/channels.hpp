#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"

#include "asymrate/operators.hpp"

namespace asym {

class QuantumChannel {
 public:
  explicit QuantumChannel(std::vector<Mat> kraus);
  int dim_in() const { return static_cast<int>(kraus_[0].cols()); }
  int dim_out() const { return static_cast<int>(kraus_[0].rows()); }
  const std::vector<Mat>& kraus() const { return kraus_; }
  const Mat& choi() const { return choi_; }

 private:
  std::vector<Mat> kraus_;
  Mat choi_;  // sum_ij E(|i><j|) (x) |i><j|, row index pairs (out, in)
};

DensityMatrix apply(const QuantumChannel& ch, const DensityMatrix& rho);

struct CovarianceCheck {
  bool covariant;
  double residual;  // max-norm of [choi, H_out (x) I - I (x) H_in^T]
};

CovarianceCheck is_covariant(const QuantumChannel& ch, const HermitianOperator& h_in,
                             const HermitianOperator& h_out, double tol = 1e-9);

QuantumChannel dephasing_channel(const HermitianOperator& h);

// couples the input to a ground-state ancilla with H = diag(0..ancilla_dim-1), applies a
// block-Haar energy-conserving unitary, traces out a derived environment
QuantumChannel random_covariant_channel(const HermitianOperator& h_in,
                                        const HermitianOperator& h_out, int ancilla_dim,
                                        std::uint64_t seed);

nlohmann::json channel_to_json(const QuantumChannel& ch);
QuantumChannel channel_from_json(const nlohmann::json& j);

}  // namespace asym
