#include "asymrate/reference_states.hpp"

#include <cmath>
#include <stdexcept>

namespace asym {

Vec phi_coh() {
  Vec v(2);
  v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  return v;
}

HermitianOperator coh_hamiltonian() {
  Mat h = Mat::Zero(2, 2);
  h(1, 1) = 1.0;
  return HermitianOperator(h);
}

Vec qutrit_example_psi1() {
  Vec v(3);
  v << 0.5, 0.5, 1.0 / std::sqrt(2.0);
  return v;
}

Vec qutrit_example_psi2() {
  Vec v(3);
  v << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0.0;
  return v;
}

HermitianOperator qutrit_example_hamiltonian() {
  Mat h = Mat::Zero(3, 3);
  h(1, 1) = 1.0;
  h(2, 2) = 2.0;
  return HermitianOperator(h);
}

DensityMatrix qutrit_example_state(double q) {
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("qutrit_example_state: q must lie in [0,1]");
  Vec p1 = qutrit_example_psi1(), p2 = qutrit_example_psi2();
  Mat rho = (1.0 - q) * (p1 * p1.adjoint()) + q * (p2 * p2.adjoint());
  return DensityMatrix(rho);
}

double qutrit_example_sld_closed_form(double q) {
  return (11.0 - 15.0 * q + 8.0 * q * q) / 16.0;
}

}  // namespace asym
