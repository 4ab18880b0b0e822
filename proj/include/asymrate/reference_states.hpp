#pragma once

#include "asymrate/operators.hpp"

namespace asym {

// coherence bit (|0> + |1>)/sqrt(2) with H = diag(0,1); its QFI is normalized to 1
Vec phi_coh();
HermitianOperator coh_hamiltonian();

// worked qutrit mixture: rho(q) = (1-q)|psi1><psi1| + q|psi2><psi2|, H = diag(0,1,2)
Vec qutrit_example_psi1();  // (1/2, 1/2, 1/sqrt(2))
Vec qutrit_example_psi2();  // (1/sqrt(2), -1/sqrt(2), 0)
HermitianOperator qutrit_example_hamiltonian();
DensityMatrix qutrit_example_state(double q);
double qutrit_example_sld_closed_form(double q);  // (11 - 15q + 8q^2)/16

}  // namespace asym
