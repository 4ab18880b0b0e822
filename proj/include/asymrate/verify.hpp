#pragma once

#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "asymrate/operators.hpp"

namespace asym {

struct InvariantResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string note;
};

struct VerifyReport {
  std::string suite;
  std::vector<InvariantResult> results;
  bool all_pass() const;
};

std::vector<std::string> verify_suite_names();

// suite in {skew, smooth, channels, sequences, rates, all}
VerifyReport run_verify_suite(const std::string& suite);

nlohmann::json verify_report_to_json(const VerifyReport& report);

// seeded sampling helpers shared with the test binaries
Vec random_pure_state(int dim, std::mt19937_64& rng);
DensityMatrix random_density_matrix(int dim, std::mt19937_64& rng);
HermitianOperator random_hermitian_operator(int dim, std::mt19937_64& rng);
HermitianOperator random_integer_hamiltonian(int dim, long long max_level, std::mt19937_64& rng);
Mat random_unitary(int dim, std::mt19937_64& rng);

}  // namespace asym
