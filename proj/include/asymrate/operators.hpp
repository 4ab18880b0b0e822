#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

namespace asym {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

inline constexpr double kSymmetrizeRejectTol = 1e-8;
inline constexpr double kPsdFloor = -1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kEigCheckTol = 1e-9;
inline constexpr int kDefaultDimCap = 4096;

// thrown on shape/compatibility problems; a subtype of invalid input
struct dim_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// (A + A^dagger)/2; rejects inputs whose anti-Hermitian part exceeds 1e-8
Mat symmetrize(const Mat& a);

class HermitianOperator {
 public:
  explicit HermitianOperator(const Mat& entries);
  int dim() const { return static_cast<int>(m_.rows()); }
  const Mat& matrix() const { return m_; }

 private:
  Mat m_;
};

class DensityMatrix {
 public:
  explicit DensityMatrix(const Mat& entries);
  static DensityMatrix pure(const Vec& psi);
  int dim() const { return static_cast<int>(m_.rows()); }
  const Mat& matrix() const { return m_; }
  bool is_pure(double tol = 1e-9) const;
  // top eigenvector; used when an operation needs the state vector of a pure input
  Vec pure_vector(double tol = 1e-9) const;

 private:
  Mat m_;
};

struct EigenSystem {
  RVec eigenvalues;  // ascending
  Mat eigenvectors;  // columns, unitary
};

EigenSystem eig_hermitian(const Mat& a);
EigenSystem eig_hermitian(const HermitianOperator& a);

double trace_distance(const Mat& a, const Mat& b);
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

DensityMatrix time_evolve(const DensityMatrix& rho, const HermitianOperator& h, double t);

Mat tensor(const Mat& a, const Mat& b);
Vec tensor(const Vec& a, const Vec& b);
// trace out factor `which` (0-based) of a state on the tensor product of `dims`
Mat partial_trace(const Mat& ab, const std::vector<int>& dims, int which);

HermitianOperator iid_hamiltonian(const HermitianOperator& h, int k, int dim_cap = kDefaultDimCap);

double variance(const DensityMatrix& rho, const HermitianOperator& h);
double variance(const Vec& psi, const Mat& h);

}  // namespace asym
