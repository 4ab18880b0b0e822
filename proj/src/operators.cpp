#include "asymrate/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace asym {

Mat symmetrize(const Mat& a) {
  if (a.rows() != a.cols()) throw dim_error("symmetrize: matrix must be square");
  double dev = (a - a.adjoint()).cwiseAbs().maxCoeff();
  if (dev > kSymmetrizeRejectTol)
    throw std::invalid_argument("symmetrize: anti-Hermitian deviation " + std::to_string(dev) +
                                " exceeds 1e-8");
  return 0.5 * (a + a.adjoint());
}

HermitianOperator::HermitianOperator(const Mat& entries) : m_(symmetrize(entries)) {}

DensityMatrix::DensityMatrix(const Mat& entries) : m_(symmetrize(entries)) {
  double tr_err = std::abs(m_.trace() - cplx(1.0, 0.0));
  if (tr_err > kTraceTol)
    throw std::invalid_argument("DensityMatrix: trace deviates from 1 by " + std::to_string(tr_err));
  Eigen::SelfAdjointEigenSolver<Mat> es(m_, Eigen::EigenvaluesOnly);
  double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < kPsdFloor)
    throw std::invalid_argument("DensityMatrix: eigenvalue " + std::to_string(min_eig) +
                                " below -1e-10");
}

DensityMatrix DensityMatrix::pure(const Vec& psi) {
  double n = psi.norm();
  if (n < 1e-12) throw std::invalid_argument("DensityMatrix::pure: zero vector");
  Vec u = psi / n;
  return DensityMatrix(u * u.adjoint());
}

bool DensityMatrix::is_pure(double tol) const {
  double purity = (m_ * m_).trace().real();
  return std::abs(purity - 1.0) <= tol;
}

Vec DensityMatrix::pure_vector(double tol) const {
  EigenSystem es = eig_hermitian(m_);
  int last = dim() - 1;
  if (std::abs(es.eigenvalues(last) - 1.0) > tol)
    throw std::invalid_argument("pure_vector: state is not pure (top eigenvalue " +
                                std::to_string(es.eigenvalues(last)) + ")");
  return es.eigenvectors.col(last);
}

EigenSystem eig_hermitian(const Mat& a) {
  if (a.rows() != a.cols()) throw dim_error("eig_hermitian: matrix must be square");
  Mat h = symmetrize(a);
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  if (es.info() != Eigen::Success) throw std::runtime_error("eig_hermitian: solver failed");
  EigenSystem out{es.eigenvalues(), es.eigenvectors()};
  const Mat& v = out.eigenvectors;
  Mat rebuilt = v * out.eigenvalues.asDiagonal() * v.adjoint();
  if ((rebuilt - h).cwiseAbs().maxCoeff() > kEigCheckTol)
    throw std::runtime_error("eig_hermitian: reconstruction error above 1e-9");
  Mat gram = v.adjoint() * v;
  gram.diagonal().array() -= 1.0;
  if (gram.cwiseAbs().maxCoeff() > kEigCheckTol)
    throw std::runtime_error("eig_hermitian: eigenvector matrix is not unitary to 1e-9");
  return out;
}

EigenSystem eig_hermitian(const HermitianOperator& a) { return eig_hermitian(a.matrix()); }

double trace_distance(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw dim_error("trace_distance: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(a - b), Eigen::EigenvaluesOnly);
  double d = 0.5 * es.eigenvalues().cwiseAbs().sum();
  return std::clamp(d, 0.0, 1.0);
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return trace_distance(rho.matrix(), sigma.matrix());
}

DensityMatrix time_evolve(const DensityMatrix& rho, const HermitianOperator& h, double t) {
  if (rho.dim() != h.dim()) throw dim_error("time_evolve: dimension mismatch");
  EigenSystem es = eig_hermitian(h);
  Vec phases(h.dim());
  for (int i = 0; i < h.dim(); ++i) phases(i) = std::exp(cplx(0.0, -es.eigenvalues(i) * t));
  Mat u = es.eigenvectors * phases.asDiagonal() * es.eigenvectors.adjoint();
  return DensityMatrix(u * rho.matrix() * u.adjoint());
}

Mat tensor(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Vec tensor(const Vec& a, const Vec& b) {
  Vec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

Mat partial_trace(const Mat& ab, const std::vector<int>& dims, int which) {
  long long total = 1;
  for (int d : dims) {
    if (d <= 0) throw std::invalid_argument("partial_trace: nonpositive factor dimension");
    total *= d;
  }
  if (ab.rows() != total || ab.cols() != total)
    throw dim_error("partial_trace: matrix does not match factor dimensions");
  if (which < 0 || which >= static_cast<int>(dims.size()))
    throw std::invalid_argument("partial_trace: factor index out of range");
  long long right = 1;
  for (size_t i = which + 1; i < dims.size(); ++i) right *= dims[i];
  long long dw = dims[which];
  long long left = total / (dw * right);
  long long rest = left * right;
  Mat out = Mat::Zero(rest, rest);
  for (long long l1 = 0; l1 < left; ++l1)
    for (long long r1 = 0; r1 < right; ++r1)
      for (long long l2 = 0; l2 < left; ++l2)
        for (long long r2 = 0; r2 < right; ++r2) {
          cplx s(0.0, 0.0);
          for (long long k = 0; k < dw; ++k)
            s += ab((l1 * dw + k) * right + r1, (l2 * dw + k) * right + r2);
          out(l1 * right + r1, l2 * right + r2) = s;
        }
  return out;
}

HermitianOperator iid_hamiltonian(const HermitianOperator& h, int k, int dim_cap) {
  if (k < 1) throw std::invalid_argument("iid_hamiltonian: k must be >= 1");
  long long d = h.dim(), total = 1;
  for (int i = 0; i < k; ++i) {
    total *= d;
    if (total > dim_cap)
      throw dim_error("iid_hamiltonian: dim^k exceeds cap " + std::to_string(dim_cap));
  }
  Mat acc = h.matrix();
  long long cur = d;
  Mat single = h.matrix();
  Mat id_d = Mat::Identity(d, d);
  for (int i = 1; i < k; ++i) {
    acc = tensor(acc, id_d) + tensor(Mat::Identity(cur, cur), single);
    cur *= d;
  }
  return HermitianOperator(acc);
}

double variance(const DensityMatrix& rho, const HermitianOperator& h) {
  if (rho.dim() != h.dim()) throw dim_error("variance: dimension mismatch");
  const Mat& r = rho.matrix();
  const Mat& m = h.matrix();
  double ex = (r * m).trace().real();
  double ex2 = (r * m * m).trace().real();
  return std::max(0.0, ex2 - ex * ex);
}

double variance(const Vec& psi, const Mat& h) {
  Vec hp = h * psi;
  double ex = psi.dot(hp).real();
  double ex2 = hp.squaredNorm();
  return std::max(0.0, ex2 - ex * ex);
}

}  // namespace asym
