#include "asymrate/channels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <string>

namespace asym {

namespace {

Mat choi_from_kraus(const std::vector<Mat>& kraus) {
  long long din = kraus[0].cols(), dout = kraus[0].rows();
  Mat choi = Mat::Zero(din * dout, din * dout);
  for (const Mat& k : kraus) {
    // w[(a,i)] = K(a,i) so that choi = sum_e w w^dagger
    Vec w(dout * din);
    for (long long a = 0; a < dout; ++a)
      for (long long i = 0; i < din; ++i) w(a * din + i) = k(a, i);
    choi += w * w.adjoint();
  }
  return choi;
}

}  // namespace

QuantumChannel::QuantumChannel(std::vector<Mat> kraus) : kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw std::invalid_argument("QuantumChannel: empty Kraus list");
  long long din = kraus_[0].cols(), dout = kraus_[0].rows();
  for (const Mat& k : kraus_)
    if (k.cols() != din || k.rows() != dout)
      throw dim_error("QuantumChannel: inconsistent Kraus shapes");
  Mat comp = Mat::Zero(din, din);
  for (const Mat& k : kraus_) comp += k.adjoint() * k;
  comp.diagonal().array() -= 1.0;
  double dev = comp.cwiseAbs().maxCoeff();
  if (dev > 1e-9)
    throw std::invalid_argument("QuantumChannel: completeness violated by " + std::to_string(dev));
  choi_ = choi_from_kraus(kraus_);
  Eigen::SelfAdjointEigenSolver<Mat> es(choi_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw std::invalid_argument("QuantumChannel: Choi matrix not positive semidefinite");
}

DensityMatrix apply(const QuantumChannel& ch, const DensityMatrix& rho) {
  if (rho.dim() != ch.dim_in()) throw dim_error("apply: dimension mismatch");
  Mat out = Mat::Zero(ch.dim_out(), ch.dim_out());
  for (const Mat& k : ch.kraus()) out += k * rho.matrix() * k.adjoint();
  double tr = out.trace().real();
  if (std::abs(tr - 1.0) > 1e-9)
    throw std::runtime_error("apply: trace not preserved within 1e-9");
  return DensityMatrix(out / tr);
}

CovarianceCheck is_covariant(const QuantumChannel& ch, const HermitianOperator& h_in,
                             const HermitianOperator& h_out, double tol) {
  if (h_in.dim() != ch.dim_in() || h_out.dim() != ch.dim_out())
    throw dim_error("is_covariant: dimension mismatch");
  long long din = ch.dim_in(), dout = ch.dim_out();
  Mat id_in = Mat::Identity(din, din), id_out = Mat::Identity(dout, dout);
  Mat h_in_t = h_in.matrix().transpose();
  Mat gen = tensor(h_out.matrix(), id_in) - tensor(id_out, h_in_t);
  Mat comm = ch.choi() * gen - gen * ch.choi();
  double residual = comm.cwiseAbs().maxCoeff();
  return {residual <= tol, residual};
}

QuantumChannel dephasing_channel(const HermitianOperator& h) {
  EigenSystem es = eig_hermitian(h);
  int n = h.dim();
  std::vector<Mat> kraus;
  int i = 0;
  while (i < n) {
    int j = i;
    while (j < n && es.eigenvalues(j) - es.eigenvalues(i) <= 1e-9) ++j;
    Mat p = Mat::Zero(n, n);
    for (int k = i; k < j; ++k)
      p += es.eigenvectors.col(k) * es.eigenvectors.col(k).adjoint();
    kraus.push_back(p);
    i = j;
  }
  return QuantumChannel(std::move(kraus));
}

namespace {

std::vector<long long> integer_levels(const HermitianOperator& h, const char* role) {
  EigenSystem es = eig_hermitian(h);
  std::vector<long long> levels;
  for (int i = 0; i < h.dim(); ++i) {
    double r = std::round(es.eigenvalues(i));
    if (std::abs(es.eigenvalues(i) - r) > 1e-9)
      throw std::invalid_argument(std::string("random_covariant_channel: ") + role +
                                  " spectrum is not integer; normalize the period first");
    levels.push_back(static_cast<long long>(r));
  }
  return levels;
}

// coefficient map exponent -> count for the spectrum generating polynomial
std::map<long long, long long> spectrum_poly(const std::vector<long long>& levels) {
  std::map<long long, long long> p;
  for (long long e : levels) p[e] += 1;
  return p;
}

std::map<long long, long long> poly_mul(const std::map<long long, long long>& a,
                                        const std::map<long long, long long>& b) {
  std::map<long long, long long> out;
  for (auto& [ea, ca] : a)
    for (auto& [eb, cb] : b) out[ea + eb] += ca * cb;
  return out;
}

// exact long division; returns false when the remainder is nonzero or a quotient
// coefficient goes negative (spectra not realizable with this ancilla)
bool poly_div(std::map<long long, long long> num, const std::map<long long, long long>& den,
              std::map<long long, long long>& quot) {
  quot.clear();
  long long den_min = den.begin()->first;
  long long den_lead = den.begin()->second;
  while (true) {
    while (!num.empty() && num.begin()->second == 0) num.erase(num.begin());
    if (num.empty()) return true;
    auto [e, c] = *num.begin();
    if (c < 0 || c % den_lead != 0) return false;
    long long q = c / den_lead;
    long long qe = e - den_min;
    quot[qe] += q;
    for (auto& [ed, cd] : den) num[ed + qe] -= cd * q;
  }
}

Mat haar_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = cplx(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    cplx d = r(j, j);
    q.col(j) *= d / std::abs(d);
  }
  return q;
}

}  // namespace

QuantumChannel random_covariant_channel(const HermitianOperator& h_in,
                                        const HermitianOperator& h_out, int ancilla_dim,
                                        std::uint64_t seed) {
  if (ancilla_dim < 1)
    throw std::invalid_argument("random_covariant_channel: ancilla_dim must be >= 1");
  auto in_levels = integer_levels(h_in, "input");
  auto out_levels = integer_levels(h_out, "output");
  std::vector<long long> anc_levels(ancilla_dim);
  for (int a = 0; a < ancilla_dim; ++a) anc_levels[a] = a;

  auto p_total = poly_mul(spectrum_poly(in_levels), spectrum_poly(anc_levels));
  std::map<long long, long long> p_env;
  if (!poly_div(p_total, spectrum_poly(out_levels), p_env))
    throw std::invalid_argument("random_covariant_channel: incompatible spectra");
  std::vector<long long> env_levels;
  for (auto& [e, c] : p_env)
    for (long long k = 0; k < c; ++k) env_levels.push_back(e);

  int din = h_in.dim(), dout = h_out.dim();
  int denv = static_cast<int>(env_levels.size());
  if (din * ancilla_dim != dout * denv)
    throw std::runtime_error("random_covariant_channel: internal dimension mismatch");

  EigenSystem es_in = eig_hermitian(h_in);
  EigenSystem es_out = eig_hermitian(h_out);

  // joint bases, indexed (system, ancilla/environment), grouped by total energy
  struct Slot {
    long long energy;
    int sys, aux;
  };
  auto build_slots = [](const std::vector<long long>& sys_lv, const std::vector<long long>& aux_lv) {
    std::vector<Slot> slots;
    for (int s = 0; s < static_cast<int>(sys_lv.size()); ++s)
      for (int a = 0; a < static_cast<int>(aux_lv.size()); ++a)
        slots.push_back({sys_lv[s] + aux_lv[a], s, a});
    std::stable_sort(slots.begin(), slots.end(),
                     [](const Slot& x, const Slot& y) { return x.energy < y.energy; });
    return slots;
  };
  auto in_slots = build_slots(in_levels, anc_levels);
  auto out_slots = build_slots(out_levels, env_levels);

  std::mt19937_64 rng(seed);
  int total = din * ancilla_dim;
  // u(row = out slot index, col = in slot index) in the sorted joint bases
  Mat u = Mat::Zero(total, total);
  size_t i = 0, o = 0;
  while (i < in_slots.size()) {
    long long e = in_slots[i].energy;
    size_t i2 = i, o2 = o;
    while (i2 < in_slots.size() && in_slots[i2].energy == e) ++i2;
    while (o2 < out_slots.size() && out_slots[o2].energy == e) ++o2;
    if (o >= out_slots.size() || out_slots[o].energy != e || (o2 - o) != (i2 - i))
      throw std::runtime_error("random_covariant_channel: energy block mismatch");
    Mat block = haar_unitary(static_cast<int>(i2 - i), rng);
    for (size_t r = 0; r < o2 - o; ++r)
      for (size_t c = 0; c < i2 - i; ++c) u(o + r, i + c) = block(r, c);
    i = i2;
    o = o2;
  }

  // K_e(b, j) = <out-eigvec b, env e| U |in-eigvec j, ancilla ground>, then back to the
  // computational bases of h_in / h_out
  std::vector<Mat> kraus_eig(denv, Mat::Zero(dout, din));
  for (size_t oc = 0; oc < out_slots.size(); ++oc)
    for (size_t ic = 0; ic < in_slots.size(); ++ic) {
      if (in_slots[ic].aux != 0) continue;  // ancilla starts in its ground state
      kraus_eig[out_slots[oc].aux](out_slots[oc].sys, in_slots[ic].sys) += u(oc, ic);
    }
  std::vector<Mat> kraus;
  kraus.reserve(denv);
  for (const Mat& k : kraus_eig)
    kraus.push_back(es_out.eigenvectors * k * es_in.eigenvectors.adjoint());

  QuantumChannel ch(std::move(kraus));
  CovarianceCheck cc = is_covariant(ch, h_in, h_out, 1e-9);
  if (!cc.covariant)
    throw std::runtime_error("random_covariant_channel: covariance residual " +
                             std::to_string(cc.residual));
  return ch;
}

nlohmann::json channel_to_json(const QuantumChannel& ch) {
  nlohmann::json j;
  j["dim_in"] = ch.dim_in();
  j["dim_out"] = ch.dim_out();
  nlohmann::json list = nlohmann::json::array();
  for (const Mat& k : ch.kraus()) {
    nlohmann::json entry;
    entry["rows"] = k.rows();
    entry["cols"] = k.cols();
    std::vector<double> re, im;
    for (Eigen::Index r = 0; r < k.rows(); ++r)
      for (Eigen::Index c = 0; c < k.cols(); ++c) {
        re.push_back(k(r, c).real());
        im.push_back(k(r, c).imag());
      }
    entry["re"] = re;
    entry["im"] = im;
    list.push_back(entry);
  }
  j["kraus"] = list;
  return j;
}

QuantumChannel channel_from_json(const nlohmann::json& j) {
  std::vector<Mat> kraus;
  for (const auto& entry : j.at("kraus")) {
    long long rows, cols;
    if (entry.contains("dim")) {
      rows = cols = entry.at("dim").get<long long>();
    } else {
      rows = entry.at("rows").get<long long>();
      cols = entry.at("cols").get<long long>();
    }
    auto re = entry.at("re").get<std::vector<double>>();
    auto im = entry.at("im").get<std::vector<double>>();
    if (static_cast<long long>(re.size()) != rows * cols || im.size() != re.size())
      throw std::invalid_argument("channel json: kraus entry size mismatch");
    Mat k(rows, cols);
    for (long long r = 0; r < rows; ++r)
      for (long long c = 0; c < cols; ++c) k(r, c) = cplx(re[r * cols + c], im[r * cols + c]);
    kraus.push_back(k);
  }
  return QuantumChannel(std::move(kraus));
}

}  // namespace asym
