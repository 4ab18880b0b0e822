#include "asymrate/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace asym {

nlohmann::json matrix_to_json(const Mat& m) {
  nlohmann::json j;
  if (m.rows() == m.cols()) {
    j["dim"] = m.rows();
  } else {
    j["rows"] = m.rows();
    j["cols"] = m.cols();
  }
  std::vector<double> re, im;
  re.reserve(m.size());
  im.reserve(m.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      re.push_back(m(i, k).real());
      im.push_back(m(i, k).imag());
    }
  j["re"] = re;
  j["im"] = im;
  return j;
}

Mat matrix_from_json(const nlohmann::json& j) {
  long long rows, cols;
  if (j.contains("dim")) {
    rows = cols = j.at("dim").get<long long>();
  } else {
    rows = j.at("rows").get<long long>();
    cols = j.at("cols").get<long long>();
  }
  if (rows <= 0 || cols <= 0) throw io_error("matrix json: nonpositive dimension");
  auto re = j.at("re").get<std::vector<double>>();
  std::vector<double> im(re.size(), 0.0);
  if (j.contains("im")) im = j.at("im").get<std::vector<double>>();
  if (static_cast<long long>(re.size()) != rows * cols || im.size() != re.size())
    throw io_error("matrix json: re/im length does not match dimensions");
  Mat m(rows, cols);
  for (long long i = 0; i < rows; ++i)
    for (long long k = 0; k < cols; ++k) m(i, k) = cplx(re[i * cols + k], im[i * cols + k]);
  return m;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw io_error("cannot parse " + path + ": " + e.what());
  }
  return j;
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write " + path);
  out << text;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_sequence_csv(const std::string& path, const std::vector<long long>& index,
                        const std::vector<double>& values,
                        const std::vector<std::string>& preamble) {
  if (index.size() != values.size()) throw io_error("sequence csv: index/value size mismatch");
  std::ostringstream out;
  for (const auto& line : preamble) out << "# " << line << "\n";
  out << "n,value\n";
  for (size_t i = 0; i < index.size(); ++i)
    out << index[i] << "," << format_double(values[i]) << "\n";
  write_text_file(path, out.str());
}

std::vector<std::pair<long long, double>> read_sequence_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);
  std::vector<std::pair<long long, double>> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    long long n;
    double v;
    if (ss >> n >> v) out.emplace_back(n, v);
    // non-numeric lines (e.g. the header) are skipped
  }
  if (out.empty()) throw io_error("no data rows in " + path);
  return out;
}

}  // namespace asym
