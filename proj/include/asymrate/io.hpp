#pragma once

#include "json.hpp"

#include <string>
#include <utility>
#include <vector>

#include "asymrate/operators.hpp"

namespace asym {

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// square matrices: {dim, re, im} row-major; rectangular ones use {rows, cols, re, im}
nlohmann::json matrix_to_json(const Mat& m);
Mat matrix_from_json(const nlohmann::json& j);

nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);
void write_text_file(const std::string& path, const std::string& text);

// two-column CSV, header "n,value"; '#' lines are comments
void write_sequence_csv(const std::string& path, const std::vector<long long>& index,
                        const std::vector<double>& values,
                        const std::vector<std::string>& preamble = {});
std::vector<std::pair<long long, double>> read_sequence_csv(const std::string& path);

std::string format_double(double v);

}  // namespace asym
