#include "grassmann/matrix_io.hpp"

#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "grassmann/error.hpp"

namespace grassmann {

using nlohmann::json;

json matrix_to_json(const Mat& m) {
  json data = json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      data.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"scalar", "complex"},
              {"data", std::move(data)}};
}

Mat matrix_from_json(const json& j) {
  try {
    if (!j.is_object()) throw Error(ErrorKind::parse_error, "matrix must be a JSON object");
    const auto rows = j.at("rows").get<long long>();
    const auto cols = j.at("cols").get<long long>();
    if (rows < 0 || cols < 0) throw Error(ErrorKind::parse_error, "negative dimensions");
    const std::string scalar = j.value("scalar", "complex");
    const json& data = j.at("data");
    if (!data.is_array() || static_cast<long long>(data.size()) != rows * cols)
      throw Error(ErrorKind::parse_error, "data length does not equal rows*cols");
    Mat m(rows, cols);
    for (long long k = 0; k < rows * cols; ++k) {
      const json& e = data[static_cast<std::size_t>(k)];
      cplx z;
      if (scalar == "complex") {
        if (!e.is_array() || e.size() != 2)
          throw Error(ErrorKind::parse_error, "complex entries are [re, im] pairs");
        z = cplx(e[0].get<double>(), e[1].get<double>());
      } else if (scalar == "real") {
        z = cplx(e.get<double>(), 0.0);
      } else {
        throw Error(ErrorKind::parse_error, "unknown scalar kind '" + scalar + "'");
      }
      m(k / cols, k % cols) = z;
    }
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse_error, e.what());
  }
}

json vector_to_json(const Vec& v) { return matrix_to_json(v); }

Vec vector_from_json(const json& j) {
  const Mat m = matrix_from_json(j);
  if (m.cols() != 1) throw Error(ErrorKind::parse_error, "expected a column vector");
  return m.col(0);
}

Mat read_csv_real(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos)
          throw Error(ErrorKind::parse_error, "trailing characters in '" + cell + "'");
      } catch (const std::logic_error&) {
        throw Error(ErrorKind::parse_error, "not a real number: '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw Error(ErrorKind::parse_error, "ragged CSV rows");
    rows.push_back(std::move(row));
  }
  const Index r = static_cast<Index>(rows.size());
  const Index c = rows.empty() ? 0 : static_cast<Index>(rows.front().size());
  Mat m(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) m(i, j) = rows[i][j];
  return m;
}

}  // namespace grassmann
