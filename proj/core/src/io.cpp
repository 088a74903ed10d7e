#include "potcap/io.hpp"

#include <fstream>

#include "potcap/error.hpp"

namespace potcap {

namespace {

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) {
    throw ConfigError(std::string("missing field '") + name + "'");
  }
  return j.at(name);
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json r = Json::array(), c = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      r.push_back(m(i, k).real());
      c.push_back(m(i, k).imag());
    }
    re.push_back(std::move(r));
    im.push_back(std::move(c));
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"real", re}, {"imag", im}};
}

Matrix matrix_from_json(const Json& j) {
  try {
    const int rows = field(j, "rows").get<int>();
    const int cols = field(j, "cols").get<int>();
    if (rows < 0 || cols < 0) throw ConfigError("matrix dimensions must be non-negative");
    const Json& re = field(j, "real");
    const bool has_im = j.contains("imag");
    if (!re.is_array() || static_cast<int>(re.size()) != rows) {
      throw ConfigError("matrix 'real' must have 'rows' rows");
    }
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
      if (!re[i].is_array() || static_cast<int>(re[i].size()) != cols) {
        throw ConfigError("matrix row " + std::to_string(i) + " has the wrong length");
      }
      for (int k = 0; k < cols; ++k) {
        const double im = has_im ? j.at("imag").at(i).at(k).get<double>() : 0.0;
        m(i, k) = cplx(re[i][k].get<double>(), im);
      }
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed matrix: ") + e.what());
  }
}

RealVector real_vector_from_json(const Json& j) {
  RealVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

Json channel_to_json(const KrausChannel& ch) {
  Json kraus = Json::array();
  for (const auto& k : ch.kraus()) kraus.push_back(matrix_to_json(k));
  return Json{{"name", ch.name()}, {"d_in", ch.d_in()}, {"d_out", ch.d_out()}, {"kraus", kraus}};
}

KrausChannel channel_from_json(const Json& j) {
  const Json& list = field(j, "kraus");
  if (!list.is_array() || list.empty()) throw ConfigError("'kraus' must be a non-empty array");
  std::vector<Matrix> kraus;
  for (const auto& k : list) kraus.push_back(matrix_from_json(k));
  const std::string name = j.contains("name") ? j.at("name").get<std::string>() : "custom";
  if (j.contains("d_in") && j.at("d_in").get<int>() != kraus.front().cols()) {
    throw ConfigError("'d_in' does not match the Kraus operators");
  }
  if (j.contains("d_out") && j.at("d_out").get<int>() != kraus.front().rows()) {
    throw ConfigError("'d_out' does not match the Kraus operators");
  }
  return KrausChannel(std::move(kraus), name);
}

KrausChannel read_channel_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open channel file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("channel file '" + path + "': " + e.what());
  }
  return channel_from_json(j);
}

}  // namespace potcap
