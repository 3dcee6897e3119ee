#include "xorsep/serialization.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace xorsep {

void to_json(nlohmann::json& j, const CMatrix& m) {
  std::vector<double> data;
  data.reserve(2 * static_cast<std::size_t>(m.size()));
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) {
      data.push_back(m(r, c).real());
      data.push_back(m(r, c).imag());
    }
  j = nlohmann::json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

void from_json(const nlohmann::json& j, CMatrix& m) {
  const Index rows = j.at("rows").get<Index>();
  const Index cols = j.at("cols").get<Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (static_cast<Index>(data.size()) != 2 * rows * cols)
    throw std::invalid_argument("matrix json: data length mismatch");
  m.resize(rows, cols);
  std::size_t i = 0;
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) {
      m(r, c) = Complex(data[i], data[i + 1]);
      i += 2;
    }
}

void to_json(nlohmann::json& j, const NormEstimate& e) {
  j = nlohmann::json{{"value", e.value},           {"kind", to_string(e.kind)},
                     {"restarts", e.restarts},     {"iterations", e.iterations},
                     {"tol", e.tol},               {"converged", e.converged}};
}

void from_json(const nlohmann::json& j, NormEstimate& e) {
  e.value = j.at("value").get<double>();
  e.kind = bound_kind_from_string(j.at("kind").get<std::string>());
  e.restarts = j.at("restarts").get<int>();
  e.iterations = j.at("iterations").get<int>();
  e.tol = j.at("tol").get<double>();
  e.converged = j.at("converged").get<bool>();
}

void to_json(nlohmann::json& j, const InstanceParams& p) {
  j = nlohmann::json{{"k", p.k}, {"m", p.m}, {"D", p.D}, {"seed", p.seed}};
}

void from_json(const nlohmann::json& j, InstanceParams& p) {
  p.k = j.at("k").get<int>();
  p.m = j.at("m").get<Index>();
  p.D = j.at("D").get<Index>();
  p.seed = j.at("seed").get<std::uint64_t>();
}

namespace {

nlohmann::json vectors_to_json(const std::vector<CVector>& vs) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& v : vs) {
    CMatrix m = v;
    nlohmann::json jm;
    to_json(jm, m);
    arr.push_back(std::move(jm));
  }
  return arr;
}

std::vector<CVector> vectors_from_json(const nlohmann::json& arr) {
  std::vector<CVector> out;
  for (const auto& jm : arr) {
    CMatrix m;
    from_json(jm, m);
    if (m.cols() != 1) throw std::invalid_argument("vector json: expected one column");
    out.push_back(m.col(0));
  }
  return out;
}

nlohmann::json matrices_to_json(const std::vector<CMatrix>& ms) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& m : ms) {
    nlohmann::json jm;
    to_json(jm, m);
    arr.push_back(std::move(jm));
  }
  return arr;
}

std::vector<CMatrix> matrices_from_json(const nlohmann::json& arr) {
  std::vector<CMatrix> out;
  for (const auto& jm : arr) {
    CMatrix m;
    from_json(jm, m);
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace

void to_json(nlohmann::json& j, const EpsCertificate& c) {
  j = nlohmann::json{{"left", vectors_to_json(c.left)},
                     {"right", vectors_to_json(c.right)},
                     {"value", c.value}};
}

void from_json(const nlohmann::json& j, EpsCertificate& c) {
  c.left = vectors_from_json(j.at("left"));
  c.right = vectors_from_json(j.at("right"));
  c.value = j.at("value").get<double>();
}

void to_json(nlohmann::json& j, const MinNormCertificate& c) {
  CMatrix psi = c.psi, eta = c.eta;
  nlohmann::json jp, je;
  to_json(jp, psi);
  to_json(je, eta);
  j = nlohmann::json{{"unitaries", matrices_to_json(c.unitaries)},
                     {"psi", std::move(jp)},
                     {"eta", std::move(je)},
                     {"ancilla_dim", c.ancilla_dim},
                     {"value", c.value}};
}

void from_json(const nlohmann::json& j, MinNormCertificate& c) {
  c.unitaries = matrices_from_json(j.at("unitaries"));
  CMatrix psi, eta;
  from_json(j.at("psi"), psi);
  from_json(j.at("eta"), eta);
  if (psi.cols() != 1 || eta.cols() != 1)
    throw std::invalid_argument("certificate json: state must be a column");
  c.psi = psi.col(0);
  c.eta = eta.col(0);
  c.ancilla_dim = j.at("ancilla_dim").get<Index>();
  c.value = j.at("value").get<double>();
}

void to_json(nlohmann::json& j, const QuantumXorGame& g) {
  nlohmann::json jm;
  to_json(jm, g.g);
  j = nlohmann::json{{"k", g.k}, {"local_dims", g.local_dims}, {"g", std::move(jm)}};
}

void from_json(const nlohmann::json& j, QuantumXorGame& g) {
  g.k = j.at("k").get<int>();
  g.local_dims = j.at("local_dims").get<std::vector<Index>>();
  from_json(j.at("g"), g.g);
}

nlohmann::json instance_manifest(const InstanceParams& params) {
  nlohmann::json j;
  to_json(j, params);
  j["stream"] = "f/g";
  j["draw_order"] = "(r,s,t,v) lexicographic";
  return j;
}

nlohmann::json tau_manifest(const TauSample& tau) {
  return nlohmann::json{{"n", tau.n},
                        {"k", tau.k},
                        {"seed", tau.seed},
                        {"streams", {"tau/g", "tau/gp"}}};
}

void write_matrix_binary(const std::string& path, const CMatrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_matrix_binary: cannot open " + path);
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) {
      const double re = m(r, c).real(), im = m(r, c).imag();
      out.write(reinterpret_cast<const char*>(&re), sizeof(double));
      out.write(reinterpret_cast<const char*>(&im), sizeof(double));
    }
  if (!out) throw std::runtime_error("write_matrix_binary: write failed for " + path);
}

CMatrix read_matrix_binary(const std::string& path, Index rows, Index cols) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_matrix_binary: cannot open " + path);
  CMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) {
      double re = 0.0, im = 0.0;
      in.read(reinterpret_cast<char*>(&re), sizeof(double));
      in.read(reinterpret_cast<char*>(&im), sizeof(double));
      m(r, c) = Complex(re, im);
    }
  if (!in) throw std::runtime_error("read_matrix_binary: truncated file " + path);
  return m;
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_text_file: cannot open " + path);
  out << contents;
  if (!out) throw std::runtime_error("write_text_file: write failed for " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_text_file: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace xorsep
