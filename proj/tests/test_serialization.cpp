#include <doctest/doctest.h>

#include <cstdio>
#include <nlohmann/json.hpp>
#include <string>

#include "xorsep/ensembles.hpp"
#include "xorsep/norms.hpp"
#include "xorsep/rng.hpp"
#include "xorsep/serialization.hpp"

using namespace xorsep;

namespace {

CMatrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
  GaussianStream s(seed, "test/ser");
  CMatrix m(rows, cols);
  std::uint64_t idx = 0;
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) m(r, c) = Complex(s.normal(idx++), s.normal(idx++));
  return m;
}

std::string temp_path(const char* name) {
  return std::string("/tmp/xorsep_test_") + name;
}

}  // namespace

TEST_CASE("matrix json round-trip is exact") {
  const CMatrix m = random_matrix(3, 5, 1);
  nlohmann::json j;
  to_json(j, m);
  CHECK(j.at("rows") == 3);
  CHECK(j.at("cols") == 5);
  CHECK(j.at("data").size() == 30);
  CMatrix back;
  from_json(j, back);
  REQUIRE(back.rows() == 3);
  REQUIRE(back.cols() == 5);
  CHECK((back - m).norm() == 0.0);
}

TEST_CASE("matrix binary round-trip is exact") {
  const CMatrix m = random_matrix(4, 3, 2);
  const std::string path = temp_path("mat.bin");
  write_matrix_binary(path, m);
  const CMatrix back = read_matrix_binary(path, 4, 3);
  CHECK((back - m).norm() == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("text file round-trip") {
  const std::string path = temp_path("text.txt");
  const std::string contents = "line one\nline two\n";
  write_text_file(path, contents);
  CHECK(read_text_file(path) == contents);
  std::remove(path.c_str());
}

TEST_CASE("norm estimate round-trip preserves the bound kind") {
  NormEstimate e;
  e.value = 1.25;
  e.kind = BoundKind::CertifiedLower;
  e.restarts = 4;
  e.iterations = 77;
  e.tol = 1e-9;
  e.converged = true;
  nlohmann::json j;
  to_json(j, e);
  NormEstimate back;
  from_json(j, back);
  CHECK(back.value == e.value);
  CHECK(back.kind == e.kind);
  CHECK(back.restarts == e.restarts);
  CHECK(back.iterations == e.iterations);
  CHECK(back.tol == e.tol);
  CHECK(back.converged == e.converged);
}

TEST_CASE("certificates round-trip exactly") {
  EpsCertificate eps;
  eps.left = {random_matrix(3, 1, 3).col(0), random_matrix(2, 1, 4).col(0)};
  eps.right = {random_matrix(3, 1, 5).col(0), random_matrix(2, 1, 6).col(0)};
  eps.value = 0.625;
  nlohmann::json je;
  to_json(je, eps);
  EpsCertificate eps_back;
  from_json(je, eps_back);
  REQUIRE(eps_back.left.size() == 2);
  CHECK((eps_back.left[0] - eps.left[0]).norm() == 0.0);
  CHECK((eps_back.right[1] - eps.right[1]).norm() == 0.0);
  CHECK(eps_back.value == eps.value);

  MinNormCertificate mn;
  mn.unitaries = {random_matrix(4, 4, 7), random_matrix(4, 4, 8)};
  mn.psi = random_matrix(4, 1, 9).col(0);
  mn.eta = random_matrix(4, 1, 10).col(0);
  mn.ancilla_dim = 2;
  mn.value = 2.5;
  nlohmann::json jm;
  to_json(jm, mn);
  MinNormCertificate mn_back;
  from_json(jm, mn_back);
  REQUIRE(mn_back.unitaries.size() == 2);
  CHECK((mn_back.unitaries[1] - mn.unitaries[1]).norm() == 0.0);
  CHECK((mn_back.psi - mn.psi).norm() == 0.0);
  CHECK((mn_back.eta - mn.eta).norm() == 0.0);
  CHECK(mn_back.ancilla_dim == 2);
  CHECK(mn_back.value == 2.5);
}

TEST_CASE("instance params round-trip and manifests are stable") {
  InstanceParams p{3, 2, 16, 42};
  nlohmann::json j;
  to_json(j, p);
  InstanceParams back;
  from_json(j, back);
  CHECK(back.k == 3);
  CHECK(back.m == 2);
  CHECK(back.D == 16);
  CHECK(back.seed == 42);

  // Sorted keys make equal objects serialize byte-identically.
  const std::string a = instance_manifest(p).dump();
  const std::string b = instance_manifest(p).dump();
  CHECK(a == b);
  const TauSample tau = sample_tau(2, 3, 42);
  CHECK(tau_manifest(tau).dump() == tau_manifest(tau).dump());
  CHECK(instance_manifest(p).dump() != instance_manifest({3, 2, 16, 43}).dump());
}

TEST_CASE("game round-trip preserves dims and matrix") {
  CMatrix h = random_matrix(4, 4, 11);
  h = (0.5 * (h + h.adjoint())).eval();
  const QuantumXorGame game = game_from_hermitian(h, {2, 2});
  nlohmann::json j;
  to_json(j, game);
  QuantumXorGame back;
  from_json(j, back);
  CHECK(back.k == game.k);
  CHECK(back.local_dims == game.local_dims);
  CHECK((back.g - game.g).norm() == 0.0);
}
