#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "xorsep/auerbach.hpp"
#include "xorsep/ensembles.hpp"
#include "xorsep/games.hpp"
#include "xorsep/norms.hpp"
#include "xorsep/types.hpp"

// JSON layout conventions: complex matrices are {"rows", "cols", "data"} with
// row-major entries, real/imaginary interleaved, matching the binary dump
// format. Keys are emitted sorted, so equal objects serialize byte-identically.

namespace xorsep {

void to_json(nlohmann::json& j, const CMatrix& m);
void from_json(const nlohmann::json& j, CMatrix& m);
void to_json(nlohmann::json& j, const NormEstimate& e);
void from_json(const nlohmann::json& j, NormEstimate& e);
void to_json(nlohmann::json& j, const InstanceParams& p);
void from_json(const nlohmann::json& j, InstanceParams& p);
void to_json(nlohmann::json& j, const EpsCertificate& c);
void from_json(const nlohmann::json& j, EpsCertificate& c);
void to_json(nlohmann::json& j, const MinNormCertificate& c);
void from_json(const nlohmann::json& j, MinNormCertificate& c);
void to_json(nlohmann::json& j, const QuantumXorGame& g);
void from_json(const nlohmann::json& j, QuantumXorGame& g);

// Regeneration manifests: parameters, seed and stream labels only.
nlohmann::json instance_manifest(const InstanceParams& params);
nlohmann::json tau_manifest(const TauSample& tau);

// Raw little-endian float64 dump, row-major, real/imaginary interleaved.
void write_matrix_binary(const std::string& path, const CMatrix& m);
CMatrix read_matrix_binary(const std::string& path, Index rows, Index cols);

void write_text_file(const std::string& path, const std::string& contents);
std::string read_text_file(const std::string& path);

}  // namespace xorsep
