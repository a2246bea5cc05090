#pragma once

// Matrix Market exchange files and the problem bundle (T.mtx, b.mtx and a
// JSON manifest naming them).

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "pwls/core.hpp"

namespace pwls {

/// Reads coordinate or array files; symmetric storage is expanded. Without
/// a requested kind, coordinate files become sparse and array files dense.
/// Penta storage needs a square matrix of order m*m with the five-point band.
Matrix read_matrix_market(const std::filesystem::path& path, std::optional<StorageKind> as = std::nullopt);

void write_matrix_market(const std::filesystem::path& path, const Matrix& a);

/// Matrix Market array file (n x 1) or newline-separated decimals.
Vector read_vector(const std::filesystem::path& path);
void write_vector(const std::filesystem::path& path, std::span<const double> v);

struct LoadedProblem {
  PwlsProblem problem;
  nlohmann::json manifest;
};

/// Writes T.mtx, b.mtx and manifest.json into `dir`. `extra` fields are
/// merged into the manifest (e.g. the generator spec).
std::filesystem::path save_problem(const std::filesystem::path& dir, const PwlsProblem& p,
                                   const nlohmann::json& extra = nlohmann::json::object());

LoadedProblem load_problem(const std::filesystem::path& manifest_path);

/// Reads a JSON file, reporting parse failures with the file name.
nlohmann::json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace pwls
