#pragma once

// On-disk formats. Matrices, data sets and return streams are JSON
// documents tagged with a "format" field:
//
//   {"format": "qsb.matrix", "dim": D, "entries": [[re, im], ...]}   (row-major, D^2 pairs)
//   {"format": "qsb.dataset", "D": D, "N": N, "provenance": bool,
//    "matrices": [{"dim": D, "entries": [...]}, ...],
//    "records": [[povm, outcome], ...]}                               (records iff provenance)
//   {"format": "qsb.returns", "D": D, "T": T, "vectors": [[a_1, ..., a_D], ...]}
//
// Result tables are CSV with doubles printed to 17 significant digits.

#include "qsb/errors.hpp"
#include "qsb/hermitian.hpp"
#include "qsb/portfolio.hpp"
#include "qsb/tomography.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace qsb::io {

class IoError : public Error {
 public:
  IoError(const std::filesystem::path& path, const std::string& what)
      : Error(path.string() + ": " + what) {}
};

nlohmann::json matrix_to_json(const ComplexMatrix& m);
// Checks the record shape; Hermiticity is checked by HermitianMatrix.
ComplexMatrix matrix_from_json(const nlohmann::json& j);

void write_matrix(const std::filesystem::path& path, const HermitianMatrix& m);
HermitianMatrix read_matrix(const std::filesystem::path& path);

nlohmann::json dataset_to_json(const Dataset& data);
Dataset dataset_from_json(const nlohmann::json& j, const Tolerances& tol = kDefaultTolerances);
void write_dataset(const std::filesystem::path& path, const Dataset& data);
Dataset read_dataset(const std::filesystem::path& path, const Tolerances& tol = kDefaultTolerances);

void write_returns(const std::filesystem::path& path, std::span<const ReturnVector> stream);
std::vector<ReturnVector> read_returns(const std::filesystem::path& path);

nlohmann::json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

// Round-trip exact decimal (%.17g).
std::string format_double(double x);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  CsvWriter& cell(double x);
  CsvWriter& cell(long long x);
  CsvWriter& cell(long x) { return cell(static_cast<long long>(x)); }
  CsvWriter& cell(int x) { return cell(static_cast<long long>(x)); }
  CsvWriter& cell(unsigned long long x);
  CsvWriter& cell(unsigned long x) { return cell(static_cast<unsigned long long>(x)); }
  CsvWriter& cell(const std::string& s);
  void end_row();
  void close();

 private:
  void separator();
  std::filesystem::path path_;
  std::ofstream out_;
  bool row_started_ = false;
};

}  // namespace qsb::io
