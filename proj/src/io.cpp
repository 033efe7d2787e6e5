#include "qsb/io.hpp"

#include <cstdio>
#include <sstream>

namespace qsb::io {

using nlohmann::json;

json matrix_to_json(const ComplexMatrix& m) {
  json entries = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      entries.push_back({m(i, j).real(), m(i, j).imag()});
  return {{"dim", m.rows()}, {"entries", std::move(entries)}};
}

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("entries")) {
    throw ValidationError("matrix record needs 'dim' and 'entries'");
  }
  const long dim = j.at("dim").get<long>();
  const auto& entries = j.at("entries");
  if (dim < 1) throw ValidationError("matrix dim must be positive");
  if (!entries.is_array() || entries.size() != static_cast<std::size_t>(dim * dim)) {
    std::ostringstream msg;
    msg << "matrix record has " << (entries.is_array() ? entries.size() : 0)
        << " entries, expected " << dim * dim;
    throw ValidationError(msg.str());
  }
  ComplexMatrix m(dim, dim);
  for (long k = 0; k < dim * dim; ++k) {
    const auto& e = entries[static_cast<std::size_t>(k)];
    if (!e.is_array() || e.size() != 2) throw ValidationError("matrix entry is not a (re, im) pair");
    m(k / dim, k % dim) = Complex(e[0].get<double>(), e[1].get<double>());
  }
  return m;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open for reading");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw IoError(path, std::string("malformed JSON: ") + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot open for writing");
  out << text;
  if (!out) throw IoError(path, "write failed");
}

void write_matrix(const std::filesystem::path& path, const HermitianMatrix& m) {
  json j = matrix_to_json(m.matrix());
  j["format"] = "qsb.matrix";
  write_text(path, j.dump(1) + "\n");
}

HermitianMatrix read_matrix(const std::filesystem::path& path) {
  const json j = read_json(path);
  try {
    return HermitianMatrix(matrix_from_json(j));
  } catch (const json::exception& e) {
    throw IoError(path, e.what());
  } catch (const ValidationError& e) {
    throw IoError(path, e.what());
  }
}

json dataset_to_json(const Dataset& data) {
  json matrices = json::array();
  for (const auto& a : data.matrices()) matrices.push_back(matrix_to_json(a.matrix()));
  json j{{"format", "qsb.dataset"},
         {"D", data.dim()},
         {"N", data.size()},
         {"provenance", data.has_provenance()},
         {"matrices", std::move(matrices)}};
  if (data.has_provenance()) {
    json records = json::array();
    for (const auto& p : data.provenance()) records.push_back({p.povm, p.outcome});
    j["records"] = std::move(records);
  }
  return j;
}

Dataset dataset_from_json(const json& j, const Tolerances& tol) {
  try {
    if (j.value("format", "") != "qsb.dataset") throw ValidationError("not a qsb.dataset document");
    const long dim = j.at("D").get<long>();
    const std::size_t n = j.at("N").get<std::size_t>();
    const auto& list = j.at("matrices");
    if (list.size() != n) {
      std::ostringstream msg;
      msg << "header says N = " << n << " but " << list.size() << " matrices follow";
      throw ValidationError(msg.str());
    }
    std::vector<ObservationMatrix> matrices;
    matrices.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
      try {
        const ComplexMatrix m = matrix_from_json(list[k]);
        if (m.rows() != dim) throw ValidationError("dimension differs from header D");
        matrices.emplace_back(HermitianMatrix(m, tol.sym), tol);
      } catch (const ValidationError& e) {
        throw ValidationError("record " + std::to_string(k) + ": " + e.what());
      }
    }
    std::vector<Provenance> provenance;
    if (j.value("provenance", false)) {
      const auto& records = j.at("records");
      if (records.size() != n) throw ValidationError("records must have one entry per matrix");
      provenance.reserve(n);
      for (const auto& r : records) provenance.push_back({r.at(0).get<int>(), r.at(1).get<int>()});
    }
    return Dataset(std::move(matrices), std::move(provenance));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed data set: ") + e.what());
  }
}

void write_dataset(const std::filesystem::path& path, const Dataset& data) {
  write_text(path, dataset_to_json(data).dump() + "\n");
}

Dataset read_dataset(const std::filesystem::path& path, const Tolerances& tol) {
  const json j = read_json(path);
  try {
    return dataset_from_json(j, tol);
  } catch (const ValidationError& e) {
    throw IoError(path, e.what());
  }
}

void write_returns(const std::filesystem::path& path, std::span<const ReturnVector> stream) {
  json vectors = json::array();
  for (const auto& a : stream) {
    vectors.push_back(std::vector<double>(a.rates().data(), a.rates().data() + a.dim()));
  }
  const json j{{"format", "qsb.returns"},
               {"D", stream.empty() ? 0 : stream.front().dim()},
               {"T", stream.size()},
               {"vectors", std::move(vectors)}};
  write_text(path, j.dump() + "\n");
}

std::vector<ReturnVector> read_returns(const std::filesystem::path& path) {
  const json j = read_json(path);
  try {
    if (j.value("format", "") != "qsb.returns") throw ValidationError("not a qsb.returns document");
    const long dim = j.at("D").get<long>();
    std::vector<ReturnVector> out;
    for (const auto& v : j.at("vectors")) {
      const auto values = v.get<std::vector<double>>();
      if (static_cast<long>(values.size()) != dim) {
        throw ValidationError("return vector " + std::to_string(out.size()) +
                              " has the wrong dimension");
      }
      out.emplace_back(Eigen::Map<const RealVector>(values.data(), dim));
    }
    if (out.size() != j.at("T").get<std::size_t>()) throw ValidationError("T does not match");
    return out;
  } catch (const json::exception& e) {
    throw IoError(path, e.what());
  } catch (const ValidationError& e) {
    throw IoError(path, e.what());
  }
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), out_(path, std::ios::binary) {
  if (!out_) throw IoError(path, "cannot open for writing");
  for (const auto& h : header) cell(h);
  end_row();
}

void CsvWriter::separator() {
  if (row_started_) out_ << ',';
  row_started_ = true;
}

CsvWriter& CsvWriter::cell(double x) {
  separator();
  out_ << format_double(x);
  return *this;
}

CsvWriter& CsvWriter::cell(long long x) {
  separator();
  out_ << x;
  return *this;
}

CsvWriter& CsvWriter::cell(unsigned long long x) {
  separator();
  out_ << x;
  return *this;
}

CsvWriter& CsvWriter::cell(const std::string& s) {
  separator();
  if (s.find_first_of(",\"\n") == std::string::npos) {
    out_ << s;
  } else {
    out_ << '"';
    for (char c : s) {
      if (c == '"') out_ << '"';
      out_ << c;
    }
    out_ << '"';
  }
  return *this;
}

void CsvWriter::end_row() {
  out_ << '\n';
  row_started_ = false;
}

void CsvWriter::close() {
  out_.close();
  if (!out_) throw IoError(path_, "write failed");
}

}  // namespace qsb::io
