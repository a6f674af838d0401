#include "mltrp/io.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

namespace mltrp {
namespace {

std::string Where(const std::string& source, int line) { return source + ":" + std::to_string(line) + ": "; }

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(Trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

double ParseNumber(std::string_view field, const std::string& where, std::size_t column) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    throw ValidationError(where + "column " + std::to_string(column + 1) + ": '" + std::string(field) +
                          "' is not a number");
  }
  if (!std::isfinite(value)) {
    throw ValidationError(where + "column " + std::to_string(column + 1) + ": non-finite value '" +
                          std::string(field) + "'");
  }
  return value;
}

std::string MatrixCsv(const Eigen::MatrixXd& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ',';
      out += FormatDouble(m(i, j));
    }
    out += '\n';
  }
  return out;
}

std::string FeatureHeader(Eigen::Index dim) {
  std::string out;
  for (Eigen::Index j = 0; j < dim; ++j) {
    if (j > 0) out += ',';
    out += "f" + std::to_string(j + 1);
  }
  return out;
}

}  // namespace

CsvTable ParseCsv(std::string_view text, bool has_header, const std::string& source) {
  CsvTable table;
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  int line_number = 0;
  bool header_done = !has_header;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = text.find('\n', pos);
    std::string_view line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    pos = end == std::string_view::npos ? text.size() : end + 1;
    ++line_number;
    if (Trim(line).empty()) continue;
    const std::string where = Where(source, line_number);
    const std::vector<std::string_view> fields = SplitFields(line);
    if (!header_done) {
      std::set<std::string_view> seen;
      for (std::string_view name : fields) {
        if (name.empty()) throw ValidationError(where + "empty column name in header");
        if (!seen.insert(name).second) throw ValidationError(where + "duplicate column '" + std::string(name) + "'");
        table.header.emplace_back(name);
      }
      width = fields.size();
      header_done = true;
      continue;
    }
    if (width == 0) width = fields.size();
    if (fields.size() != width) {
      throw ValidationError(where + "expected " + std::to_string(width) + " fields, found " +
                            std::to_string(fields.size()));
    }
    std::vector<double> row(width);
    for (std::size_t j = 0; j < width; ++j) row[j] = ParseNumber(fields[j], where, j);
    rows.push_back(std::move(row));
    table.lines.push_back(line_number);
  }
  if (!header_done) throw ValidationError(source + ": missing header line");
  if (rows.empty()) throw ValidationError(source + ": no data rows");
  table.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < width; ++j) table.values(i, j) = rows[i][j];
  }
  return table;
}

LabeledDataset ParseLabeledCsv(std::string_view text, const std::string& source) {
  CsvTable table = ParseCsv(text, true, source);
  if (table.header.size() < 2 || table.header.back() != "label") {
    throw ValidationError(source + ": header must list feature columns followed by 'label'");
  }
  const Eigen::Index d = table.values.cols() - 1;
  for (Eigen::Index i = 0; i < table.values.rows(); ++i) {
    const double y = table.values(i, d);
    if (y != 1.0 && y != -1.0) {
      throw ValidationError(Where(source, table.lines[i]) + "label " + FormatDouble(y) +
                            " is not -1 or +1");
    }
  }
  return LabeledDataset(table.values.leftCols(d), table.values.col(d));
}

NodeSet ParseNodesCsv(std::string_view text, const std::string& source) {
  CsvTable table = ParseCsv(text, true, source);
  return NodeSet(std::move(table.values));
}

DistanceMatrix ParseDistancesCsv(std::string_view text, const std::string& source) {
  CsvTable table = ParseCsv(text, false, source);
  if (table.values.rows() != table.values.cols()) {
    throw ValidationError(source + ": distance matrix must be square, got " + std::to_string(table.values.rows()) +
                          " rows of " + std::to_string(table.values.cols()) + " values");
  }
  try {
    return DistanceMatrix(std::move(table.values));
  } catch (const ValidationError& e) {
    throw ValidationError(source + ": " + e.what());
  }
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

LabeledDataset ReadLabeledCsv(const std::filesystem::path& path) { return ParseLabeledCsv(ReadFile(path), path.string()); }
NodeSet ReadNodesCsv(const std::filesystem::path& path) { return ParseNodesCsv(ReadFile(path), path.string()); }
DistanceMatrix ReadDistancesCsv(const std::filesystem::path& path) {
  return ParseDistancesCsv(ReadFile(path), path.string());
}

std::string LabeledCsv(const LabeledDataset& data) {
  Eigen::MatrixXd all(data.size(), data.dim() + 1);
  all << data.features(), data.labels();
  return FeatureHeader(data.dim()) + ",label\n" + MatrixCsv(all);
}

std::string NodesCsv(const NodeSet& nodes) { return FeatureHeader(nodes.dim()) + "\n" + MatrixCsv(nodes.features()); }

std::string DistancesCsv(const DistanceMatrix& distances) { return MatrixCsv(distances.matrix()); }

std::string FormatDouble(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc()) throw SolverError("cannot format number");
  return std::string(buffer, ptr);
}

void WriteFileAtomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw SolverError("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw SolverError("cannot rename onto '" + path.string() + "': " + ec.message());
  }
}

}  // namespace mltrp
