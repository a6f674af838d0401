#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "mltrp/types.h"

namespace mltrp {

/// Parsed numeric table: named columns and row-major values.
struct CsvTable {
  std::vector<std::string> header;
  Eigen::MatrixXd values;
  std::vector<int> lines;  ///< source line of each data row
};

/// Parses comma-separated numbers. Every error names the source and the
/// 1-based line. With `has_header`, column names must be unique and non-empty.
CsvTable ParseCsv(std::string_view text, bool has_header, const std::string& source);

/// Header f1..fd,label; labels must be -1 or +1.
LabeledDataset ParseLabeledCsv(std::string_view text, const std::string& source);
/// Header f1..fd.
NodeSet ParseNodesCsv(std::string_view text, const std::string& source);
/// M rows of M values, no header.
DistanceMatrix ParseDistancesCsv(std::string_view text, const std::string& source);

std::string ReadFile(const std::filesystem::path& path);
LabeledDataset ReadLabeledCsv(const std::filesystem::path& path);
NodeSet ReadNodesCsv(const std::filesystem::path& path);
DistanceMatrix ReadDistancesCsv(const std::filesystem::path& path);

std::string LabeledCsv(const LabeledDataset& data);
std::string NodesCsv(const NodeSet& nodes);
std::string DistancesCsv(const DistanceMatrix& distances);

/// Shortest decimal form that parses back to the same double.
std::string FormatDouble(double value);

/// Writes to a sibling temporary file, then renames over `path`.
void WriteFileAtomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace mltrp
