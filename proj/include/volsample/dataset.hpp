#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "volsample/regression.hpp"

namespace volsample {

enum class DatasetFormat { CSV, LibSVM };

std::string_view to_string(DatasetFormat f);
DatasetFormat parse_format(std::string_view name);

struct Dataset {
  RegressionProblem problem;
  std::string source;
  DatasetFormat format = DatasetFormat::CSV;
  Index feature_count = 0;
  Index row_count = 0;
};

/// CSV: comma-separated, last column is the response, a non-numeric first
/// line is taken as a header. LibSVM: `<label> <index>:<value> ...` with
/// 1-based indices; missing entries are 0. `feature_count` fixes d for
/// LibSVM input (otherwise the largest index seen).
///
/// Throws Error{ParseError} (message carries the line number),
/// Error{DimensionMismatch} on ragged rows or indices beyond feature_count,
/// Error{IoError} if the file cannot be opened.
Dataset parse_dataset(const std::string& path, DatasetFormat format,
                      std::optional<Index> feature_count = std::nullopt);
Dataset parse_dataset(std::istream& in, DatasetFormat format,
                      std::optional<Index> feature_count = std::nullopt,
                      std::string source = "<stream>");

/// Dense CSV with header x1..xd,y; values written with 17 significant
/// digits so that parsing reproduces them exactly.
void write_csv(std::ostream& out, const RegressionProblem& p);
void write_libsvm(std::ostream& out, const RegressionProblem& p);

}  // namespace volsample
