#pragma once

#include "mvn/sample.hpp"

#include <filesystem>
#include <istream>

namespace mvn {

struct DatasetOptions {
  bool skip_header = false;
};

/// Parses delimiter-separated numeric text: one observation per line, fields split
/// by commas and/or whitespace. Blank lines and lines starting with '#' are ignored.
/// Numbers use '.' as decimal point regardless of locale. Errors cite the 1-based
/// line and column of the offending cell.
Sample read_dataset(std::istream& in, const DatasetOptions& options = {});
Sample read_dataset(const std::filesystem::path& path, const DatasetOptions& options = {});

}  // namespace mvn
