#include "mvn/dataset.hpp"

#include "mvn/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace mvn {

namespace {

bool is_separator(char c) { return c == ',' || c == ' ' || c == '\t' || c == ';' || c == '\r'; }

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  const bool has_comma = line.find(',') != std::string_view::npos;
  std::size_t i = 0;
  while (i < line.size()) {
    if (has_comma) {
      const std::size_t end = line.find(',', i);
      std::string_view cell = line.substr(i, end == std::string_view::npos ? end : end - i);
      while (!cell.empty() && is_separator(cell.front())) cell.remove_prefix(1);
      while (!cell.empty() && is_separator(cell.back())) cell.remove_suffix(1);
      fields.push_back(cell);
      if (end == std::string_view::npos) break;
      i = end + 1;
      if (i == line.size()) fields.emplace_back();  // trailing comma: empty cell
    } else {
      while (i < line.size() && is_separator(line[i])) ++i;
      if (i == line.size()) break;
      std::size_t j = i;
      while (j < line.size() && !is_separator(line[j])) ++j;
      fields.push_back(line.substr(i, j - i));
      i = j;
    }
  }
  return fields;
}

double parse_cell(std::string_view cell, std::size_t line_no, std::size_t col_no) {
  auto fail = [&](const std::string& why) {
    throw InputError("line " + std::to_string(line_no) + ", column " + std::to_string(col_no) +
                     ": " + why + " '" + std::string(cell) + "'");
  };
  if (cell.empty()) fail("empty cell");
  std::string_view body = cell;
  if (body.front() == '+') body.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
  if (ec != std::errc() || ptr != body.data() + body.size()) fail("not a number");
  if (!std::isfinite(value)) fail("non-finite value");
  return value;
}

}  // namespace

Sample read_dataset(std::istream& in, const DatasetOptions& options) {
  std::vector<double> values;
  std::size_t columns = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  bool header_pending = options.skip_header;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    while (!view.empty() && is_separator(view.back())) view.remove_suffix(1);
    std::size_t first = 0;
    while (first < view.size() && is_separator(view[first])) ++first;
    view.remove_prefix(first);
    if (view.empty() || view.front() == '#') continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    const auto fields = split_fields(view);
    if (columns == 0) {
      columns = fields.size();
    } else if (fields.size() != columns) {
      throw InputError("line " + std::to_string(line_no) + ": expected " + std::to_string(columns) +
                       " fields, found " + std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      values.push_back(parse_cell(fields[c], line_no, c + 1));
    }
    ++rows;
  }
  if (rows == 0) throw InputError("dataset contains no observations");
  Matrix data(static_cast<Index>(rows), static_cast<Index>(columns));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns; ++c) {
      data(static_cast<Index>(r), static_cast<Index>(c)) = values[r * columns + c];
    }
  }
  return Sample(std::move(data));
}

Sample read_dataset(const std::filesystem::path& path, const DatasetOptions& options) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open dataset '" + path.string() + "'");
  return read_dataset(in, options);
}

}  // namespace mvn
