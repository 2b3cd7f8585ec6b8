#include "locov/result_table.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "locov/errors.hpp"

namespace locov {

void ResultTable::Section::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns.size())
    throw InvalidInput("row width does not match section '" + name + "'");
  rows.push_back(std::move(cells));
}

void ResultTable::add_metadata(const std::string& key, const std::string& value) {
  metadata_.emplace_back(key, value);
}

void ResultTable::add_metadata(const std::string& key, double value) {
  metadata_.emplace_back(key, fmt(value));
}

void ResultTable::add_metadata(const std::string& key, long long value) {
  metadata_.emplace_back(key, fmt_int(value));
}

ResultTable::Section& ResultTable::add_section(const std::string& name,
                                               std::vector<std::string> columns) {
  sections_.push_back(Section{name, std::move(columns), {}});
  return sections_.back();
}

const ResultTable::Section* ResultTable::find_section(const std::string& name) const {
  for (const auto& s : sections_)
    if (s.name == name) return &s;
  return nullptr;
}

std::string ResultTable::to_csv() const {
  std::ostringstream out;
  for (const auto& [k, v] : metadata_) out << "# " << k << "=" << v << "\n";
  for (const auto& section : sections_) {
    out << "# section=" << section.name << "\n";
    for (std::size_t j = 0; j < section.columns.size(); ++j)
      out << (j ? "," : "") << section.columns[j];
    out << "\n";
    for (const auto& row : section.rows) {
      for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << row[j];
      out << "\n";
    }
  }
  return out.str();
}

void ResultTable::write_file(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << to_csv();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::string ResultTable::fmt(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string ResultTable::fmt_int(long long value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%lld", value);
  return buf;
}

}  // namespace locov
