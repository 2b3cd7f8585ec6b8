#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace locov {

// Experiment output: a '#'-prefixed key=value metadata block followed by one
// or more named sections, each with its own column header row. Floats are
// printed with 17 significant digits so a rerun with the same config and seed
// reproduces the file byte for byte.
class ResultTable {
 public:
  struct Section {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> cells);
  };

  void add_metadata(const std::string& key, const std::string& value);
  void add_metadata(const std::string& key, double value);
  void add_metadata(const std::string& key, long long value);

  Section& add_section(const std::string& name, std::vector<std::string> columns);

  const std::vector<std::pair<std::string, std::string>>& metadata() const { return metadata_; }
  const std::vector<Section>& sections() const { return sections_; }
  const Section* find_section(const std::string& name) const;

  std::string to_csv() const;
  void write_file(const std::filesystem::path& path) const;

  static std::string fmt(double value);
  static std::string fmt_int(long long value);

 private:
  std::vector<std::pair<std::string, std::string>> metadata_;
  std::vector<Section> sections_;
};

}  // namespace locov
