#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace almg {

// Shortest round-trip decimal representation with 17 significant digits.
std::string format_g17(double x);

uint64_t fnv1a64(std::string_view bytes);
uint64_t fnv1a64_file(const std::filesystem::path& path);
std::string hex64(uint64_t value);

// CSV with a fixed header, comma separator and LF line endings.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& cells);
  void close();
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  size_t columns_ = 0;
};

}  // namespace almg
