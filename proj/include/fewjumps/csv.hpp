#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace fewjumps {

/// RFC 4180 field quoting.
std::string csv_escape(const std::string& field);

/// Shortest round-trip decimal rendering of a double ("%.17g"; inf/nan named).
std::string format_double(double v);

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);

  void comment(const std::string& text);  // "# ..." line
  void row(const std::vector<std::string>& fields);
  bool good() const { return out_.good(); }

 private:
  std::ofstream out_;
};

}  // namespace fewjumps
