#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "wnl/errors.hpp"

namespace wnl {

/// Minimal CSV writer: numbers at 17 significant digits so doubles round
/// trip exactly.
class CsvWriter {
public:
  explicit CsvWriter(const std::string& path) : os_(path, std::ios::trunc) {
    if (!os_) throw IoError("cannot create " + path);
    path_ = path;
  }
  ~CsvWriter() = default;

  void comment(const std::string& text) { os_ << "# " << text << '\n'; }

  void header(const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) os_ << (i ? "," : "") << names[i];
    os_ << '\n';
  }

  void row(const std::vector<double>& vals) {
    char buf[40];
    for (std::size_t i = 0; i < vals.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", vals[i]);
      os_ << (i ? "," : "") << buf;
    }
    os_ << '\n';
    if (!os_) throw IoError("write failed for " + path_);
  }

private:
  std::ofstream os_;
  std::string path_;
};

}  // namespace wnl
