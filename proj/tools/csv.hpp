#pragma once

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <ostream>
#include <string>

#include "entbuffer/errors.hpp"

namespace entbuffer::cli {

// Fixed 9-significant-digit rendering; snprintf under the C locale is
// deterministic, which the byte-stable output contract relies on.
inline std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// Stream to --out or stdout. Files are opened in binary mode so line endings
// stay LF everywhere.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw domain_error("cannot open output file: " + path);
    }
  }

  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

}  // namespace entbuffer::cli
