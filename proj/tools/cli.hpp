#pragma once

#include <string>
#include <vector>

#include "frachill/types.hpp"

namespace frachill::cli {

/// Entry point of the frachill tool. Returns 0 on success, 2 on usage and
/// input-schema errors, 1 on numerical or I/O failures; errors are reported
/// as one JSON line on stderr.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

/// "1.5-2i", "3", "-2.5i", "1e-3+4e1i".
cdouble parse_complex(const std::string& text);

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  int count = 1;
};

/// "lo:hi:count"; count 1 requires lo == hi.
Range parse_range(const std::string& text);
std::vector<double> expand(const Range& r);

}  // namespace frachill::cli
