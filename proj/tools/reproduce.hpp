#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace frachill::cli {

struct CheckLine {
  std::string id;
  bool pass = false;
  std::string detail;
};

struct ReproduceReport {
  std::vector<CheckLine> checks;

  bool all_pass() const;
  std::string text() const;
};

/// Writes the figure data (fig2_*, fig4_*, fig5_*, fig6) and report.txt to
/// outdir, each with a manifest. The CSV files depend only on the inputs,
/// not on the thread count.
ReproduceReport reproduce_figures(const std::filesystem::path& outdir, int threads = 1);

}  // namespace frachill::cli
