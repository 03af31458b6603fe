#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "frachill/integrator.hpp"

namespace frachill::cli {

inline constexpr const char* kVersion = "0.1.0";

/// 17 significant digits, '.' separator, independent of the locale.
std::string fmt_double(double x);

/// Buffers CSV text; rows are joined with ',' and terminated by '\n'.
class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  void row(const std::vector<std::string>& cells);
  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

std::string trajectory_csv(const Trajectory& traj);

/// Writes a file, throwing ErrorKind::Io on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Collects what went into one output file and writes <out>.manifest.json.
class Manifest {
 public:
  explicit Manifest(std::string command);
  nlohmann::json& parameters() { return params_; }
  void add_input(const std::filesystem::path& path);
  void write(const std::filesystem::path& output, const std::string& contents) const;

 private:
  std::string command_;
  nlohmann::json params_ = nlohmann::json::object();
  nlohmann::json inputs_ = nlohmann::json::array();
  std::chrono::steady_clock::time_point start_;
};

/// Writes the output and its manifest.
void emit(const std::filesystem::path& output, const std::string& contents, const Manifest& manifest);

}  // namespace frachill::cli
