#include "output.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "frachill/error.hpp"

namespace frachill::cli {

std::string fmt_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::vector<std::string>& header) { row(header); }

void CsvWriter::row(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) text_ += ',';
    text_ += fmt_double(values[i]);
  }
  text_ += '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    text_ += cells[i];
  }
  text_ += '\n';
}

std::string trajectory_csv(const Trajectory& traj) {
  std::vector<std::string> header{"t"};
  for (Eigen::Index i = 0; i < traj.values.rows(); ++i) header.push_back("y" + std::to_string(i + 1));
  CsvWriter csv(header);
  std::vector<double> row(static_cast<std::size_t>(traj.values.rows()) + 1);
  for (std::size_t j = 0; j < traj.times.size(); ++j) {
    row[0] = traj.times[j];
    for (Eigen::Index i = 0; i < traj.values.rows(); ++i)
      row[static_cast<std::size_t>(i) + 1] = traj.values(i, static_cast<Eigen::Index>(j));
    csv.row(row);
  }
  return csv.text();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) fail(ErrorKind::Io, "failed writing " + path.string());
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    fail(ErrorKind::Io, "SHA-256 computation failed");
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return hex.str();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

Manifest::Manifest(std::string command) : command_(std::move(command)), start_(std::chrono::steady_clock::now()) {}

void Manifest::add_input(const std::filesystem::path& path) {
  inputs_.push_back({{"path", path.string()}, {"sha256", sha256_file(path)}});
}

void Manifest::write(const std::filesystem::path& output, const std::string& contents) const {
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  const nlohmann::json doc{
      {"command", command_},
      {"parameters", params_},
      {"inputs", inputs_},
      {"output", {{"path", output.filename().string()}, {"sha256", sha256_hex(contents)}}},
      {"version", kVersion},
      {"wall_seconds", secs},
  };
  write_text(output.string() + ".manifest.json", doc.dump(2) + "\n");
}

void emit(const std::filesystem::path& output, const std::string& contents, const Manifest& manifest) {
  write_text(output, contents);
  manifest.write(output, contents);
}

}  // namespace frachill::cli
