#ifndef GEXPECT_REPORT_HPP
#define GEXPECT_REPORT_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace gexpect {

// Reals serialized with 17 significant digits so reruns are byte-identical
// and parsing recovers the exact double.
std::string format_real17(double x);

// RFC-4180 CSV with LF line endings, assembled in memory.
class CsvBuilder {
 public:
  explicit CsvBuilder(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);
  void add_real_row(const std::vector<double>& values);
  const std::string& str() const { return text_; }

 private:
  void append_line(const std::vector<std::string>& cells);
  std::size_t columns_;
  std::string text_;
};

struct RunManifest {
  std::string command;
  std::string tool_version = "gexpect 1.0.0";
  std::string config_echo_json = "{}";  // full config incl. applied defaults
  std::uint64_t seed_root = 0;
  double wall_time_sec = 0.0;
  std::vector<std::pair<std::string, bool>> assertions;

  bool all_passed() const;
  std::string to_json() const;
};

// Writes the CSV and its manifest. When csv_path is empty a timestamped
// name <command>-<UTC>-<k>.csv is created under out_dir (k bumps on
// collision); the manifest lands next to the CSV with extension .manifest.json.
// Returns the CSV path. Throws ConfigError on I/O failure.
std::string emit_report(const std::string& csv_text, const RunManifest& manifest,
                        const std::string& out_dir, const std::string& csv_path);

}  // namespace gexpect

#endif  // GEXPECT_REPORT_HPP
