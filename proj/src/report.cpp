#include "gexpect/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>

#include "gexpect/errors.hpp"
#include <json.hpp>

namespace gexpect {

std::string format_real17(double x) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

CsvBuilder::CsvBuilder(std::vector<std::string> header)
    : columns_(header.size()) {
  append_line(header);
}

namespace {
std::string csv_escape(const std::string& cell) {
  const bool needs_quote =
      cell.find_first_of(",\"\n\r") != std::string::npos;
  if (!needs_quote) return cell;
  std::string out = "\"";
  for (const char c : cell) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}
}  // namespace

void CsvBuilder::append_line(const std::vector<std::string>& cells) {
  if (cells.size() != columns_)
    throw ConfigError("CSV row width does not match the header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    text_ += csv_escape(cells[i]);
  }
  text_ += '\n';
}

void CsvBuilder::add_row(std::vector<std::string> cells) { append_line(cells); }

void CsvBuilder::add_real_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (const double v : values) cells.push_back(format_real17(v));
  append_line(cells);
}

bool RunManifest::all_passed() const {
  for (const auto& [name, ok] : assertions)
    if (!ok) return false;
  return true;
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["tool_version"] = tool_version;
  j["config"] = nlohmann::json::parse(config_echo_json);
  j["seed_root"] = seed_root;
  j["wall_time_sec"] = wall_time_sec;
  nlohmann::ordered_json checks = nlohmann::ordered_json::object();
  for (const auto& [name, ok] : assertions) checks[name] = ok;
  j["assertions"] = checks;
  j["all_passed"] = all_passed();
  return j.dump(2) + "\n";
}

namespace {
std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y%m%d-%H%M%S", &tm);
  return buf;
}
}  // namespace

std::string emit_report(const std::string& csv_text, const RunManifest& manifest,
                        const std::string& out_dir, const std::string& csv_path) {
  namespace fs = std::filesystem;
  fs::path target;
  try {
    if (!csv_path.empty()) {
      target = csv_path;
      if (target.has_parent_path()) fs::create_directories(target.parent_path());
    } else {
      fs::create_directories(out_dir.empty() ? "." : out_dir);
      const std::string stamp = timestamp_utc();
      for (int k = 0;; ++k) {
        fs::path candidate = fs::path(out_dir.empty() ? "." : out_dir) /
                             (manifest.command + "-" + stamp + "-" +
                              std::to_string(k) + ".csv");
        if (!fs::exists(candidate)) {
          target = candidate;
          break;
        }
      }
    }
    std::ofstream csv(target, std::ios::binary);
    if (!csv) throw ConfigError("cannot open " + target.string());
    csv << csv_text;
    csv.close();
    if (!csv) throw ConfigError("write failed: " + target.string());

    fs::path mpath = target;
    mpath.replace_extension(".manifest.json");
    std::ofstream mf(mpath, std::ios::binary);
    if (!mf) throw ConfigError("cannot open " + mpath.string());
    mf << manifest.to_json();
    mf.close();
    if (!mf) throw ConfigError("write failed: " + mpath.string());
  } catch (const fs::filesystem_error& e) {
    throw ConfigError(std::string("report I/O failure: ") + e.what());
  }
  return target.string();
}

}  // namespace gexpect
