#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "gexpect/errors.hpp"
#include "gexpect/report.hpp"

using namespace gexpect;

namespace {
std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}
}  // namespace

TEST_CASE("reals keep 17 significant digits") {
  CHECK(format_real17(0.1) == "0.10000000000000001");
  CHECK(format_real17(1.0) == "1");
  const double pi = 3.14159265358979323846;
  double back = 0.0;
  std::sscanf(format_real17(pi).c_str(), "%lf", &back);
  CHECK(back == pi);
}

TEST_CASE("csv layout: header, LF endings, escaping") {
  CsvBuilder csv({"a", "b"});
  CHECK(csv.str() == "a,b\n");  // header-only when no rows
  csv.add_row({"plain", "with,comma"});
  csv.add_row({"quote\"inside", "line\nbreak"});
  const std::string text = csv.str();
  CHECK(text ==
        "a,b\nplain,\"with,comma\"\n\"quote\"\"inside\",\"line\nbreak\"\n");
  CHECK(text.find('\r') == std::string::npos);
  CHECK_THROWS_AS(csv.add_row({"too", "many", "cells"}), ConfigError);
}

TEST_CASE("identical rows serialize to identical bytes") {
  auto build = [] {
    CsvBuilder csv({"n", "value"});
    for (int i = 0; i < 50; ++i)
      csv.add_real_row({static_cast<double>(i), std::sqrt(2.0) * i});
    return csv.str();
  };
  CHECK(build() == build());
}

TEST_CASE("manifest serialization and assertion summary") {
  RunManifest m;
  m.command = "axioms";
  m.config_echo_json = "{\"seed\": 3}";
  m.seed_root = 3;
  m.assertions = {{"zero_violations", true}, {"runtime", true}};
  CHECK(m.all_passed());
  const std::string j = m.to_json();
  CHECK(j.find("\"command\": \"axioms\"") != std::string::npos);
  CHECK(j.find("\"all_passed\": true") != std::string::npos);
  m.assertions.push_back({"failed_one", false});
  CHECK_FALSE(m.all_passed());
}

TEST_CASE("emit writes csv + manifest, with distinct names on rerun") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "gexpect_report_test";
  fs::remove_all(dir);

  CsvBuilder csv({"x"});
  csv.add_real_row({1.5});
  RunManifest m;
  m.command = "capacity";

  const std::string p1 = emit_report(csv.str(), m, dir.string(), "");
  const std::string p2 = emit_report(csv.str(), m, dir.string(), "");
  CHECK(p1 != p2);
  CHECK(slurp(p1) == csv.str());
  CHECK(slurp(p2) == csv.str());
  CHECK(fs::exists(fs::path(p1).replace_extension(".manifest.json")));

  // explicit path override
  const std::string fixed = (dir / "fixed.csv").string();
  CHECK(emit_report(csv.str(), m, "", fixed) == fixed);
  CHECK(slurp(fixed) == csv.str());
  fs::remove_all(dir);
}
