#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "hetmol/errors.hpp"
#include "hetmol/output.hpp"

using namespace hetmol;

namespace {

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_SUITE("output") {

TEST_CASE("number formatting") {
  CHECK(io::format_number(0.1) == "0.10000000000000001");
  CHECK(io::format_number(1.0) == "1");
  CHECK(io::format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(io::format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(io::format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  const double v = 0.1234567890123456789;
  CHECK(std::stod(io::format_number(v)) == v);
}

TEST_CASE("csv table") {
  io::CsvTable t({"a", "b"});
  t.add_row({1.5, -2.0});
  t.add_row(std::vector<std::string>{"x", "y"});
  CHECK(t.str() == "a,b\n1.5,-2\nx,y\n");
  CHECK(t.rows() == 2);
  CHECK_THROWS_AS(t.add_row(std::vector<double>{1.0}), InvalidInput);
  CHECK_THROWS_AS(io::CsvTable({}), InvalidInput);
  CHECK_FALSE(t.write("-"));

  const auto path = std::filesystem::temp_directory_path() / "hetmol_output_test.csv";
  CHECK(t.write(path.string()));
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == t.str());
  std::filesystem::remove(path);
  CHECK_THROWS_AS(t.write("/nonexistent-dir/x.csv"), IoError);
}

TEST_CASE("svg rendering") {
  const std::vector<io::Series> two{{"s", {0.0, 1.0}, {0.0, 2.0}}};
  const auto svg = io::render_svg(two, {"t", "x", "y"});
  CHECK(count_of(svg, "<polyline") == 1);
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg == io::render_svg(two, {"t", "x", "y"}));

  const double nan = std::numeric_limits<double>::quiet_NaN();
  const std::vector<io::Series> split{{"s", {0, 1, 2, 3, 4}, {0, 1, nan, 3, 4}}};
  CHECK(count_of(io::render_svg(split, {"", "", ""}), "<polyline") == 2);

  CHECK_THROWS_AS(io::render_svg({}, {"", "", ""}), InvalidInput);
  CHECK_THROWS_AS(io::render_svg({{"empty", {}, {}}}, {"", "", ""}), InvalidInput);
  CHECK_THROWS_AS(io::emit_svg(two, {"", "", ""}, "/nonexistent-dir/p.svg"), IoError);
}

}
