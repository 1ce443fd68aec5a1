#pragma once

#include <string>
#include <vector>

namespace hetmol::io {

// 17 significant digits; "nan" / "inf" / "-inf" for non-finite values.
std::string format_number(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(const std::vector<double>& values);
  void add_row(std::vector<std::string> fields);

  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;
  // "-" writes nothing and returns false; otherwise throws IoError on failure.
  bool write(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotLabels {
  std::string title;
  std::string x;
  std::string y;
};

// Static SVG 1.1 line plot. Non-finite points split a series into separate
// polylines. Throws InvalidInput when there is nothing to draw.
std::string render_svg(const std::vector<Series>& series, const PlotLabels& labels);
void emit_svg(const std::vector<Series>& series, const PlotLabels& labels, const std::string& path);

void write_text(const std::string& path, const std::string& text);

}  // namespace hetmol::io
