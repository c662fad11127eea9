#pragma once

#include <optional>
#include <string>
#include <vector>

std::string format_double(double v);

// One output cell: CSV prints `text`; the SVG plotter uses `value` when
// present. Numeric cells carry both, text cells (input strings, reasons)
// only the former, missing values neither.
struct Cell {
  std::string text;
  std::optional<double> value;

  Cell() = default;
  Cell(double v) : text(format_double(v)), value(v) {}
  Cell(std::string s) : text(std::move(s)) {}
};

// Output table: reproducibility stamp, column names, rows. The same table
// feeds both the CSV and the SVG writer so the two formats always agree.
struct Table {
  std::string stamp;  // resolved-config JSON, written as a comment line
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

void write_csv(const Table& t, const std::string& path);

// Line plot of numeric columns[1..] against columns[0]; cells without a
// numeric value are skipped per series.
void write_svg(const Table& t, const std::string& path,
               const std::string& title);

void write_text_file(const std::string& path, const std::string& body);
