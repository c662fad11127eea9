#include "writers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qperc/errors.hpp"

using qperc::IoError;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file '" + path + "'");
  out << body;
  if (!out) throw IoError("write failure on '" + path + "'");
}

void write_csv(const Table& t, const std::string& path) {
  std::ostringstream out;
  out << "# config: " << t.stamp << "\n";
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (c) out << ",";
    out << t.columns[c];
  }
  out << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ",";
      out << row[c].text;
    }
    out << "\n";
  }
  write_text_file(path, out.str());
}

namespace {

struct Extent {
  double lo = 0.0, hi = 1.0;
};

Extent pad_extent(double lo, double hi) {
  if (!(lo < hi)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

const char* kPalette[] = {"#1f6eb4", "#d6342c", "#2c8f4b",
                          "#8452a3", "#c47c1f", "#2aa6a1"};

}  // namespace

void write_svg(const Table& t, const std::string& path,
               const std::string& title) {
  const double w = 800, h = 520;
  const double ml = 78, mr = 24, mt = 46, mb = 58;

  double xlo = 0, xhi = 1, ylo = 0, yhi = 1;
  bool first = true;
  for (const auto& row : t.rows) {
    if (row.empty() || !row[0].value) continue;
    for (std::size_t c = 1; c < row.size(); ++c) {
      if (!row[c].value) continue;
      if (first) {
        xlo = xhi = *row[0].value;
        ylo = yhi = *row[c].value;
        first = false;
      } else {
        xlo = std::min(xlo, *row[0].value);
        xhi = std::max(xhi, *row[0].value);
        ylo = std::min(ylo, *row[c].value);
        yhi = std::max(yhi, *row[c].value);
      }
    }
  }
  const Extent ex = pad_extent(xlo, xhi);
  const Extent ey = pad_extent(ylo, yhi);
  auto px = [&](double x) {
    return ml + (x - ex.lo) / (ex.hi - ex.lo) * (w - ml - mr);
  };
  auto py = [&](double y) {
    return h - mb - (y - ey.lo) / (ey.hi - ey.lo) * (h - mt - mb);
  };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
      << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h
      << "\">\n"
      << "<!-- config: " << t.stamp << " -->\n"
      << "<rect width=\"" << w << "\" height=\"" << h
      << "\" fill=\"white\"/>\n"
      << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">"
      << title << "</text>\n";

  out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << w - ml - mr
      << "\" height=\"" << h - mt - mb
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double fx = ex.lo + (ex.hi - ex.lo) * i / 5.0;
    const double fy = ey.lo + (ey.hi - ey.lo) * i / 5.0;
    out << "<line x1=\"" << px(fx) << "\" y1=\"" << h - mb << "\" x2=\""
        << px(fx) << "\" y2=\"" << h - mb + 5 << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << px(fx) << "\" y=\"" << h - mb + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << format_double(fx) << "</text>\n"
        << "<line x1=\"" << ml - 5 << "\" y1=\"" << py(fy) << "\" x2=\"" << ml
        << "\" y2=\"" << py(fy) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << ml - 8 << "\" y=\"" << py(fy) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << format_double(fy) << "</text>\n";
  }
  out << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 16
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">"
      << t.columns[0] << "</text>\n";

  for (std::size_t c = 1; c < t.columns.size(); ++c) {
    const char* color = kPalette[(c - 1) % 6];
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& row : t.rows) {
      if (row.size() <= c || !row[0].value || !row[c].value) continue;
      out << format_double(px(*row[0].value)) << ","
          << format_double(py(*row[c].value)) << " ";
    }
    out << "\"/>\n"
        << "<text x=\"" << w - mr - 8 << "\" y=\"" << mt + 18 * c
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"12\" fill=\""
        << color << "\">" << t.columns[c] << "</text>\n";
  }
  out << "</svg>\n";
  write_text_file(path, out.str());
}
