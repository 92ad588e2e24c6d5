// Copyright 2026 The cvsn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "cvsn/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cvsn::cli {

namespace {

std::string quote(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(std::move(cur));
  return cells;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

int column(const Table& t, const std::string& name) {
  const auto it = std::find(t.columns.begin(), t.columns.end(), name);
  return it == t.columns.end() ? -1 : static_cast<int>(it - t.columns.begin());
}

double to_double(const std::string& s) {
  if (s.empty()) return std::nan("");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  return end && *end == '\0' ? v : std::nan("");
}

// 1, 2 or 5 times a power of ten, about n ticks over [lo, hi].
double tick_step(double lo, double hi, int n) {
  const double raw = (hi - lo) / n;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0}) {
    if (m * mag >= raw) return m * mag;
  }
  return 10.0 * mag;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

void write_csv(std::ostream& out, const Table& table, bool timestamp) {
  if (timestamp) {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    out << "# generated " << buf << " by cvsn";
    if (!table.note.empty()) out << "; " << table.note;
    out << '\n';
  }
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << quote(cells[i]);
    out << '\n';
  };
  line(table.columns);
  for (const auto& r : table.rows) line(r);
}

Table read_csv(std::istream& in) {
  Table t;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto cells = split_line(line);
    if (header) {
      t.columns = std::move(cells);
      header = false;
    } else {
      if (cells.size() != t.columns.size()) {
        throw std::runtime_error("csv row " + std::to_string(t.rows.size() + 1) + " has " +
                                 std::to_string(cells.size()) + " cells, header has " +
                                 std::to_string(t.columns.size()));
      }
      t.rows.push_back(std::move(cells));
    }
  }
  if (header) throw std::runtime_error("csv has no header row");
  return t;
}

std::string render_svg(const Table& table, const std::string& title) {
  if (table.columns.empty()) throw std::runtime_error("nothing to plot");
  // Pick y and the columns that label a series.
  int y = column(table, "certified_sn");
  std::vector<int> keys;
  std::string y_label = "certified Schmidt number";
  if (y >= 0) {
    keys = {column(table, "witness"), column(table, "parameter")};
  } else {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      const auto& c = table.columns[i];
      if (c.size() > 9 && c.compare(c.size() - 9, 9, "_boundary") == 0) y = static_cast<int>(i);
    }
    if (y < 0) throw std::runtime_error("no certified_sn or *_boundary column");
    y_label = table.columns[y];
    keys = {column(table, "witness"), column(table, "r")};
  }
  const int x = 0;
  if (x == y || table.columns[x] == "witness") throw std::runtime_error("no swept column to use as x");

  std::map<std::string, std::vector<std::pair<double, double>>> series;
  std::vector<std::string> order;
  for (const auto& row : table.rows) {
    std::string key;
    for (int k : keys) {
      if (k < 0 || row[k].empty()) continue;
      if (!key.empty()) key += table.columns[k] == "r" ? " r=" : " d=";
      key += row[k];
    }
    if (!series.count(key)) order.push_back(key);
    const double xv = to_double(row[x]);
    const double yv = to_double(row[y]);
    auto& pts = series[key];
    if (std::isfinite(xv) && std::isfinite(yv)) pts.emplace_back(xv, yv);
  }

  double x0 = INFINITY, x1 = -INFINITY, y0 = 0.0, y1 = -INFINITY;
  for (const auto& [k, pts] : series) {
    for (const auto& [a, b] : pts) {
      x0 = std::min(x0, a);
      x1 = std::max(x1, a);
      y0 = std::min(y0, b);
      y1 = std::max(y1, b);
    }
  }
  if (!std::isfinite(x0)) {
    x0 = 0.0;
    x1 = 1.0;
    y1 = 1.0;
  }
  if (x1 <= x0) x1 = x0 + 1.0;
  if (y1 <= y0) y1 = y0 + 1.0;
  y1 += 0.05 * (y1 - y0);

  const double w = 720, h = 480, ml = 70, mr = 190, mt = 40, mb = 60;
  const double pw = w - ml - mr, ph = h - mt - mb;
  auto sx = [&](double v) { return ml + (v - x0) / (x1 - x0) * pw; };
  auto sy = [&](double v) { return mt + ph - (v - y0) / (y1 - y0) * ph; };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                 "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
    << "\" viewBox=\"0 0 " << w << ' ' << h << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << ml + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
    << escape_xml(title) << "</text>\n";
  s << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";

  const double xs = tick_step(x0, x1, 8);
  for (double t = std::ceil(x0 / xs) * xs; t <= x1 + 1e-9 * xs; t += xs) {
    s << "<line x1=\"" << px(sx(t)) << "\" y1=\"" << mt + ph << "\" x2=\"" << px(sx(t)) << "\" y2=\""
      << mt + ph + 5 << "\" stroke=\"black\"/><text x=\"" << px(sx(t)) << "\" y=\"" << mt + ph + 19
      << "\" text-anchor=\"middle\">" << fmt(std::abs(t) < 1e-12 ? 0.0 : t) << "</text>\n";
  }
  const double ys = tick_step(y0, y1, 8);
  for (double t = std::ceil(y0 / ys) * ys; t <= y1 + 1e-9 * ys; t += ys) {
    s << "<line x1=\"" << ml - 5 << "\" y1=\"" << px(sy(t)) << "\" x2=\"" << ml + pw << "\" y2=\""
      << px(sy(t)) << "\" stroke=\"#e0e0e0\"/><text x=\"" << ml - 8 << "\" y=\"" << px(sy(t) + 4)
      << "\" text-anchor=\"end\">" << fmt(std::abs(t) < 1e-12 ? 0.0 : t) << "</text>\n";
  }
  s << "<text x=\"" << ml + pw / 2 << "\" y=\"" << h - 15 << "\" text-anchor=\"middle\">"
    << escape_xml(table.columns[x]) << "</text>\n";
  s << "<text transform=\"translate(18," << mt + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
    << escape_xml(y_label) << "</text>\n";

  for (std::size_t i = 0; i < order.size(); ++i) {
    const char* c = colors[i % 10];
    auto pts = series[order[i]];
    std::sort(pts.begin(), pts.end());
    if (!pts.empty()) {
      s << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
      for (const auto& [a, b] : pts) s << px(sx(a)) << ',' << px(sy(b)) << ' ';
      s << "\"/>\n";
      for (const auto& [a, b] : pts) {
        s << "<circle cx=\"" << px(sx(a)) << "\" cy=\"" << px(sy(b)) << "\" r=\"2.5\" fill=\"" << c
          << "\"/>\n";
      }
    }
    const double ly = mt + 10 + 18 * i;
    s << "<line x1=\"" << ml + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << ml + pw + 32 << "\" y2=\""
      << ly << "\" stroke=\"" << c << "\" stroke-width=\"2\"/><text x=\"" << ml + pw + 38
      << "\" y=\"" << ly + 4 << "\">" << escape_xml(order[i].empty() ? "series" : order[i])
      << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace cvsn::cli
