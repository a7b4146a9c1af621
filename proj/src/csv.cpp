#include "degpath/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "degpath/errors.hpp"

namespace degpath::csv {

int Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

int Table::require_column(const std::string& name, const std::string& file) const {
  int c = column(name);
  if (c < 0) throw DataError(file + ": missing column '" + name + "'");
  return c;
}

static std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  cells.push_back(cur);
  return cells;
}

Table read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  Table t;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split_line(line);
    if (first) {
      t.header = std::move(cells);
      first = false;
    } else {
      if (cells.size() != t.header.size())
        throw DataError(path + ": row has " + std::to_string(cells.size()) +
                        " cells, expected " + std::to_string(t.header.size()));
      t.rows.push_back(std::move(cells));
    }
  }
  if (first) throw DataError(path + ": empty file");
  return t;
}

void check_header(const Table& t, const std::vector<std::string>& expected,
                  const std::string& file) {
  if (t.header != expected) {
    std::string want;
    for (const auto& h : expected) want += (want.empty() ? "" : ",") + h;
    std::string got;
    for (const auto& h : t.header) got += (got.empty() ? "" : ",") + h;
    throw DataError(file + ": expected header '" + want + "', got '" + got + "'");
  }
}

double to_double(const std::string& s, const std::string& context) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError(context + ": not a number: '" + s + "'");
  }
}

long to_long(const std::string& s, const std::string& context) {
  try {
    std::size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError(context + ": not an integer: '" + s + "'");
  }
}

std::string format_double(double x) {
  char buf[64];
  // %.17g is lossless for IEEE doubles; trim to %.15g when it round-trips.
  std::snprintf(buf, sizeof(buf), "%.15g", x);
  double back = 0.0;
  std::sscanf(buf, "%lf", &back);
  if (back != x) std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

Writer::Writer(const std::string& path) {
  auto* f = new std::ofstream(path);
  if (!*f) {
    delete f;
    throw DataError("cannot write file: " + path);
  }
  out_ = f;
}

Writer::~Writer() { delete static_cast<std::ofstream*>(out_); }

void Writer::row(const std::vector<std::string>& cells) {
  auto& f = *static_cast<std::ofstream*>(out_);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) f << ',';
    f << cells[i];
  }
  f << '\n';
}

}  // namespace degpath::csv
