#pragma once

#include <string>
#include <vector>

namespace degpath::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 when absent
  int require_column(const std::string& name, const std::string& file) const;
};

Table read_file(const std::string& path);

/// Require the header to match exactly (order included).
void check_header(const Table& t, const std::vector<std::string>& expected,
                  const std::string& file);

double to_double(const std::string& s, const std::string& context);
long to_long(const std::string& s, const std::string& context);

/// Shortest round-trip representation of a double.
std::string format_double(double x);

struct Writer {
  explicit Writer(const std::string& path);
  ~Writer();
  Writer(const Writer&) = delete;
  Writer& operator=(const Writer&) = delete;

  void row(const std::vector<std::string>& cells);

 private:
  void* out_;
};

}  // namespace degpath::csv
