#include "degpath/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "degpath/csv.hpp"
#include "degpath/errors.hpp"

namespace degpath {

long DegradationDataset::total_observations() const {
  long n = 0;
  for (const auto& s : specimens) n += static_cast<long>(s.measure_times.size()) * num_dcs;
  return n;
}

std::pair<double, double> DegradationDataset::covariate_range(int m) const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& s : specimens) {
    for (Eigen::Index l = 0; l < s.covariates.rows(); ++l) {
      lo = std::min(lo, s.covariates(l, m));
      hi = std::max(hi, s.covariates(l, m));
    }
  }
  if (!(lo <= hi)) throw DataError("no covariate records for covariate " + std::to_string(m + 1));
  return {lo, hi};
}

void DegradationDataset::validate() const {
  if (specimens.empty()) throw DataError("dataset has no specimens");
  if (num_dcs < 1 || num_covariates < 1)
    throw DataError("dataset needs at least one DC and one covariate");
  for (const auto& s : specimens) {
    auto check_times = [&](const std::vector<double>& ts, const char* what) {
      for (std::size_t k = 0; k < ts.size(); ++k) {
        if (!(ts[k] > 0.0))
          throw DataError("specimen " + std::to_string(s.id) + ": nonpositive " +
                          what + " time");
        if (k > 0 && !(ts[k] > ts[k - 1]))
          throw DataError("specimen " + std::to_string(s.id) + ": " + what +
                          " times not strictly increasing");
      }
    };
    check_times(s.measure_times, "measurement");
    check_times(s.covariate_times, "covariate");
    if (s.y.rows() != static_cast<Eigen::Index>(s.measure_times.size()) ||
        s.y.cols() != num_dcs)
      throw DataError("specimen " + std::to_string(s.id) + ": measurement shape mismatch");
    if (s.covariates.rows() != static_cast<Eigen::Index>(s.covariate_times.size()) ||
        s.covariates.cols() != num_covariates)
      throw DataError("specimen " + std::to_string(s.id) + ": covariate shape mismatch");
    if (!s.y.allFinite() || !s.covariates.allFinite())
      throw DataError("specimen " + std::to_string(s.id) + ": non-finite values");
  }
}

namespace {

struct LongRows {
  // specimen -> time -> series id -> value
  std::map<long, std::map<double, std::map<int, double>>> cells;
  int max_series = 0;
};

LongRows read_long(const std::string& path, const char* series_col) {
  auto t = csv::read_file(path);
  csv::check_header(t, {"specimen", series_col, "time_days", "value"}, path);
  LongRows out;
  for (const auto& r : t.rows) {
    long spec = csv::to_long(r[0], path);
    int series = static_cast<int>(csv::to_long(r[1], path));
    double time = csv::to_double(r[2], path);
    double value = csv::to_double(r[3], path);
    if (series < 1) throw DataError(path + ": ids must start at 1");
    auto& slot = out.cells[spec][time];
    if (slot.count(series))
      throw DataError(path + ": duplicate record for specimen " + std::to_string(spec));
    slot[series] = value;
    out.max_series = std::max(out.max_series, series);
  }
  return out;
}

}  // namespace

DegradationDataset load_dataset(const std::string& measurements_csv,
                                const std::string& covariates_csv) {
  auto meas = read_long(measurements_csv, "dc");
  auto cov = read_long(covariates_csv, "covariate");

  DegradationDataset data;
  data.num_dcs = meas.max_series;
  data.num_covariates = cov.max_series;

  for (const auto& [spec_id, times] : meas.cells) {
    if (!cov.cells.count(spec_id))
      throw DataError("specimen " + std::to_string(spec_id) + " has no covariate records");
    Specimen s;
    s.id = spec_id;
    s.y.resize(static_cast<Eigen::Index>(times.size()), data.num_dcs);
    Eigen::Index k = 0;
    for (const auto& [t, series] : times) {
      s.measure_times.push_back(t);
      for (int j = 1; j <= data.num_dcs; ++j) {
        auto it = series.find(j);
        if (it == series.end())
          throw DataError(measurements_csv + ": specimen " + std::to_string(spec_id) +
                          " misses DC " + std::to_string(j) + " at time " +
                          std::to_string(t));
        s.y(k, j - 1) = it->second;
      }
      ++k;
    }
    const auto& ctimes = cov.cells.at(spec_id);
    s.covariates.resize(static_cast<Eigen::Index>(ctimes.size()), data.num_covariates);
    Eigen::Index l = 0;
    for (const auto& [t, series] : ctimes) {
      s.covariate_times.push_back(t);
      for (int m = 1; m <= data.num_covariates; ++m) {
        auto it = series.find(m);
        if (it == series.end())
          throw DataError(covariates_csv + ": specimen " + std::to_string(spec_id) +
                          " misses covariate " + std::to_string(m) + " at time " +
                          std::to_string(t));
        s.covariates(l, m - 1) = it->second;
      }
      ++l;
    }
    data.specimens.push_back(std::move(s));
  }
  data.validate();
  return data;
}

void write_dataset(const DegradationDataset& data, const std::string& measurements_csv,
                   const std::string& covariates_csv) {
  csv::Writer meas(measurements_csv);
  meas.row({"specimen", "dc", "time_days", "value"});
  for (const auto& s : data.specimens)
    for (std::size_t k = 0; k < s.measure_times.size(); ++k)
      for (int j = 0; j < data.num_dcs; ++j)
        meas.row({std::to_string(s.id), std::to_string(j + 1),
                  csv::format_double(s.measure_times[k]),
                  csv::format_double(s.y(static_cast<Eigen::Index>(k), j))});

  csv::Writer cov(covariates_csv);
  cov.row({"specimen", "covariate", "time_days", "value"});
  for (const auto& s : data.specimens)
    for (std::size_t l = 0; l < s.covariate_times.size(); ++l)
      for (int m = 0; m < data.num_covariates; ++m)
        cov.row({std::to_string(s.id), std::to_string(m + 1),
                 csv::format_double(s.covariate_times[l]),
                 csv::format_double(s.covariates(static_cast<Eigen::Index>(l), m))});
}

}  // namespace degpath
