#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace degpath {

/// One specimen's measurement grid, degradation readings, and covariate
/// history. Measurement times and covariate times may differ; all degradation
/// characteristics share the measurement grid.
struct Specimen {
  long id = 0;
  std::vector<double> measure_times;          // t_ik, strictly increasing, > 0
  Eigen::MatrixXd y;                          // n_i x J readings
  std::vector<double> covariate_times;        // s_il, strictly increasing, > 0
  Eigen::MatrixXd covariates;                 // l_i x M values x_im(s_il)
};

struct DegradationDataset {
  std::vector<Specimen> specimens;
  int num_dcs = 0;         // J
  int num_covariates = 0;  // M

  int num_specimens() const { return static_cast<int>(specimens.size()); }
  long total_observations() const;

  /// Observed [min, max] of covariate m across all specimens.
  std::pair<double, double> covariate_range(int m) const;

  void validate() const;  // throws DataError on invariant violations
};

/// Long-format CSV ingestion. Measurements: specimen,dc,time_days,value.
/// Covariates: specimen,covariate,time_days,value. DC and covariate ids must
/// be 1..J and 1..M; every specimen needs all J readings at each of its
/// measurement times and all M values at each covariate time.
DegradationDataset load_dataset(const std::string& measurements_csv,
                                const std::string& covariates_csv);

void write_dataset(const DegradationDataset& data, const std::string& measurements_csv,
                   const std::string& covariates_csv);

}  // namespace degpath
