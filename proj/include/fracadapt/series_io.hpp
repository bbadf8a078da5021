#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <stdexcept>
#include <string>

namespace fracadapt {

/// Plain-text series: one value per line, '#' lines and blank lines ignored.
Eigen::VectorXd read_series(std::istream& in);
Eigen::VectorXd read_series_file(const std::string& path);

/// Writes each value with 17 significant digits so reading it back is exact.
void write_series(std::ostream& out, const Eigen::Ref<const Eigen::VectorXd>& x, const std::string& header = {});
void write_series_file(const std::string& path, const Eigen::Ref<const Eigen::VectorXd>& x,
                       const std::string& header = {});

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fracadapt
