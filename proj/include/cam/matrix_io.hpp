#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>

namespace cam {

// Plain-text matrix format: a header line "# rows cols" followed by one
// whitespace-separated row per line. Values are written with enough digits
// to round-trip doubles exactly, so save/load is lossless.
Eigen::MatrixXd load_matrix(const std::string& path);
Eigen::MatrixXd read_matrix(std::istream& in, const std::string& label);

void save_matrix(const std::string& path, const Eigen::MatrixXd& m);
void write_matrix(std::ostream& out, const Eigen::MatrixXd& m);

} // namespace cam
