#ifndef SHEAFLAB_FORMAT_HPP
#define SHEAFLAB_FORMAT_HPP

#include <Eigen/Dense>
#include <string>

namespace sheaflab {

/// Renders a finite double as decimal with 12 significant digits ("%.12g"),
/// normalizing negative zero to "0". All file and report output goes through
/// this so runs are byte-identical.
std::string format_number(double value);

/// "[a, b, c]" with format_number entries; "[]" when empty.
std::string format_vector(const Eigen::VectorXd& v);

/// One bracketed line per row, rows joined by '\n'.
std::string format_matrix(const Eigen::MatrixXd& m);

}  // namespace sheaflab

#endif
