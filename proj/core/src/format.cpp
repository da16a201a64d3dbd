#include "sheaflab/format.hpp"

#include <cmath>
#include <cstdio>

namespace sheaflab {

std::string format_number(double value) {
  if (value == 0.0) return "0";  // collapses -0
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

std::string format_vector(const Eigen::VectorXd& v) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_number(v(i));
  }
  out += "]";
  return out;
}

std::string format_matrix(const Eigen::MatrixXd& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (i) out += "\n";
    out += format_vector(m.row(i).transpose());
  }
  return out;
}

}  // namespace sheaflab
