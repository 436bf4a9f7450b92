#include "oadc/csv.hpp"

#include <cstdio>
#include <sstream>

namespace oadc {

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& record, int dim) {
  out << "t";
  for (int i = 0; i < dim; ++i) out << ",xi_" << i;
  for (int i = 0; i < dim; ++i) out << ",xidot_" << i;
  for (int i = 0; i < dim; ++i) out << ",tauc_" << i;
  for (int i = 0; i < dim; ++i) out << ",taue_" << i;
  out << ",gamma_min,w,signed_dist\n";

  for (const auto& row : record.rows) {
    out << format_double(row.t);
    for (int i = 0; i < dim; ++i) out << ',' << format_double(row.xi[i]);
    for (int i = 0; i < dim; ++i) out << ',' << format_double(row.xi_dot[i]);
    for (int i = 0; i < dim; ++i) out << ',' << format_double(row.tau_c[i]);
    for (int i = 0; i < dim; ++i) out << ',' << format_double(row.tau_e[i]);
    out << ',' << format_double(row.gamma_min) << ',' << format_double(row.weight) << ','
        << format_double(row.signed_distance) << '\n';
  }
}

std::string trajectory_csv(const TrajectoryRecord& record, int dim) {
  std::ostringstream out;
  write_trajectory_csv(out, record, dim);
  return out.str();
}

}  // namespace oadc
