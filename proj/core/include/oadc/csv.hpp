#pragma once

#include <ostream>
#include <string>

#include "oadc/simulator.hpp"

namespace oadc {

/// Locale-independent float formatting with 17 significant digits, enough
/// to round-trip any double exactly.
std::string format_double(double value);

/// Fixed column order: t, xi_0.., xidot_0.., tauc_0.., taue_0..,
/// gamma_min, w, signed_dist.
void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& record, int dim);

std::string trajectory_csv(const TrajectoryRecord& record, int dim);

}  // namespace oadc
