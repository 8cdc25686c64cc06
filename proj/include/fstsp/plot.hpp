#pragma once

#include <string>

#include "fstsp/schedule.hpp"

namespace fstsp {

/// Route figure: the 8x8 mile region, depot as a square, customers as
/// circles, the truck route as one solid polyline and every sortie as two
/// dashed polylines (launch to customer, customer to rendezvous).
/// Throws ParameterError when the instance carries no coordinates.
std::string plot_svg(const Instance& inst, const Schedule& s);

}  // namespace fstsp
