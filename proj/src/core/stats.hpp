#pragma once

#include <span>

namespace snls {

/// Ordinary least-squares slope of ys against xs (sizes must match, at least two points).
double least_squares_slope(std::span<const double> xs, std::span<const double> ys);

}  // namespace snls
