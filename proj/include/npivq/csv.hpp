#pragma once

#include <string>

#include "npivq/sample.hpp"

namespace npivq {

/// Affine map t -> (t - offset) / scale used to place a column on [0,1].
struct RescaleMap {
  double offset = 0.0;
  double scale = 1.0;
};

struct DataSet {
  Sample sample;  // x, w already rescaled to [0,1]
  RescaleMap x_map;
  RescaleMap w_map;
};

/// Reads a data CSV with header `y,x,w` (UTF-8, decimal point) and min-max
/// rescales x and w to [0,1]. Malformed rows raise InvalidInputError naming
/// the 1-based line.
DataSet read_data_csv(const std::string& path);

}  // namespace npivq
