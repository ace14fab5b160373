#pragma once

#include <vector>

#include "isarff/types.hpp"

namespace isarff {

/// Histogram binning over [lo, hi] with `bins` uniform bins; values at hi fall in the last bin.
struct Histogram
{
  double lo{0.0};
  double hi{1.0};
  int bins{256};

  int bin_of(double v) const;
  double centre(int b) const { return lo + (b + 0.5) * (hi - lo) / bins; }
};

/// Otsu split: returns the last bin of the lower class, maximising between-class
/// variance. Ties go to the lowest bin. Returns -1 when fewer than two bins are occupied.
int otsu_bin(const ImageD& values, const Histogram& hist);

/// Pixels whose bin lies above the Otsu split.
Mask otsu_mask(const ImageD& values, const Histogram& hist);

/// 8-connected component labels (0 = background, components numbered from 1 in raster order).
Image<int> label_components(const Mask& mask, int* count = nullptr);

/// Keeps 8-connected components with at least min_area pixels.
Mask remove_small_components(const Mask& mask, int min_area);

Mask dilate3(const Mask& mask);
/// Erosion treating pixels outside the frame as set, so closing never shrinks the input.
Mask erode3(const Mask& mask);
inline Mask close3(const Mask& mask) { return erode3(dilate3(mask)); }

} // namespace isarff
