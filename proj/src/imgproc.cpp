#include "isarff/imgproc.hpp"

#include <algorithm>
#include <cmath>

namespace isarff {

int Histogram::bin_of(double v) const
{
  if (!(hi > lo)) return 0;
  const double t = (v - lo) / (hi - lo) * bins;
  return std::clamp(static_cast<int>(std::floor(t)), 0, bins - 1);
}

int otsu_bin(const ImageD& values, const Histogram& hist)
{
  std::vector<double> count(static_cast<std::size_t>(hist.bins), 0.0);
  for (Eigen::Index i = 0; i < values.size(); ++i) count[hist.bin_of(values(i))] += 1.0;

  const double total = static_cast<double>(values.size());
  double sum_all = 0.0;
  int occupied = 0;
  for (int b = 0; b < hist.bins; ++b) {
    sum_all += count[b] * hist.centre(b);
    occupied += count[b] > 0.0;
  }
  if (occupied < 2) return -1;

  int best = -1;
  double best_var = -1.0;
  double w0 = 0.0, sum0 = 0.0;
  for (int b = 0; b < hist.bins - 1; ++b) {
    w0 += count[b];
    sum0 += count[b] * hist.centre(b);
    const double w1 = total - w0;
    if (w0 == 0.0 || w1 == 0.0) continue;
    const double mu0 = sum0 / w0;
    const double mu1 = (sum_all - sum0) / w1;
    const double var = (w0 / total) * (w1 / total) * (mu0 - mu1) * (mu0 - mu1);
    if (var > best_var) {
      best_var = var;
      best = b;
    }
  }
  return best;
}

Mask otsu_mask(const ImageD& values, const Histogram& hist)
{
  const int split = otsu_bin(values, hist);
  Mask m = Mask::Zero(values.rows(), values.cols());
  if (split < 0) return m;
  for (Eigen::Index i = 0; i < values.size(); ++i) m(i) = hist.bin_of(values(i)) > split;
  return m;
}

Image<int> label_components(const Mask& mask, int* count)
{
  const Eigen::Index rows = mask.rows(), cols = mask.cols();
  Image<int> labels = Image<int>::Zero(rows, cols);
  int next = 0;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> stack;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (!mask(r, c) || labels(r, c)) continue;
      ++next;
      labels(r, c) = next;
      stack.assign(1, {r, c});
      while (!stack.empty()) {
        auto [y, x] = stack.back();
        stack.pop_back();
        for (Eigen::Index dy = -1; dy <= 1; ++dy)
          for (Eigen::Index dx = -1; dx <= 1; ++dx) {
            const Eigen::Index ny = y + dy, nx = x + dx;
            if (ny < 0 || nx < 0 || ny >= rows || nx >= cols) continue;
            if (mask(ny, nx) && !labels(ny, nx)) {
              labels(ny, nx) = next;
              stack.emplace_back(ny, nx);
            }
          }
      }
    }
  if (count) *count = next;
  return labels;
}

Mask remove_small_components(const Mask& mask, int min_area)
{
  int n = 0;
  const Image<int> labels = label_components(mask, &n);
  std::vector<int> area(static_cast<std::size_t>(n) + 1, 0);
  for (Eigen::Index i = 0; i < labels.size(); ++i) ++area[labels(i)];
  Mask out = Mask::Zero(mask.rows(), mask.cols());
  for (Eigen::Index i = 0; i < labels.size(); ++i) out(i) = labels(i) > 0 && area[labels(i)] >= min_area;
  return out;
}

namespace {

template <bool Dilate>
Mask morph3(const Mask& mask)
{
  const Eigen::Index rows = mask.rows(), cols = mask.cols();
  Mask out(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) {
      bool acc = !Dilate;
      for (Eigen::Index dy = -1; dy <= 1; ++dy)
        for (Eigen::Index dx = -1; dx <= 1; ++dx) {
          const Eigen::Index y = r + dy, x = c + dx;
          const bool inside = y >= 0 && x >= 0 && y < rows && x < cols;
          const bool v = inside ? mask(y, x) != 0 : !Dilate;
          acc = Dilate ? (acc || v) : (acc && v);
        }
      out(r, c) = acc;
    }
  return out;
}

} // namespace

Mask dilate3(const Mask& mask) { return morph3<true>(mask); }
Mask erode3(const Mask& mask) { return morph3<false>(mask); }

} // namespace isarff
