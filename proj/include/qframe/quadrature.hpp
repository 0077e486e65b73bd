#ifndef QFRAME_QUADRATURE_HPP
#define QFRAME_QUADRATURE_HPP

#include <complex>
#include <span>
#include <vector>

namespace qframe {

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule by Newton iteration on P_n.
[[nodiscard]] GaussLegendreRule gauss_legendre(unsigned n);

/// Pairwise (tree) summation; the association order depends only on the
/// length, so results are reproducible bit for bit.
template <typename T>
T pairwise_sum(std::span<const T> values) {
  if (values.empty()) return T{};
  if (values.size() <= 8) {
    T acc{};
    for (const auto& v : values) acc += v;
    return acc;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace qframe

#endif  // QFRAME_QUADRATURE_HPP
