#pragma once

// Conversions between CMatrix and Eigen. Private to the library.

#include <Eigen/Dense>

#include "hamgame/matrix.hpp"

namespace hamgame::detail {

inline Eigen::MatrixXcd to_eigen(const CMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.dim());
  Eigen::MatrixXcd out(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c)
      out(r, c) = m(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
  return out;
}

inline CMatrix from_eigen(const Eigen::MatrixXcd& m) {
  const auto n = static_cast<std::size_t>(m.rows());
  CMatrix out(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      out(r, c) = m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  return out;
}

}  // namespace hamgame::detail
