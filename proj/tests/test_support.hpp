// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "pintdae/linalg.hpp"

namespace pintdae::testing {

/// Random mass matrix admissible for projector construction: a well-scaled
/// SPD (or lumped diagonal) block on a random index subset, zero elsewhere.
inline Matrix random_admissible_mass(std::mt19937& rng, Index n, bool& out_diagonal) {
  std::uniform_int_distribution<Index> pick_size(1, n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  std::uniform_real_distribution<double> magnitude(-2.0, 2.0);

  const Index s = pick_size(rng);
  std::vector<Index> idx(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(static_cast<std::size_t>(s));

  const double scale = std::pow(10.0, magnitude(rng));
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  out_diagonal = unit(rng) < 0.5;
  if (out_diagonal) {
    for (Index i : idx) m(i, i) = scale * (0.5 + unit(rng));
  } else {
    Eigen::MatrixXd b(s, s);
    for (Index r = 0; r < s; ++r)
      for (Index c = 0; c < s; ++c) b(r, c) = entry(rng);
    const Eigen::MatrixXd block =
        scale * (b * b.transpose() + static_cast<double>(s) * Eigen::MatrixXd::Identity(s, s));
    for (Index r = 0; r < s; ++r)
      for (Index c = 0; c < s; ++c) m(idx[static_cast<std::size_t>(r)],
                                      idx[static_cast<std::size_t>(c)]) = block(r, c);
  }
  return Matrix(std::move(m));
}

}  // namespace pintdae::testing
