#pragma once

#include <random>
#include <string>

#include "arat/game.hpp"
#include "arat/io.hpp"

namespace arat::testing {

inline std::string data_path(const std::string& name) {
  return std::string(ARAT_DATA_DIR) + "/" + name;
}

inline AratGame example1() { return load_game(data_path("example1.json")); }
inline AratGame example2() { return load_game(data_path("example2.json")); }

// Random ARAT game: the probability mass of each state is split between the
// players by a random alpha, rows drawn uniformly and rescaled.
inline AratGame random_game(std::mt19937_64& rng, std::size_t max_states,
                            std::size_t max_actions, double beta,
                            double rmin = 1.0, double rmax = 10.0) {
  std::uniform_int_distribution<std::size_t> states(1, max_states);
  std::uniform_int_distribution<std::size_t> acts(1, max_actions);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> reward(rmin, rmax);

  AratGame g;
  g.beta = beta;
  const std::size_t d = states(rng);
  auto rows = [&](std::size_t m, double mass) {
    Matrix p(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
      for (Eigen::Index c = 0; c < p.cols(); ++c) p(i, c) = unit(rng) + 1e-3;
      p.row(i) *= mass / p.row(i).sum();
    }
    return p;
  };
  for (std::size_t s = 0; s < d; ++s) {
    const std::size_t m1 = acts(rng);
    const std::size_t m2 = acts(rng);
    const double alpha = unit(rng);
    Vector r1(static_cast<Eigen::Index>(m1));
    Vector r2(static_cast<Eigen::Index>(m2));
    for (Eigen::Index i = 0; i < r1.size(); ++i) r1(i) = reward(rng);
    for (Eigen::Index j = 0; j < r2.size(); ++j) r2(j) = reward(rng);
    g.r1.push_back(r1);
    g.r2.push_back(r2);
    g.p1.push_back(rows(m1, alpha));
    g.p2.push_back(rows(m2, 1.0 - alpha));
  }
  return g;
}

}  // namespace arat::testing
