#include "arat/game.hpp"

#include <cmath>
#include <sstream>

#include "arat/error.hpp"

namespace arat {
namespace {

std::string fmt_num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

void check_state_index(const AratGame& game, std::size_t s, std::size_t i,
                       std::size_t j) {
  if (s >= game.num_states() || i >= game.actions_one(s) ||
      j >= game.actions_two(s)) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "(s, i, j) = (" + std::to_string(s) + ", " + std::to_string(i) +
                    ", " + std::to_string(j) + ")");
  }
}

// Returns false (and records why) when the arrays of state s are not shaped
// consistently, in which case numeric checks for s are skipped.
bool check_shapes(const AratGame& game, std::size_t s,
                  std::vector<std::string>& out) {
  const std::size_t d = game.num_states();
  const std::string where = "state " + std::to_string(s + 1);
  bool ok = true;
  if (game.r1[s].size() == 0) {
    out.push_back(where + ": player I has no actions");
    ok = false;
  }
  if (game.r2[s].size() == 0) {
    out.push_back(where + ": player II has no actions");
    ok = false;
  }
  if (static_cast<std::size_t>(game.p1[s].rows()) != game.actions_one(s) ||
      static_cast<std::size_t>(game.p1[s].cols()) != d) {
    out.push_back(where + ": player I transition table must be " +
                  std::to_string(game.actions_one(s)) + "x" +
                  std::to_string(d));
    ok = false;
  }
  if (static_cast<std::size_t>(game.p2[s].rows()) != game.actions_two(s) ||
      static_cast<std::size_t>(game.p2[s].cols()) != d) {
    out.push_back(where + ": player II transition table must be " +
                  std::to_string(game.actions_two(s)) + "x" +
                  std::to_string(d));
    ok = false;
  }
  return ok;
}

}  // namespace

bool AratGame::operator==(const AratGame& other) const {
  if (beta != other.beta || num_states() != other.num_states() ||
      r2.size() != other.r2.size() || p1.size() != other.p1.size() ||
      p2.size() != other.p2.size()) {
    return false;
  }
  auto same = [](const auto& a, const auto& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
  };
  for (std::size_t s = 0; s < num_states(); ++s) {
    if (!same(r1[s], other.r1[s]) || !same(r2[s], other.r2[s]) ||
        !same(p1[s], other.p1[s]) || !same(p2[s], other.p2[s])) {
      return false;
    }
  }
  return true;
}

ValidationReport validate(const AratGame& game) {
  ValidationReport report;
  auto& out = report.violations;
  const std::size_t d = game.num_states();

  if (!(game.beta > 0.0 && game.beta < 1.0)) {
    out.push_back("discount factor beta = " + fmt_num(game.beta) +
                  " is outside (0, 1)");
  }
  if (d == 0) {
    out.push_back("game has no states");
    return report;
  }
  if (game.r2.size() != d || game.p1.size() != d || game.p2.size() != d) {
    out.push_back("per-state arrays disagree on the number of states");
    return report;
  }

  for (std::size_t s = 0; s < d; ++s) {
    if (!check_shapes(game, s, out)) continue;
    const std::string where = "state " + std::to_string(s + 1);
    const Matrix& p1 = game.p1[s];
    const Matrix& p2 = game.p2[s];

    for (Eigen::Index i = 0; i < game.r1[s].size(); ++i) {
      if (!std::isfinite(game.r1[s](i))) {
        out.push_back(where + ": reward r1 of action " + std::to_string(i + 1) +
                      " is not finite");
      }
    }
    for (Eigen::Index j = 0; j < game.r2[s].size(); ++j) {
      if (!std::isfinite(game.r2[s](j))) {
        out.push_back(where + ": reward r2 of action " + std::to_string(j + 1) +
                      " is not finite");
      }
    }

    bool nonneg = true;
    auto check_entries = [&](const Matrix& p, const char* who) {
      for (Eigen::Index a = 0; a < p.rows(); ++a) {
        for (Eigen::Index t = 0; t < p.cols(); ++t) {
          if (!(p(a, t) >= 0.0) || !std::isfinite(p(a, t))) {
            out.push_back(where + ": " + who + " transition p(action " +
                          std::to_string(a + 1) + ", to state " +
                          std::to_string(t + 1) + ") = " + fmt_num(p(a, t)) +
                          " is negative or not finite");
            nonneg = false;
          }
        }
      }
    };
    check_entries(p1, "player I");
    check_entries(p2, "player II");
    if (!nonneg) continue;

    const Vector sum1 = p1.rowwise().sum();
    const Vector sum2 = p2.rowwise().sum();
    for (Eigen::Index i = 0; i < sum1.size(); ++i) {
      for (Eigen::Index j = 0; j < sum2.size(); ++j) {
        const double total = sum1(i) + sum2(j);
        if (std::abs(total - 1.0) > kProbabilityTolerance) {
          out.push_back(where + ", actions (" + std::to_string(i + 1) + ", " +
                        std::to_string(j + 1) + "): row sum " +
                        fmt_num(total) + " != 1");
        }
      }
    }
    if (sum1.maxCoeff() - sum1.minCoeff() > kProbabilityTolerance) {
      out.push_back(where +
                    ": player I transition rows have unequal sums (the "
                    "additive split must be constant within a state)");
    }
    if (sum2.maxCoeff() - sum2.minCoeff() > kProbabilityTolerance) {
      out.push_back(where +
                    ": player II transition rows have unequal sums (the "
                    "additive split must be constant within a state)");
    }

    // A null row of P2(s) forces the whole of P2(s) to vanish.
    for (Eigen::Index j = 0; j < p2.rows(); ++j) {
      if (p2.row(j).isZero(0.0) && !p2.isZero(0.0)) {
        out.push_back(where + ": player II transition row " +
                      std::to_string(j + 1) +
                      " is zero but P2(s) is not null (zero-row condition)");
        break;
      }
    }
  }
  return report;
}

double composed_reward(const AratGame& game, std::size_t s, std::size_t i,
                       std::size_t j) {
  check_state_index(game, s, i, j);
  return game.r1[s](static_cast<Eigen::Index>(i)) +
         game.r2[s](static_cast<Eigen::Index>(j));
}

Matrix reward_matrix(const AratGame& game, std::size_t s) {
  if (s >= game.num_states()) {
    throw Error(ErrorCode::kIndexOutOfRange, "state " + std::to_string(s));
  }
  const Vector& a = game.r1[s];
  const Vector& b = game.r2[s];
  return a.replicate(1, b.size()) + b.transpose().replicate(a.size(), 1);
}

Vector composed_transition(const AratGame& game, std::size_t s, std::size_t i,
                           std::size_t j) {
  check_state_index(game, s, i, j);
  return (game.p1[s].row(static_cast<Eigen::Index>(i)) +
          game.p2[s].row(static_cast<Eigen::Index>(j)))
      .transpose();
}

AratGame shift_rewards(const AratGame& game, double c1, double c2) {
  AratGame shifted = game;
  for (auto& r : shifted.r1) r.array() += c1;
  for (auto& r : shifted.r2) r.array() += c2;
  return shifted;
}

}  // namespace arat
