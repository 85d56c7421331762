#include "synchrony/game.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace synchrony {

void GameParams::validate() const {
  if (!(alpha > 0)) throw ValidationError("game: alpha must be > 0");
  if (!(beta > 0)) throw ValidationError("game: beta must be > 0");
  if (x < 0 || x > 1) throw ValidationError("game: x must lie in [0, 1]");
  if (y < 0 || y > 1) throw ValidationError("game: y must lie in [0, 1]");
}

namespace {

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

}  // namespace

EquilibriumProbs solve_equilibrium(const GameParams& params) {
  params.validate();
  const double gap = params.x - params.y;
  if (std::abs(gap) <= kBeliefGapTol)
    throw DegenerateBeliefs("game: |x - y| <= 1e-12, closed form undefined");
  const double ratio = params.alpha / params.beta;
  EquilibriumProbs eq;
  eq.raw_active = ratio * (params.x + params.y - 2.0) / gap;
  eq.raw_inactive = ratio * (params.x + params.y) / gap;
  eq.p_act_active = clamp01(eq.raw_active);
  eq.p_act_inactive = clamp01(eq.raw_inactive);
  return eq;
}

double expected_utility(AgentType own_type, Strategy own_strategy, const GameParams& params,
                        std::pair<double, double> opponent_mix) {
  const auto [q_active, q_inactive] = opponent_mix;
  if (q_active < 0 || q_active > 1 || q_inactive < 0 || q_inactive > 1)
    throw ValidationError("game: opponent mix components must lie in [0, 1]");
  if (own_strategy == Strategy::NotAct) return 0.0;
  const double belief = (own_type == AgentType::Active) ? params.x : params.y;
  const double p_opponent_acts = belief * q_active + (1.0 - belief) * q_inactive;
  const double private_part = (own_type == AgentType::Active) ? params.alpha : -params.alpha;
  return private_part + params.beta * p_opponent_acts;
}

namespace {

// Indifference residuals of the four Selten agents at a symmetric profile
// (q1, q2). The system decouples: each player's two agents face the same two
// equations in the opponent's pair, so both players' residuals coincide at a
// symmetric point; all four are still evaluated.
struct Residuals {
  std::array<double, 4> r;
  double max_abs() const {
    double m = 0;
    for (double v : r) m = std::max(m, std::abs(v));
    return m;
  }
};

// EU(act) linearly extended to act-probabilities outside [0,1]. The
// indifference system is linear and its root can lie outside the unit
// square; clamping the root is what makes the willingness well-defined.
double eu_act_linear(AgentType type, const GameParams& p, double q1, double q2) {
  const double belief = (type == AgentType::Active) ? p.x : p.y;
  const double private_part = (type == AgentType::Active) ? p.alpha : -p.alpha;
  return private_part + p.beta * (belief * q1 + (1.0 - belief) * q2);
}

Residuals residuals_at(const GameParams& p, double q1, double q2) {
  Residuals res;
  res.r[0] = eu_act_linear(AgentType::Active, p, q1, q2);     // player i, type active
  res.r[1] = eu_act_linear(AgentType::NonActive, p, q1, q2);  // player i, type non-active
  res.r[2] = eu_act_linear(AgentType::Active, p, q1, q2);     // player j, labels swapped
  res.r[3] = eu_act_linear(AgentType::NonActive, p, q1, q2);
  return res;
}

struct SearchResult {
  double q1 = 0, q2 = 0, residual = 0;
};

SearchResult grid_min(const GameParams& p, double lo1, double hi1, double lo2, double hi2,
                      int cells) {
  SearchResult best;
  best.residual = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= cells; ++i) {
    const double q1 = lo1 + (hi1 - lo1) * i / cells;
    for (int j = 0; j <= cells; ++j) {
      const double q2 = lo2 + (hi2 - lo2) * j / cells;
      const double r = residuals_at(p, q1, q2).max_abs();
      if (r < best.residual) best = {q1, q2, r};
    }
  }
  return best;
}

SearchResult refine(const GameParams& p, SearchResult start, double half_width) {
  SearchResult best = start;
  double w = half_width;
  int stale = 0;
  for (int iter = 0; iter < 120 && best.residual > 1e-13 && stale < 12; ++iter) {
    const SearchResult local =
        grid_min(p, best.q1 - w, best.q1 + w, best.q2 - w, best.q2 + w, 10);
    if (local.residual < best.residual * (1.0 - 1e-9)) {
      best = local;
      stale = 0;
    } else {
      ++stale;
    }
    w *= 0.55;
  }
  return best;
}

}  // namespace

BruteForceOutcome brute_force_equilibrium(const GameParams& params, int grid) {
  params.validate();
  if (grid < 101) throw ValidationError("game: oracle grid must be >= 101");
  const double gap = params.x - params.y;
  if (std::abs(gap) <= kBeliefGapTol)
    throw DegenerateBeliefs("game: |x - y| <= 1e-12, oracle system singular");

  constexpr double kInteriorTol = 1e-6;

  // Pass 1: the unit square. With alpha > 0 the active type's act utility is
  // bounded below by alpha there, so a true interior equilibrium is rare.
  SearchResult unit = grid_min(params, 0.0, 1.0, 0.0, 1.0, grid - 1);
  unit = refine(params, unit, 1.0 / (grid - 1));
  const bool interior = unit.residual < kInteriorTol && unit.q1 > 0.0 && unit.q1 < 1.0 &&
                        unit.q2 > 0.0 && unit.q2 < 1.0;

  SearchResult root = unit;
  if (!interior) {
    // Pass 2: extend the box to cover the unconstrained root; the raw values
    // are bounded by 2*(alpha/beta)/|x - y| in magnitude. The coarse grid
    // seeds a secant-Jacobian Newton polish, which is exact for this system.
    const double bound = 2.0 * (params.alpha / params.beta) / std::abs(gap) + 1.0;
    SearchResult wide = grid_min(params, -bound, bound, -bound, bound, grid - 1);
    double q1 = wide.q1, q2 = wide.q2;
    for (int iter = 0; iter < 12; ++iter) {
      const double f1 = eu_act_linear(AgentType::Active, params, q1, q2);
      const double f2 = eu_act_linear(AgentType::NonActive, params, q1, q2);
      if (std::max(std::abs(f1), std::abs(f2)) < 1e-14 * (1.0 + params.alpha)) break;
      const double h = 1e-4 * (1.0 + std::abs(q1) + std::abs(q2));
      const double j11 = (eu_act_linear(AgentType::Active, params, q1 + h, q2) - f1) / h;
      const double j12 = (eu_act_linear(AgentType::Active, params, q1, q2 + h) - f1) / h;
      const double j21 = (eu_act_linear(AgentType::NonActive, params, q1 + h, q2) - f2) / h;
      const double j22 = (eu_act_linear(AgentType::NonActive, params, q1, q2 + h) - f2) / h;
      const double det = j11 * j22 - j12 * j21;
      if (std::abs(det) < 1e-300) break;
      q1 -= (j22 * f1 - j12 * f2) / det;
      q2 -= (-j21 * f1 + j11 * f2) / det;
    }
    wide.q1 = q1;
    wide.q2 = q2;
    wide.residual = residuals_at(params, q1, q2).max_abs();
    if (wide.residual < unit.residual) root = wide;
  }

  BruteForceOutcome out;
  out.probs.raw_active = root.q1;
  out.probs.raw_inactive = root.q2;
  out.probs.p_act_active = clamp01(root.q1);
  out.probs.p_act_inactive = clamp01(root.q2);
  out.max_residual = root.residual;
  out.interior_equilibrium = interior;

  // Corner sign checks at the clamped point.
  const double e1 =
      eu_act_linear(AgentType::Active, params, out.probs.p_act_active, out.probs.p_act_inactive);
  const double e2 = eu_act_linear(AgentType::NonActive, params, out.probs.p_act_active,
                                  out.probs.p_act_inactive);
  auto corner_ok = [](double clamped, double raw, double eu) {
    if (clamped == raw) return true;  // not clamped; indifference already holds
    if (clamped == 0.0) return eu <= kInteriorTol;
    return eu >= -kInteriorTol;  // clamped == 1
  };
  out.corner_best_response = corner_ok(out.probs.p_act_active, out.probs.raw_active, e1) &&
                             corner_ok(out.probs.p_act_inactive, out.probs.raw_inactive, e2);
  return out;
}

}  // namespace synchrony
