#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "jre/linalg.hpp"
#include "jre/random.hpp"

namespace jre {

enum class Direction { Max, Min };

/// Settings for the multi-start projected gradient method on the unit sphere.
struct OptimizerConfig {
  int restarts = 24;
  int max_iters = 2000;
  /// Convergence threshold on the tangent gradient norm, relative to
  /// max(1, objective scale).
  double grad_tol = 1e-10;
  double step_init = 0.5;
  double armijo_c = 1e-4;
  std::uint64_t seed = 0x6a6f696e74ULL;

  void validate() const {
    if (restarts < 1 || max_iters < 1)
      throw ContractViolation("OptimizerConfig: restarts and max_iters must "
                              "be positive");
    if (!(grad_tol > 0) || !(step_init > 0))
      throw ContractViolation("OptimizerConfig: grad_tol and step_init must "
                              "be positive");
    if (!(armijo_c > 0) || !(armijo_c < 1))
      throw ContractViolation("OptimizerConfig: armijo_c must lie in (0, 1)");
  }
};

/// Best extremal value of sqrt(f) found over all restarts, together with the
/// unit vector that attains it. `value` is always recomputed from `witness`.
struct ExtremalResult {
  double value = 0.0;
  UnitVector witness = UnitVector::basis(1, 0);
  double grad_norm = 0.0;
  bool converged = false;
  int restarts_used = 0;
};

/// A smooth real objective f on C^n, viewed as R^{2n} with the inner product
/// Re<u, v>. `value_and_gradient` writes the Euclidean gradient.
template <class F>
concept SphereObjective =
    requires(const F &f, const ComplexVector &x, ComplexVector &g) {
      { f.dim() } -> std::convertible_to<Index>;
      { f.value(x) } -> std::convertible_to<double>;
      { f.value_and_gradient(x, g) } -> std::convertible_to<double>;
      { f.scale() } -> std::convertible_to<double>;
      { f.is_zero() } -> std::convertible_to<bool>;
    };

namespace detail {

inline ComplexMatrix stack_members(const OperatorTuple &t, bool adjoint) {
  const Index n = t.dim();
  ComplexMatrix s(static_cast<Index>(t.size()) * n, n);
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (adjoint)
      s.middleRows(static_cast<Index>(k) * n, n) = t[k].adjoint();
    else
      s.middleRows(static_cast<Index>(k) * n, n) = t[k];
  }
  return s;
}

inline double frobenius_scale(const OperatorTuple &t) {
  double s = 0.0;
  for (const auto &m : t)
    s += m.squaredNorm();
  return s;
}

} // namespace detail

/// f(x) = sum_k |<T_k x, x>|^2, whose extrema over the sphere give the
/// squared joint numerical radius (max) and squared Crawford number (min).
///
/// Gradient: 2 sum_k ( conj(q_k) T_k x + q_k T_k^* x ),  q_k = <T_k x, x>.
class JointRadiusObjective {
public:
  explicit JointRadiusObjective(const OperatorTuple &t)
      : d_(t.size()), n_(t.dim()), stack_(detail::stack_members(t, false)),
        stack_adj_(detail::stack_members(t, true)),
        scale_(detail::frobenius_scale(t)) {}

  Index dim() const { return n_; }
  double scale() const { return scale_; }
  bool is_zero() const { return scale_ == 0.0; }

  double value(const ComplexVector &x) const {
    const ComplexVector y = stack_ * x;
    double f = 0.0;
    for (std::size_t k = 0; k < d_; ++k)
      f += std::norm(x.dot(y.segment(static_cast<Index>(k) * n_, n_)));
    return f;
  }

  double value_and_gradient(const ComplexVector &x, ComplexVector &g) const {
    const ComplexVector y = stack_ * x;
    const ComplexVector z = stack_adj_ * x;
    g.setZero(n_);
    double f = 0.0;
    for (std::size_t k = 0; k < d_; ++k) {
      const auto yk = y.segment(static_cast<Index>(k) * n_, n_);
      const auto zk = z.segment(static_cast<Index>(k) * n_, n_);
      const Complex q = x.dot(yk);
      f += std::norm(q);
      g += std::conj(q) * yk + q * zk;
    }
    g *= 2.0;
    return f;
  }

private:
  std::size_t d_;
  Index n_;
  ComplexMatrix stack_;
  ComplexMatrix stack_adj_;
  double scale_;
};

/// f(x) = sum_k ||T_k x||^2; its maximum over the sphere is the squared joint
/// operator norm. Evaluated by matrix-vector products only, so it never forms
/// sum_k T_k^* T_k.
class JointNormObjective {
public:
  explicit JointNormObjective(const OperatorTuple &t)
      : n_(t.dim()), stack_(detail::stack_members(t, false)),
        scale_(detail::frobenius_scale(t)) {}

  Index dim() const { return n_; }
  double scale() const { return scale_; }
  bool is_zero() const { return scale_ == 0.0; }

  double value(const ComplexVector &x) const {
    return (stack_ * x).squaredNorm();
  }

  double value_and_gradient(const ComplexVector &x, ComplexVector &g) const {
    const ComplexVector y = stack_ * x;
    g = 2.0 * (stack_.adjoint() * y);
    return y.squaredNorm();
  }

private:
  Index n_;
  ComplexMatrix stack_;
  double scale_;
};

/// Projection of an ambient vector onto the tangent space of the sphere at x:
/// g - Re<g, x> x.
inline ComplexVector tangent_projection(const ComplexVector &x,
                                        const ComplexVector &g) {
  return g - x.dot(g).real() * x;
}

template <SphereObjective F>
ComplexVector riemannian_gradient(const F &objective, const ComplexVector &x) {
  ComplexVector g;
  objective.value_and_gradient(x, g);
  return tangent_projection(x, g);
}

/// Called once per accepted step with (iteration, f before, f after).
struct NoObserver {
  void operator()(int, double, double) const {}
};

namespace detail {

struct RunOutcome {
  double f = 0.0;
  ComplexVector x;
  double grad_norm = 0.0;
  bool converged = false;
};

/// One projected gradient run with Barzilai-Borwein trial steps, Armijo
/// backtracking (factor 0.5, at most 40 halvings) and retraction by
/// renormalization.
template <SphereObjective F, class Observer>
RunOutcome ascend(const F &objective, Direction dir, ComplexVector x,
                  const OptimizerConfig &cfg, Observer &observer) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double sign = dir == Direction::Max ? 1.0 : -1.0;
  const double gtol = cfg.grad_tol * std::max(1.0, objective.scale());
  x.normalize();

  ComplexVector egrad;
  double f = objective.value_and_gradient(x, egrad);
  ComplexVector rgrad = tangent_projection(x, egrad);
  double gnorm = rgrad.norm();
  double alpha = cfg.step_init / std::max(1.0, objective.scale());

  ComplexVector prev_x, prev_g;
  bool have_prev = false;
  for (int it = 0; it < cfg.max_iters && gnorm > gtol; ++it) {
    if (have_prev) {
      const ComplexVector s = x - prev_x;
      const ComplexVector y = rgrad - prev_g;
      const double sy = std::abs(s.dot(y).real());
      if (sy > 0.0)
        alpha = s.squaredNorm() / sy;
    }
    // keep a single step within unit arc length
    alpha = std::min(alpha, 1.0 / gnorm);

    // f cannot be resolved below a few ulps; the rounding allowance keeps
    // the sufficient-increase test meaningful near the optimum.
    const double noise = 8.0 * eps * std::max(std::abs(f), objective.scale() * eps);
    ComplexVector x_new;
    double f_new = f;
    bool accepted = false;
    for (int halvings = 0; halvings <= 40; ++halvings) {
      x_new = x + (sign * alpha) * rgrad;
      x_new.normalize();
      f_new = objective.value(x_new);
      if (sign * (f_new - f) >= cfg.armijo_c * alpha * gnorm * gnorm - noise) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted || alpha * gnorm < 4.0 * eps)
      break;

    observer(it, f, f_new);
    prev_x = std::move(x);
    prev_g = std::move(rgrad);
    have_prev = true;
    x = std::move(x_new);
    f = objective.value_and_gradient(x, egrad);
    rgrad = tangent_projection(x, egrad);
    gnorm = rgrad.norm();
  }
  return {f, std::move(x), gnorm, gnorm <= gtol};
}

inline bool better(Direction dir, double a, double b) {
  return dir == Direction::Max ? a > b : a < b;
}

} // namespace detail

/// Starting point of restart `r`: the first min(dim, restarts/2) restarts use
/// standard basis vectors, the rest draw a complex Gaussian from their own
/// seeded sub-stream.
inline ComplexVector restart_point(Index dim, int r, const OptimizerConfig &cfg) {
  const int n_basis =
      static_cast<int>(std::min<Index>(dim, std::max(1, cfg.restarts / 2)));
  if (r < n_basis) {
    ComplexVector e = ComplexVector::Zero(dim);
    e(r) = 1.0;
    return e;
  }
  Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(r)));
  return gaussian_vector(dim, rng);
}

/// Multi-start extremization of a sphere objective. The best restart wins;
/// values within 1e-12 are tied and resolved by the lexicographically
/// smallest gauge-fixed witness, so the result does not depend on the order
/// restarts are evaluated in.
template <SphereObjective F, class Observer = NoObserver>
ExtremalResult extremize(const F &objective, Direction dir,
                         const OptimizerConfig &cfg, Observer observer = {}) {
  cfg.validate();
  const Index n = objective.dim();
  if (objective.is_zero())
    return {0.0, UnitVector::basis(n, 0), 0.0, true, 0};

  std::optional<ExtremalResult> best;
  for (int r = 0; r < cfg.restarts; ++r) {
    detail::RunOutcome run =
        detail::ascend(objective, dir, restart_point(n, r, cfg), cfg, observer);
    UnitVector w(std::move(run.x));
    ExtremalResult cand{std::sqrt(std::max(0.0, objective.value(w.coords()))),
                        std::move(w), run.grad_norm, run.converged,
                        cfg.restarts};
    if (!best) {
      best = std::move(cand);
      continue;
    }
    const double tie = 1e-12 * std::max(1.0, std::abs(best->value));
    if (std::abs(cand.value - best->value) <= tie) {
      if (lexicographically_less(cand.witness, best->witness))
        best = std::move(cand);
    } else if (detail::better(dir, cand.value, best->value)) {
      best = std::move(cand);
    }
  }
  return *best;
}

/// Extremum of sqrt(sum_k |<T_k x, x>|^2) over unit x.
inline ExtremalResult extremize_on_sphere(const OperatorTuple &t, Direction dir,
                                          const OptimizerConfig &cfg) {
  return extremize(JointRadiusObjective(t), dir, cfg);
}

namespace detail {

/// Gauge-fixed hyperspherical coordinates: dim-1 magnitude angles followed by
/// dim-1 phases of coordinates 2..dim.
inline void angles_to_point(const std::vector<double> &p, Index dim,
                            std::vector<Complex> &x) {
  x.assign(static_cast<std::size_t>(dim), Complex(0.0, 0.0));
  double rest = 1.0;
  const Index m = dim - 1;
  for (Index i = 0; i < m; ++i) {
    x[static_cast<std::size_t>(i)] = rest * std::cos(p[static_cast<std::size_t>(i)]);
    rest *= std::sin(p[static_cast<std::size_t>(i)]);
  }
  x[static_cast<std::size_t>(m)] = rest;
  for (Index i = 1; i < dim; ++i)
    x[static_cast<std::size_t>(i)] *=
        std::polar(1.0, p[static_cast<std::size_t>(m + i - 1)]);
}

/// Plain-loop evaluation of sum_k |x^* T_k x|^2, independent of the
/// optimizer's stacked matrix-vector path.
inline double oracle_objective(const OperatorTuple &t,
                               const std::vector<Complex> &x) {
  const auto n = x.size();
  double f = 0.0;
  for (const auto &m : t) {
    Complex q(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      Complex row(0.0, 0.0);
      for (std::size_t j = 0; j < n; ++j)
        row += m(static_cast<Index>(i), static_cast<Index>(j)) * x[j];
      q += std::conj(x[i]) * row;
    }
    f += std::norm(q);
  }
  return f;
}

} // namespace detail

/// Exhaustive grid search over the gauge-fixed sphere followed by a
/// compass-search refinement from the best grid point. Returns the extremal
/// sqrt(f). Only dim <= 3 is supported; `step` is the angular grid spacing.
inline double grid_oracle(const OperatorTuple &t, Direction dir, double step) {
  if (t.dim() > 3)
    throw UnsupportedDimension("grid_oracle: dimension " +
                               std::to_string(t.dim()) +
                               " exceeds the supported maximum of 3");
  if (!(step > 0.0) || step > 0.1)
    throw ContractViolation("grid_oracle: step must lie in (0, 0.1]");

  const Index dim = t.dim();
  const double sign = dir == Direction::Max ? 1.0 : -1.0;
  std::vector<Complex> x;
  if (dim == 1) {
    x = {Complex(1.0, 0.0)};
    return std::sqrt(detail::oracle_objective(t, x));
  }

  const std::size_t nparams = static_cast<std::size_t>(2 * dim - 2);
  const std::size_t nmag = static_cast<std::size_t>(dim - 1);
  std::vector<int> counts(nparams);
  for (std::size_t i = 0; i < nparams; ++i) {
    const double range = i < nmag ? std::numbers::pi / 2 : 2 * std::numbers::pi;
    counts[i] = static_cast<int>(std::floor(range / step)) + (i < nmag ? 1 : 0);
  }

  std::vector<double> p(nparams, 0.0), best_p(nparams, 0.0);
  std::vector<int> idx(nparams, 0);
  double best = std::numeric_limits<double>::quiet_NaN();
  for (;;) {
    for (std::size_t i = 0; i < nparams; ++i)
      p[i] = idx[i] * step;
    detail::angles_to_point(p, dim, x);
    const double f = detail::oracle_objective(t, x);
    if (std::isnan(best) || sign * (f - best) > 0) {
      best = f;
      best_p = p;
    }
    std::size_t i = 0;
    while (i < nparams && ++idx[i] == counts[i])
      idx[i++] = 0;
    if (i == nparams)
      break;
  }

  // compass search
  p = best_p;
  double h = step;
  for (int iter = 0; iter < 200000 && h > 1e-13; ++iter) {
    bool improved = false;
    for (std::size_t i = 0; i < nparams && !improved; ++i) {
      for (double s : {h, -h}) {
        std::vector<double> q = p;
        q[i] += s;
        detail::angles_to_point(q, dim, x);
        const double f = detail::oracle_objective(t, x);
        if (sign * (f - best) > 0) {
          best = f;
          p = std::move(q);
          improved = true;
          break;
        }
      }
    }
    if (!improved)
      h *= 0.5;
  }
  return std::sqrt(std::max(0.0, best));
}

} // namespace jre
