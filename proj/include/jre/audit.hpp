#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <vector>

#include "jre/ensembles.hpp"
#include "jre/linalg.hpp"
#include "jre/quantities.hpp"
#include "jre/random.hpp"
#include "jre/sphere_optimizer.hpp"

namespace jre {

enum class Status { Pass, PassTol, Fail, Inconclusive, Skipped };

inline std::string_view to_string(Status s) {
  switch (s) {
  case Status::Pass: return "PASS";
  case Status::PassTol: return "PASS_TOL";
  case Status::Fail: return "FAIL";
  case Status::Inconclusive: return "INCONCLUSIVE";
  case Status::Skipped: return "SKIPPED";
  }
  return "?";
}

inline std::optional<Status> parse_status(std::string_view s) {
  for (auto st : {Status::Pass, Status::PassTol, Status::Fail,
                  Status::Inconclusive, Status::Skipped})
    if (s == to_string(st))
      return st;
  return std::nullopt;
}

/// Verdict of one check on one set of inputs. `slack = rhs - lhs` of the
/// tightest inequality the check evaluated.
struct CheckResult {
  std::string check_id;
  std::size_t trial = 0;
  Status status = Status::Skipped;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double tolerance = 0.0;
  int escalations = 0;
  std::map<std::string, UnitVector> witnesses;
  std::string diagnostics;
};

/// Named operands a check may consume. Unused slots may stay empty.
struct CheckInputs {
  std::optional<OperatorTuple> t, s, x, y, z, w, a, b;
  /// Seed of the random unit vector used by pointwise checks.
  std::uint64_t probe_seed = 0;
};

/// Memo of optimizer and eigensolver results keyed by tuple contents, shared
/// by the checks of one trial. Not thread-safe; use one per worker.
class QuantityCache {
public:
  enum class Kind { Radius, Crawford, VariationalNorm, Norm };

  const ExtremalResult *find(Kind kind, int restarts,
                             const OperatorTuple &t) const {
    auto [lo, hi] = map_.equal_range(key(kind, restarts, t));
    for (auto it = lo; it != hi; ++it)
      if (it->second.kind == kind && it->second.restarts == restarts &&
          it->second.tuple == t)
        return &it->second.result;
    return nullptr;
  }

  const ExtremalResult &store(Kind kind, int restarts, const OperatorTuple &t,
                              ExtremalResult r) {
    auto it = map_.emplace(key(kind, restarts, t),
                           Entry{kind, restarts, t, std::move(r)});
    return it->second.result;
  }

  std::size_t size() const { return map_.size(); }

private:
  struct Entry {
    Kind kind;
    int restarts;
    OperatorTuple tuple;
    ExtremalResult result;
  };

  static std::uint64_t key(Kind kind, int restarts, const OperatorTuple &t) {
    std::uint64_t h = 1469598103934665603ULL;
    auto feed = [&h](const void *p, std::size_t n) {
      const auto *c = static_cast<const unsigned char *>(p);
      for (std::size_t i = 0; i < n; ++i) {
        h ^= c[i];
        h *= 1099511628211ULL;
      }
    };
    const int k = static_cast<int>(kind);
    feed(&k, sizeof k);
    feed(&restarts, sizeof restarts);
    for (const auto &m : t)
      feed(m.data(), sizeof(Complex) * static_cast<std::size_t>(m.size()));
    return h;
  }

  std::unordered_multimap<std::uint64_t, Entry> map_;
};

/// Computes the quantities a check needs and remembers which optimizer runs
/// were involved, their convergence, and the largest joint norm touched.
class Evaluator {
public:
  Evaluator(OptimizerConfig cfg, double base_tol, QuantityCache *cache = nullptr)
      : cfg_(cfg), base_tol_(base_tol), cache_(cache ? cache : &own_cache_) {}

  double we(const OperatorTuple &t, const std::string &label = {}) {
    return optimized(QuantityCache::Kind::Radius, t, label);
  }

  double ce(const OperatorTuple &t, const std::string &label = {}) {
    return optimized(QuantityCache::Kind::Crawford, t, label);
  }

  double variational_norm(const OperatorTuple &t,
                          const std::string &label = {}) {
    return optimized(QuantityCache::Kind::VariationalNorm, t, label);
  }

  double norm(const OperatorTuple &t) {
    const ExtremalResult *hit = cache_->find(QuantityCache::Kind::Norm, 0, t);
    const double v =
        hit ? hit->value
            : cache_
                  ->store(QuantityCache::Kind::Norm, 0, t,
                          ExtremalResult{joint_norm(t), UnitVector::basis(1, 0),
                                         0.0, true, 0})
                  .value;
    scale_ = std::max(scale_, v);
    return v;
  }

  /// Base tolerance scaled by the largest joint norm touched so far.
  double tolerance() const { return base_tol_ * std::max(1.0, scale_); }
  double base_tolerance() const { return base_tol_; }
  double scale() const { return scale_; }
  bool used_optimizer() const { return used_optimizer_; }
  bool all_converged() const { return nonconverged_.empty(); }
  const std::vector<std::string> &nonconverged() const { return nonconverged_; }
  const std::map<std::string, UnitVector> &witnesses() const {
    return witnesses_;
  }
  const OptimizerConfig &config() const { return cfg_; }

private:
  double optimized(QuantityCache::Kind kind, const OperatorTuple &t,
                   const std::string &label) {
    norm(t);
    used_optimizer_ = true;
    const ExtremalResult *r = cache_->find(kind, cfg_.restarts, t);
    if (!r) {
      ExtremalResult fresh = [&] {
        switch (kind) {
        case QuantityCache::Kind::Radius: return euclidean_radius(t, cfg_);
        case QuantityCache::Kind::Crawford: return crawford(t, cfg_);
        default: return variational_joint_norm(t, cfg_);
        }
      }();
      r = &cache_->store(kind, cfg_.restarts, t, std::move(fresh));
    }
    if (!r->converged)
      nonconverged_.push_back(label.empty() ? std::string("(unlabeled)")
                                            : label);
    if (!label.empty())
      witnesses_.insert_or_assign(label, r->witness);
    return r->value;
  }

  OptimizerConfig cfg_;
  double base_tol_;
  QuantityCache own_cache_;
  QuantityCache *cache_;
  double scale_ = 0.0;
  bool used_optimizer_ = false;
  std::vector<std::string> nonconverged_;
  std::map<std::string, UnitVector> witnesses_;
};

/// One inequality lhs <= rhs inside a check.
struct Part {
  std::string label;
  double lhs;
  double rhs;
};

struct CheckOutcome {
  std::vector<Part> parts;
  /// Set when the outcome falls into an undecidable band (C13).
  bool ambiguous = false;
  std::string note;
};

enum class Slot { T, S, X, Y, Z, W, A, B };

struct CheckSpec {
  std::string id;
  std::string statement;
  std::vector<Slot> needs;
  /// Returns a reason when the inputs do not satisfy the hypotheses.
  std::function<std::optional<std::string>(const CheckInputs &)> precondition;
  std::function<CheckOutcome(Evaluator &, const CheckInputs &)> body;
};

namespace detail {

inline void le(CheckOutcome &o, std::string label, double lhs, double rhs) {
  o.parts.push_back({std::move(label), lhs, rhs});
}

inline void eq(CheckOutcome &o, const std::string &label, double a, double b) {
  o.parts.push_back({label + " (<=)", a, b});
  o.parts.push_back({label + " (>=)", b, a});
}

inline double rootd(const OperatorTuple &t) {
  return std::sqrt(static_cast<double>(t.size()));
}

inline const OperatorTuple &get(const CheckInputs &in, Slot s) {
  const std::optional<OperatorTuple> *p = nullptr;
  switch (s) {
  case Slot::T: p = &in.t; break;
  case Slot::S: p = &in.s; break;
  case Slot::X: p = &in.x; break;
  case Slot::Y: p = &in.y; break;
  case Slot::Z: p = &in.z; break;
  case Slot::W: p = &in.w; break;
  case Slot::A: p = &in.a; break;
  case Slot::B: p = &in.b; break;
  }
  if (!p || !p->has_value())
    throw ContractViolation("missing input tuple");
  return **p;
}

inline std::string_view slot_name(Slot s) {
  static constexpr std::string_view names[] = {"T", "S", "X", "Y",
                                               "Z", "W", "A", "B"};
  return names[static_cast<int>(s)];
}

inline Eigen::Matrix2d mat2(double a, double b, double c, double d) {
  Eigen::Matrix2d m;
  m << a, b, c, d;
  return m;
}

inline constexpr int kThetaSweep = 16;

inline double theta(int j) {
  return 2.0 * std::numbers::pi * j / kThetaSweep;
}

inline std::vector<CheckSpec> build_registry() {
  using O = OperatorTuple;
  std::vector<CheckSpec> r;
  auto none = [](const CheckInputs &) -> std::optional<std::string> {
    return std::nullopt;
  };

  r.push_back({"C1", "(1/(2 sqrt d)) ||T|| <= w_e(T) <= ||T||", {Slot::T}, none,
               [](Evaluator &ev, const CheckInputs &in) {
                 const O &t = in.t.value();
                 CheckOutcome o;
                 const double n = ev.norm(t), w = ev.we(t, "w_e(T)");
                 le(o, "lower bound", n / (2.0 * rootd(t)), w);
                 le(o, "upper bound", w, n);
                 return o;
               }});

  r.push_back({"C2", "sup (sum ||T_k x||^2)^{1/2} = sqrt ||sum T_k^* T_k||",
               {Slot::T}, none, [](Evaluator &ev, const CheckInputs &in) {
                 const O &t = in.t.value();
                 CheckOutcome o;
                 eq(o, "variational = spectral",
                    ev.variational_norm(t, "variational ||T||"), ev.norm(t));
                 return o;
               }});

  r.push_back(
      {"C3",
       "sum ||T_k x||^2 + sum |<T_k^2 x, x>| <= 2 sqrt d w_e(T) "
       "(sum ||T_k x||^2)^{1/2} at a random unit x",
       {Slot::T}, none, [](Evaluator &ev, const CheckInputs &in) {
         const O &t = in.t.value();
         Rng rng(in.probe_seed);
         const ComplexVector x = random_unit_vector(t.dim(), rng).coords();
         double sq = 0.0, quad = 0.0;
         for (const auto &m : t) {
           const ComplexVector tx = m * x;
           sq += tx.squaredNorm();
           quad += std::abs(x.dot(m * tx));
         }
         CheckOutcome o;
         le(o, "pointwise", sq + quad,
            2.0 * rootd(t) * ev.we(t, "w_e(T)") * std::sqrt(sq));
         return o;
       }});

  r.push_back({"C4", "w_e(T^2) <= d w_e(T)^2", {Slot::T}, none,
               [](Evaluator &ev, const CheckInputs &in) {
                 const O &t = in.t.value();
                 const double w = ev.we(t, "w_e(T)");
                 CheckOutcome o;
                 le(o, "square", ev.we(tuple_power(t, 2), "w_e(T^2)"),
                    static_cast<double>(t.size()) * w * w);
                 return o;
               }});

  r.push_back(
      {"C5", "(1/(2 sqrt d)) (||T|| + c_e(T^2)/||T||) <= w_e(T)", {Slot::T},
       [](const CheckInputs &in) -> std::optional<std::string> {
         if (joint_norm(in.t.value()) == 0.0)
           return "||T|| = 0";
         return std::nullopt;
       },
       [](Evaluator &ev, const CheckInputs &in) {
         const O &t = in.t.value();
         const double n = ev.norm(t);
         const double c = ev.ce(tuple_power(t, 2), "c_e(T^2)");
         CheckOutcome o;
         le(o, "refined lower bound", (n + c / n) / (2.0 * rootd(t)),
            ev.we(t, "w_e(T)"));
         return o;
       }});

  r.push_back(
      {"C6",
       "||T^2|| = ||(T_k^* T_k)|| <= ||T||^2 = ||T^*||^2 <= sqrt d ||T^2||",
       {Slot::T},
       [](const CheckInputs &in) -> std::optional<std::string> {
         if (!is_normal_tuple(in.t.value()))
           return "T is not joint normal";
         return std::nullopt;
       },
       [](Evaluator &ev, const CheckInputs &in) {
         const O &t = in.t.value();
         std::vector<ComplexMatrix> gram;
         for (const auto &m : t)
           gram.push_back(m.adjoint() * m);
         const double n = ev.norm(t);
         const double sq = ev.norm(tuple_power(t, 2));
         const double g = ev.norm(O(std::move(gram)));
         const double na = ev.norm(tuple_adjoint(t));
         CheckOutcome o;
         eq(o, "||T^2|| = ||(T_k^* T_k)||", sq, g);
         le(o, "||(T_k^* T_k)|| <= ||T||^2", g, n * n);
         eq(o, "||T||^2 = ||T^*||^2", n * n, na * na);
         le(o, "||T||^2 <= sqrt d ||T^2||", n * n, rootd(t) * sq);
         return o;
       }});

  r.push_back({"C7", "w_e(T^n) <= sqrt d w_e(T)^n, n = 2, 3", {Slot::T}, none,
               [](Evaluator &ev, const CheckInputs &in) {
                 const O &t = in.t.value();
                 const double w = ev.we(t, "w_e(T)");
                 CheckOutcome o;
                 for (int p : {2, 3})
                   le(o, "n = " + std::to_string(p),
                      ev.we(tuple_power(t, p), "w_e(T^" + std::to_string(p) + ")"),
                      rootd(t) * std::pow(w, p));
                 return o;
               }});

  r.push_back(
      {"C8", "w_e(T) <= 1 implies ||T^n|| <= 2d, n = 2, 3 (T normalized by w_e)",
       {Slot::T}, none, [](Evaluator &ev, const CheckInputs &in) {
         const O &t = in.t.value();
         const double w = ev.we(t, "w_e(T)");
         const O unit = w > 0.0 ? tuple_scale(1.0 / w, t) : t;
         CheckOutcome o;
         o.note = "normalized by the certified lower bound of w_e";
         for (int p : {2, 3})
           le(o, "n = " + std::to_string(p), ev.norm(tuple_power(unit, p)),
              2.0 * static_cast<double>(t.size()));
         return o;
       }});

  r.push_back({"C9a", "||ST|| <= ||S|| ||T||", {Slot::S, Slot::T}, none,
               [](Evaluator &ev, const CheckInputs &in) {
                 const O &s = in.s.value(), &t = in.t.value();
                 CheckOutcome o;
                 le(o, "submultiplicative", ev.norm(s * t),
                    ev.norm(s) * ev.norm(t));
                 return o;
               }});

  r.push_back({"C9b", "w_e(S + T) <= w_e(S) + w_e(T)", {Slot::S, Slot::T}, none,
               [](Evaluator &ev, const CheckInputs &in) {
                 const O &s = in.s.value(), &t = in.t.value();
                 CheckOutcome o;
                 le(o, "subadditive", ev.we(s + t, "w_e(S+T)"),
                    ev.we(s, "w_e(S)") + ev.we(t, "w_e(T)"));
                 return o;
               }});

  r.push_back({"C10", "w_e(ST) <= 4d w_e(S) w_e(T)", {Slot::S, Slot::T}, none,
               [](Evaluator &ev, const CheckInputs &in) {
                 const O &s = in.s.value(), &t = in.t.value();
                 CheckOutcome o;
                 le(o, "product", ev.we(s * t, "w_e(ST)"),
                    4.0 * static_cast<double>(t.size()) * ev.we(s, "w_e(S)") *
                        ev.we(t, "w_e(T)"));
                 return o;
               }});

  r.push_back(
      {"C11", "S_k T_k = T_k S_k implies w_e(ST) <= 2 sqrt d w_e(S) w_e(T)",
       {Slot::S, Slot::T},
       [](const CheckInputs &in) -> std::optional<std::string> {
         if (!pair_commutes(in.s.value(), in.t.value()))
           return "S_k T_k != T_k S_k";
         return std::nullopt;
       },
       [](Evaluator &ev, const CheckInputs &in) {
         const O &s = in.s.value(), &t = in.t.value();
         CheckOutcome o;
         le(o, "commuting product", ev.we(s * t, "w_e(ST)"),
            2.0 * rootd(t) * ev.we(s, "w_e(S)") * ev.we(t, "w_e(T)"));
         return o;
       }});

  r.push_back(
      {"C12", "S, T joint normal implies w_e(ST) <= w_e(S) w_e(T)",
       {Slot::S, Slot::T},
       [](const CheckInputs &in) -> std::optional<std::string> {
         if (!is_normal_tuple(in.s.value()) || !is_normal_tuple(in.t.value()))
           return "S or T is not joint normal";
         return std::nullopt;
       },
       [](Evaluator &ev, const CheckInputs &in) {
         const O &s = in.s.value(), &t = in.t.value();
         CheckOutcome o;
         le(o, "normal product", ev.we(s * t, "w_e(ST)"),
            ev.we(s, "w_e(S)") * ev.we(t, "w_e(T)"));
         return o;
       }});

  r.push_back(
      {"C13", "T commuting: r(T) = ||T|| iff w_e(T) = ||T||", {Slot::T},
       [](const CheckInputs &in) -> std::optional<std::string> {
         if (!is_commuting(in.t.value()))
           return "T is not commuting";
         return std::nullopt;
       },
       [](Evaluator &ev, const CheckInputs &in) {
         const O &t = in.t.value();
         const double n = ev.norm(t);
         const double rad = joint_spectral_radius(t);
         const double w = ev.we(t, "w_e(T)");
         const double eps = ev.tolerance();
         const double b = n - w;
         CheckOutcome o;
         if (std::abs(b) <= eps) {
           eq(o, "w_e = ||T|| forces r = ||T||", rad, n);
         } else {
           le(o, "r <= w_e", rad, w);
           le(o, "w_e <= ||T||", w, n);
           if (b < 10.0 * eps) {
             o.ambiguous = true;
             o.note = "||T|| - w_e lies in the ambiguity band (eps, 10 eps)";
           }
         }
         return o;
       }});

  r.push_back(
      {"C14",
       "block identities: diagonal w_e and norm, off-diagonal swap, phase "
       "sweep, [[X,Y],[Y,X]]",
       {Slot::X, Slot::Y}, none, [](Evaluator &ev, const CheckInputs &in) {
         const O &x = in.x.value(), &y = in.y.value();
         const O zero = O::zero(x.size(), x.dim());
         CheckOutcome o;
         const double wx = ev.we(x, "w_e(X)"), wy = ev.we(y, "w_e(Y)");
         eq(o, "(a) w_e diag", ev.we(block2x2(x, zero, zero, y), "w_e([X,0;0,Y])"),
            std::max(wx, wy));
         eq(o, "(b) norm diag", ev.norm(block2x2(x, zero, zero, y)),
            std::max(ev.norm(x), ev.norm(y)));
         const double off = ev.we(block2x2(zero, x, y, zero), "w_e([0,X;Y,0])");
         eq(o, "(c) swap", off, ev.we(block2x2(zero, y, x, zero), "w_e([0,Y;X,0])"));
         for (int j = 1; j < kThetaSweep; ++j) {
           const O rot = tuple_scale(std::polar(1.0, theta(j)), y);
           eq(o, "(d) theta = 2 pi " + std::to_string(j) + "/16",
              ev.we(block2x2(zero, x, rot, zero)), off);
         }
         eq(o, "(e) [X,Y;Y,X]", ev.we(block2x2(x, y, y, x), "w_e([X,Y;Y,X])"),
            std::max(ev.we(x - y), ev.we(x + y)));
         eq(o, "(e) [0,Y;Y,0]", ev.we(block2x2(zero, y, y, zero), "w_e([0,Y;Y,0])"),
            wy);
         return o;
       }});

  r.push_back({"C15", "w_e([X,Y;Z,W]) <= w([[w_e(X), ||Y||], [||Z||, w_e(W)]])",
               {Slot::X, Slot::Y, Slot::Z, Slot::W}, none,
               [](Evaluator &ev, const CheckInputs &in) {
                 const O &x = in.x.value(), &y = in.y.value(), &z = in.z.value(),
                         &w = in.w.value();
                 CheckOutcome o;
                 le(o, "block upper bound",
                    ev.we(block2x2(x, y, z, w), "w_e(block)"),
                    numerical_radius_nonneg2x2(mat2(ev.we(x, "w_e(X)"), ev.norm(y),
                                                    ev.norm(z), ev.we(w, "w_e(W)"))));
                 return o;
               }});

  r.push_back({"C16", "w_e([X,Y;Z,W]) <= w([[||X||, ||Y||], [||Z||, ||W||]])",
               {Slot::X, Slot::Y, Slot::Z, Slot::W}, none,
               [](Evaluator &ev, const CheckInputs &in) {
                 const O &x = in.x.value(), &y = in.y.value(), &z = in.z.value(),
                         &w = in.w.value();
                 CheckOutcome o;
                 le(o, "block norm bound", ev.we(block2x2(x, y, z, w), "w_e(block)"),
                    numerical_radius_nonneg2x2(
                        mat2(ev.norm(x), ev.norm(y), ev.norm(z), ev.norm(w))));
                 return o;
               }});

  r.push_back(
      {"C17", "closed-form spectral-radius bounds for w_e([X,Y;Z,W])",
       {Slot::X, Slot::Y, Slot::Z, Slot::W}, none,
       [](Evaluator &ev, const CheckInputs &in) {
         const O &x = in.x.value(), &y = in.y.value(), &z = in.z.value(),
                 &w = in.w.value();
         const double blk = ev.we(block2x2(x, y, z, w), "w_e(block)");
         const double wx = ev.we(x, "w_e(X)"), ww = ev.we(w, "w_e(W)");
         const double nx = ev.norm(x), ny = ev.norm(y), nz = ev.norm(z),
                      nw = ev.norm(w);
         auto closed = [](double a, double c, double off) {
           return 0.5 * (a + c + std::sqrt((a - c) * (a - c) + off * off));
         };
         const double rhs1 = closed(wx, ww, ny + nz);
         const double rhs2 = closed(nx, nw, ny + nz);
         CheckOutcome o;
         le(o, "radius form", blk, rhs1);
         le(o, "norm form", blk, rhs2);
         eq(o, "closed form = symmetrized spectral radius", rhs1,
            numerical_radius_nonneg2x2(mat2(wx, ny, nz, ww)));
         return o;
       }});

  r.push_back(
      {"C18",
       "(max{w_e((XY)^n), w_e((YX)^n)} / sqrt d)^{1/(2n)} <= w_e([0,X;Y,0]), "
       "n = 1, 2",
       {Slot::X, Slot::Y}, none, [](Evaluator &ev, const CheckInputs &in) {
         const O &x = in.x.value(), &y = in.y.value();
         const O zero = O::zero(x.size(), x.dim());
         const double off = ev.we(block2x2(zero, x, y, zero), "w_e([0,X;Y,0])");
         CheckOutcome o;
         for (int p : {1, 2}) {
           const double m = std::max(ev.we(tuple_power(x * y, p)),
                                     ev.we(tuple_power(y * x, p)));
           le(o, "n = " + std::to_string(p),
              std::pow(m / rootd(x), 1.0 / (2.0 * p)), off);
         }
         return o;
       }});

  r.push_back(
      {"C19",
       "max{w_e(X+Y), w_e(X-Y)}/2 <= w_e([0,X;Y,0]) <= (w_e(X+Y) + w_e(X-Y))/2",
       {Slot::X, Slot::Y}, none, [](Evaluator &ev, const CheckInputs &in) {
         const O &x = in.x.value(), &y = in.y.value();
         const O zero = O::zero(x.size(), x.dim());
         const double off = ev.we(block2x2(zero, x, y, zero), "w_e([0,X;Y,0])");
         const double p = ev.we(x + y, "w_e(X+Y)"), m = ev.we(x - y, "w_e(X-Y)");
         CheckOutcome o;
         le(o, "lower", 0.5 * std::max(p, m), off);
         le(o, "upper", off, 0.5 * (p + m));
         return o;
       }});

  r.push_back(
      {"C20", "w_e(T)/2 <= w_e([0,X;e^{i theta}Y,0]) <= w_e(T), T = X + iY",
       {Slot::T}, none, [](Evaluator &ev, const CheckInputs &in) {
         const O &t = in.t.value();
         const auto [x, y] = cartesian_decompose(t);
         const O zero = O::zero(t.size(), t.dim());
         const double w = ev.we(t, "w_e(T)");
         CheckOutcome o;
         for (int j = 0; j < kThetaSweep; ++j) {
           const O rot = tuple_scale(std::polar(1.0, theta(j)), y);
           const double b = ev.we(block2x2(zero, x, rot, zero));
           const std::string tag = "theta = 2 pi " + std::to_string(j) + "/16";
           le(o, tag + " lower", 0.5 * w, b);
           le(o, tag + " upper", b, w);
         }
         return o;
       }});

  r.push_back(
      {"C21", "w_e([X,Y;Z,W]) >= w_e([X,0;0,W]) and >= w_e([0,Y;Z,0])",
       {Slot::X, Slot::Y, Slot::Z, Slot::W}, none,
       [](Evaluator &ev, const CheckInputs &in) {
         const O &x = in.x.value(), &y = in.y.value(), &z = in.z.value(),
                 &w = in.w.value();
         const O zero = O::zero(x.size(), x.dim());
         const double blk = ev.we(block2x2(x, y, z, w), "w_e(block)");
         CheckOutcome o;
         le(o, "diagonal part", ev.we(block2x2(x, zero, zero, w), "w_e(diag)"), blk);
         le(o, "off-diagonal part", ev.we(block2x2(zero, y, z, zero), "w_e(offdiag)"),
            blk);
         return o;
       }});

  r.push_back(
      {"C22",
       "max{w_e(X), w_e(Y)} <= w_e([X,Y;-Y,-X]) <= w_e(X) + w_e(Y), and Y = X",
       {Slot::X, Slot::Y}, none, [](Evaluator &ev, const CheckInputs &in) {
         const O &x = in.x.value(), &y = in.y.value();
         const double wx = ev.we(x, "w_e(X)"), wy = ev.we(y, "w_e(Y)");
         const double blk = ev.we(block2x2(x, y, -y, -x), "w_e([X,Y;-Y,-X])");
         const double same = ev.we(block2x2(x, x, -x, -x), "w_e([X,X;-X,-X])");
         CheckOutcome o;
         le(o, "lower", std::max(wx, wy), blk);
         le(o, "upper", blk, wx + wy);
         le(o, "Y = X lower", wx, same);
         le(o, "Y = X upper", same, 2.0 * wx);
         return o;
       }});

  r.push_back(
      {"C23",
       "max{w_e(X), w_e(W), w_e((Y+Z)/2), w_e((Y-Z)/2)} <= w_e([X,Y;Z,W]) <= "
       "max{w_e(X), w_e(W)} + w_e((Y+Z)/2) + w_e((Y-Z)/2)",
       {Slot::X, Slot::Y, Slot::Z, Slot::W}, none,
       [](Evaluator &ev, const CheckInputs &in) {
         const O &x = in.x.value(), &y = in.y.value(), &z = in.z.value(),
                 &w = in.w.value();
         const double blk = ev.we(block2x2(x, y, z, w), "w_e(block)");
         const double wx = ev.we(x, "w_e(X)"), ww = ev.we(w, "w_e(W)");
         const double p = ev.we(tuple_scale(0.5, y + z), "w_e((Y+Z)/2)");
         const double m = ev.we(tuple_scale(0.5, y - z), "w_e((Y-Z)/2)");
         CheckOutcome o;
         le(o, "lower", std::max({wx, ww, p, m}), blk);
         le(o, "upper", blk, std::max(wx, ww) + p + m);
         return o;
       }});

  r.push_back(
      {"C24",
       "w_e([0,X;Y,0]) + |w_e(X+Y) - w_e(X-Y)|/2 <= w_e(X) + w_e(Y)",
       {Slot::X, Slot::Y}, none, [](Evaluator &ev, const CheckInputs &in) {
         const O &x = in.x.value(), &y = in.y.value();
         const O zero = O::zero(x.size(), x.dim());
         const double off = ev.we(block2x2(zero, x, y, zero), "w_e([0,X;Y,0])");
         const double p = ev.we(x + y, "w_e(X+Y)"), m = ev.we(x - y, "w_e(X-Y)");
         CheckOutcome o;
         le(o, "identity bound", off + 0.5 * std::abs(p - m),
            ev.we(x, "w_e(X)") + ev.we(y, "w_e(Y)"));
         return o;
       }});

  r.push_back(
      {"C25",
       "w_e(A^*XB + B^*YA) <= (||A||^2 + ||B||^2) w_e([0,X;Y,0]) and <= 2 ||A|| "
       "||B|| w_e([0,X;Y,0]); X = Y case against 2 ||A|| ||B|| w_e(X)",
       {Slot::A, Slot::B, Slot::X, Slot::Y}, none,
       [](Evaluator &ev, const CheckInputs &in) {
         const O &a = in.a.value(), &b = in.b.value(), &x = in.x.value(),
                 &y = in.y.value();
         const O zero = O::zero(x.size(), x.dim());
         const O as = tuple_adjoint(a), bs = tuple_adjoint(b);
         const O mixed = as * x * b + bs * y * a;
         const O same = as * x * b + bs * x * a;
         const double na = ev.norm(a), nb = ev.norm(b);
         const double off = ev.we(block2x2(zero, x, y, zero), "w_e([0,X;Y,0])");
         const double wm = ev.we(mixed, "w_e(A*XB+B*YA)");
         CheckOutcome o;
         le(o, "sum of squares", wm, (na * na + nb * nb) * off);
         le(o, "product", wm, 2.0 * na * nb * off);
         le(o, "X = Y", ev.we(same, "w_e(A*XB+B*XA)"),
            2.0 * na * nb * ev.we(x, "w_e(X)"));
         return o;
       }});

  r.push_back({"C26",
               "||[X,Y;Z,W]|| <= || [[||X||, ||Y||], [||Z||, ||W||]] ||",
               {Slot::X, Slot::Y, Slot::Z, Slot::W}, none,
               [](Evaluator &ev, const CheckInputs &in) {
                 const O &x = in.x.value(), &y = in.y.value(), &z = in.z.value(),
                         &w = in.w.value();
                 CheckOutcome o;
                 le(o, "block norm", ev.norm(block2x2(x, y, z, w)),
                    spectral_norm2x2(
                        mat2(ev.norm(x), ev.norm(y), ev.norm(z), ev.norm(w))));
                 return o;
               }});
  return r;
}

} // namespace detail

inline const std::vector<CheckSpec> &check_registry() {
  static const std::vector<CheckSpec> registry = detail::build_registry();
  return registry;
}

inline std::vector<std::string> all_check_ids() {
  std::vector<std::string> ids;
  for (const auto &c : check_registry())
    ids.push_back(c.id);
  return ids;
}

inline const CheckSpec *find_check(std::string_view id) {
  for (const auto &c : check_registry())
    if (c.id == id)
      return &c;
  return nullptr;
}

inline constexpr int kMaxEscalations = 3;

/// Evaluates one registry check. Hypotheses that do not hold yield SKIPPED.
///
/// Verdicts, with tol_eff = tol * max(1, largest joint norm touched):
///   slack >= 0                     PASS
///   -tol_eff <= slack < 0          PASS_TOL
///   otherwise, when an optimizer was involved, the check is re-run with
///   doubled restarts (at most three times); a remaining deficit within
///   10 tol_eff, or one involving a non-converged run, is INCONCLUSIVE and
///   anything else is FAIL.
inline CheckResult evaluate_check(std::string_view check_id,
                                  const CheckInputs &inputs,
                                  const OptimizerConfig &cfg, double tol,
                                  QuantityCache *cache = nullptr) {
  const CheckSpec *spec = find_check(check_id);
  if (!spec)
    throw ContractViolation("unknown check id '" + std::string(check_id) + "'");
  if (!(tol > 0))
    throw ContractViolation("evaluate_check: tol must be positive");
  cfg.validate();

  const OperatorTuple *first = nullptr;
  for (Slot s : spec->needs) {
    const OperatorTuple *cur = nullptr;
    try {
      cur = &detail::get(inputs, s);
    } catch (const ContractViolation &) {
      throw ContractViolation(spec->id + " requires input " +
                              std::string(detail::slot_name(s)));
    }
    if (first && (first->size() != cur->size() || first->dim() != cur->dim()))
      throw DimensionMismatch(spec->id + ": input " +
                              std::string(detail::slot_name(s)) +
                              " does not match the shape of the other inputs");
    if (!first)
      first = cur;
  }

  CheckResult res;
  res.check_id = spec->id;
  if (auto why = spec->precondition(inputs)) {
    res.status = Status::Skipped;
    res.diagnostics = *why;
    return res;
  }

  OptimizerConfig run_cfg = cfg;
  for (int esc = 0;; ++esc) {
    Evaluator ev(run_cfg, tol, cache);
    CheckOutcome out = spec->body(ev, inputs);
    const Part *worst = &out.parts.front();
    for (const auto &p : out.parts)
      if (p.rhs - p.lhs < worst->rhs - worst->lhs)
        worst = &p;

    const double tol_eff = ev.tolerance();
    res.lhs = worst->lhs;
    res.rhs = worst->rhs;
    res.slack = worst->rhs - worst->lhs;
    res.tolerance = tol_eff;
    res.escalations = esc;
    res.witnesses = ev.witnesses();
    res.diagnostics = "tightest: " + worst->label;
    if (!out.note.empty())
      res.diagnostics += "; " + out.note;
    if (!ev.all_converged()) {
      res.diagnostics += "; not converged:";
      for (const auto &l : ev.nonconverged())
        res.diagnostics += " " + l;
    }

    if (!out.ambiguous && res.slack >= -tol_eff) {
      res.status = res.slack >= 0.0 ? Status::Pass : Status::PassTol;
      return res;
    }
    if (!ev.used_optimizer()) {
      res.status = Status::Fail;
      return res;
    }
    if (esc == kMaxEscalations) {
      if (out.ambiguous || res.slack >= -10.0 * tol_eff || !ev.all_converged())
        res.status = Status::Inconclusive;
      else
        res.status = Status::Fail;
      return res;
    }
    run_cfg.restarts *= 2;
  }
}

struct Summary {
  std::size_t pass = 0, pass_tol = 0, fail = 0, inconclusive = 0, skipped = 0;

  void add(Status s) {
    switch (s) {
    case Status::Pass: ++pass; break;
    case Status::PassTol: ++pass_tol; break;
    case Status::Fail: ++fail; break;
    case Status::Inconclusive: ++inconclusive; break;
    case Status::Skipped: ++skipped; break;
    }
  }

  friend bool operator==(const Summary &, const Summary &) = default;
};

inline Summary summarize(const std::vector<CheckResult> &results) {
  Summary s;
  for (const auto &r : results)
    s.add(r.status);
  return s;
}

struct AuditReport {
  EnsembleSpec spec;
  std::size_t trials = 0;
  double tolerance = 0.0;
  OptimizerConfig optimizer;
  std::vector<std::string> checks;
  std::vector<CheckResult> results;
  Summary summary;
};

/// Inputs of one audit trial. S and T are the two halves of a single 2d-tuple
/// from the ensemble, so commuting and normal ensembles also give pairs with
/// S_k T_k = T_k S_k. Sharpness trials use the witness for every slot.
inline CheckInputs make_trial_inputs(const EnsembleSpec &spec,
                                     std::size_t trial) {
  spec.validate();
  const std::uint64_t ts = derive_seed(spec.seed, trial);
  CheckInputs in;
  in.probe_seed = derive_seed(ts, 7);
  if (spec.kind == EnsembleKind::Sharpness) {
    const OperatorTuple t = generate(spec, ts, trial);
    in.t = in.s = in.x = in.y = in.z = in.w = in.a = in.b = t;
    return in;
  }
  EnsembleSpec pair = spec;
  pair.d = 2 * spec.d;
  const OperatorTuple st = generate(pair, derive_seed(ts, 0));
  const auto half = [&](std::size_t from) {
    return OperatorTuple(std::vector<ComplexMatrix>(
        st.ops().begin() + static_cast<std::ptrdiff_t>(from),
        st.ops().begin() + static_cast<std::ptrdiff_t>(from + spec.d)));
  };
  in.s = half(0);
  in.t = half(spec.d);
  in.x = generate(spec, derive_seed(ts, 1));
  in.y = generate(spec, derive_seed(ts, 2));
  in.z = generate(spec, derive_seed(ts, 3));
  in.w = generate(spec, derive_seed(ts, 4));
  in.a = generate(spec, derive_seed(ts, 5));
  in.b = generate(spec, derive_seed(ts, 6));
  return in;
}

/// Runs every requested check on `trials` fresh draws from `spec`. Trials are
/// spread over `threads` workers; results are ordered by (trial, check) and
/// do not depend on the schedule.
inline AuditReport run_audit(const EnsembleSpec &spec,
                             const std::vector<std::string> &check_ids,
                             std::size_t trials, const OptimizerConfig &cfg,
                             double tol, unsigned threads = 1) {
  if (check_ids.empty())
    throw ContractViolation("run_audit: no checks requested");
  if (trials < 1)
    throw ContractViolation("run_audit: trials must be at least 1");
  for (const auto &id : check_ids)
    if (!find_check(id))
      throw ContractViolation("unknown check id '" + id + "'");
  spec.validate();
  cfg.validate();

  std::vector<std::vector<CheckResult>> per_trial(trials);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= trials)
        return;
      try {
        const CheckInputs in = make_trial_inputs(spec, t);
        QuantityCache cache;
        auto &out = per_trial[t];
        for (const auto &id : check_ids) {
          CheckResult r = evaluate_check(id, in, cfg, tol, &cache);
          r.trial = t;
          out.push_back(std::move(r));
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error)
          error = std::current_exception();
        next.store(trials);
      }
    }
  };

  const unsigned n_workers =
      std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(trials)));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n_workers; ++i)
      pool.emplace_back(worker);
    for (auto &th : pool)
      th.join();
  }
  if (error)
    std::rethrow_exception(error);

  AuditReport rep;
  rep.spec = spec;
  rep.trials = trials;
  rep.tolerance = tol;
  rep.optimizer = cfg;
  rep.checks = check_ids;
  for (auto &v : per_trial)
    for (auto &r : v)
      rep.results.push_back(std::move(r));
  rep.summary = summarize(rep.results);
  return rep;
}

} // namespace jre
