#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "core/divdiff.hpp"
#include "core/weights.hpp"

namespace steffkit {

enum class MemoryMode { None, DividedDifference, Kurchatov };
enum class SolveStatus { Converged, MaxIterations, Failed };

// beta / delta are plain scalars without memory and full matrices with it.
template <class S>
using ParamValue = std::variant<S, Matrix<S>>;

struct SolverConfig {
  int m = 1;            // steps per outer iteration; the plain order is 2m
  double beta = 0.1;    // scalar shift parameters (ignored with memory on)
  double delta = 0.1;
  WeightSpec weight = WeightSpec::paper_poly();
  MemoryMode memory = MemoryMode::None;
  std::string tol = "1e-100";  // stop once ||dx|| + ||F(x)|| drops below
  int max_iter = 100;
  bool allow_nonconforming_weight = false;
};

template <class S>
struct IterTrace {
  using R = typename FieldTraits<S>::Real;

  std::vector<Vector<S>> iterates;  // leading entry is x^(-1) with memory on
  bool has_memory_seed = false;
  std::vector<R> increments;  // ||x^(k+1) - x^(k)||
  std::vector<R> residuals;   // ||F(x^(k+1))||
  std::vector<std::pair<ParamValue<S>, ParamValue<S>>> params_used;
  SolveStatus status = SolveStatus::MaxIterations;
  std::string failure_reason;
  std::optional<double> acoc;

  std::size_t iterations() const { return increments.size(); }
};

namespace detail {
template <class S>
Vector<S> apply_param(const ParamValue<S>& p, const Vector<S>& v) {
  if (std::holds_alternative<S>(p)) return std::get<S>(p) * v;
  return std::get<Matrix<S>>(p) * v;
}
}  // namespace detail

// One outer iteration of the m-step scheme:
//   w = x + beta*F(x),        A = [w, x; F]
//   z_1 = x - A^{-1} F(x)
//   v = z_1 - delta*F(z_1),   T = A^{-1} [z_1, v; F]
//   z_{j+1} = z_j - H(T) A^{-1} F(z_j),   j = 1 .. m-1
// A is factored once up front and that factorization backs z_1 and every
// inner solve; the ratio T gets a factorization of its own (and so does T
// itself inside the reciprocal weight).
template <class S>
Vector<S> sw_iterate(const SystemDef<S>& F, const Vector<S>& x,
                     const ParamValue<S>& beta, const ParamValue<S>& delta,
                     const SolverConfig& cfg) {
  if (cfg.m < 1) throw InvalidArgument("step count m must be at least 1");
  if (x.dim() != F.n) throw DimensionMismatch(x.dim(), F.n);

  Vector<S> fx = F(x);
  Vector<S> w = x + detail::apply_param(beta, fx);
  Matrix<S> a = potra_dd(F, w, x);
  auto fa = lu_factor(a);
  if (fa.singular) throw SingularOperator();

  Vector<S> z = x - lu_solve(fa, fx);
  if (cfg.m == 1) return z;

  Vector<S> fz = F(z);
  // v sits at z_1 - delta*F(z_1): the error constant then carries
  // (I - delta F')(2I - delta F')^(m-2), so delta = 1/F'(alpha) raises the
  // order by one and the 2M^{-1} memory update cancels the second factor.
  Vector<S> v = z - detail::apply_param(delta, fz);
  Matrix<S> b = potra_dd(F, z, v);
  auto fa_ratio = lu_factor(a);
  Matrix<S> t = lu_solve(fa_ratio, b);
  Matrix<S> h = eval_weight<S>(cfg.weight, t);

  for (int j = 1; j < cfg.m; ++j) {
    Vector<S> y = lu_solve(fa, fz);
    z = z - h * y;
    if (j + 1 < cfg.m) fz = F(z);
  }
  return z;
}

// Self-accelerating parameters from the previous iterate: an approximation
// M of F'(x) gives beta_k = -M^{-1} and delta_k = 2 M^{-1}, sharing one LU.
template <class S>
std::pair<Matrix<S>, Matrix<S>> update_memory_params(const SystemDef<S>& F,
                                                     const Vector<S>& x_curr,
                                                     const Vector<S>& x_prev,
                                                     MemoryMode mode) {
  using FT = FieldTraits<S>;
  if (mode == MemoryMode::None)
    throw InvalidArgument("update_memory_params needs a memory mode");
  Matrix<S> m = (mode == MemoryMode::DividedDifference)
                    ? potra_dd(F, x_curr, x_prev)
                    : kurchatov_dd(F, x_curr, x_prev);
  auto f = lu_factor(m);
  if (f.singular) throw SingularOperator();
  Matrix<S> inv = lu_inverse(f);
  const unsigned bits = FT::precision(x_curr[0]);
  Matrix<S> beta = FT::from_double(-1.0, bits) * inv;
  Matrix<S> delta = FT::from_double(2.0, bits) * inv;
  return {std::move(beta), std::move(delta)};
}

// Computational order of convergence from the last three increments:
//   ln(i_k / i_{k-1}) / ln(i_{k-1} / i_{k-2}).
template <class R>
double acoc_last_three(const std::vector<R>& inc) {
  if (inc.size() < 3) throw InsufficientIterates();
  const R& a = inc[inc.size() - 3];
  const R& b = inc[inc.size() - 2];
  const R& c = inc[inc.size() - 1];
  if (real_is_zero(a) || real_is_zero(b) || real_is_zero(c)) throw ZeroIncrement();
  return real_to_double(real_log(c / b) / real_log(b / a));
}

template <class S>
double acoc(const IterTrace<S>& trace) {
  return acoc_last_three(trace.increments);
}

template <class S>
IterTrace<S> run(const SystemDef<S>& F, const Vector<S>& x0, const SolverConfig& cfg,
                 const std::optional<Vector<S>>& x_minus1 = std::nullopt) {
  using FT = FieldTraits<S>;
  using R = typename FT::Real;
  using RT = FieldTraits<R>;

  if (cfg.m < 1) throw InvalidArgument("step count m must be at least 1");
  if (cfg.max_iter < 1) throw InvalidArgument("max_iter must be at least 1");
  if (x0.dim() != F.n) throw DimensionMismatch(x0.dim(), F.n);
  if (cfg.memory == MemoryMode::None && (cfg.beta == 0.0 || cfg.delta == 0.0))
    throw InvalidArgument("beta and delta must be nonzero without memory");

  const unsigned bits = FT::precision(x0[0]);
  const R tol = RT::from_decimal(cfg.tol, bits);
  if (!(tol > RT::zero(bits))) throw InvalidArgument("tolerance must be positive");

  if (cfg.m >= 2 && !cfg.allow_nonconforming_weight) {
    ConditionReport rep = check_conditions(cfg.weight);
    bool ok = cfg.memory == MemoryMode::None ? rep.satisfies_theorem1
                                             : rep.satisfies_memory;
    if (!ok)
      throw NonconformingWeight(
          "weight '" + cfg.weight.label + "' fails the order conditions (H(I) dev " +
          std::to_string(rep.h_identity_deviation) + ", H1 " + std::to_string(rep.h1) +
          ", H2 " + std::to_string(rep.h2) + "); pass allow_nonconforming_weight to force");
  }

  IterTrace<S> trace;
  Vector<S> x = x0;
  Vector<S> x_prev = x0;
  if (cfg.memory != MemoryMode::None) {
    if (x_minus1) {
      if (x_minus1->dim() != F.n) throw DimensionMismatch(x_minus1->dim(), F.n);
      x_prev = *x_minus1;
    } else {
      const S shift = FT::from_double(0.1, bits);
      for (std::size_t i = 0; i < x_prev.dim(); ++i) x_prev[i] = x_prev[i] + shift;
    }
    trace.iterates.push_back(x_prev);
    trace.has_memory_seed = true;
  }
  trace.iterates.push_back(x0);

  // residual-only pre-check so a run started at a root converges in 0 steps
  {
    R r0 = norm2(F(x0));
    if (!real_finite(r0)) {
      trace.status = SolveStatus::Failed;
      trace.failure_reason = "non-finite residual at the initial point";
      return trace;
    }
    if (r0 < tol) {
      trace.status = SolveStatus::Converged;
      return trace;
    }
  }

  const R huge = RT::from_double(1e300, bits);
  trace.status = SolveStatus::MaxIterations;
  for (int k = 0; k < cfg.max_iter; ++k) {
    std::pair<ParamValue<S>, ParamValue<S>> params{FT::from_double(cfg.beta, bits),
                                                   FT::from_double(cfg.delta, bits)};
    try {
      if (cfg.memory != MemoryMode::None) {
        auto md = update_memory_params(F, x, x_prev, cfg.memory);
        params.first = std::move(md.first);
        params.second = std::move(md.second);
      }
      Vector<S> x_next = sw_iterate(F, x, params.first, params.second, cfg);

      R inc = norm2(x_next - x);
      R res = norm2(F(x_next));
      trace.params_used.push_back(std::move(params));
      trace.iterates.push_back(x_next);
      trace.increments.push_back(inc);
      trace.residuals.push_back(res);

      if (!real_finite(inc) || !real_finite(res) || !real_finite(norm2(x_next))) {
        trace.status = SolveStatus::Failed;
        trace.failure_reason = "non-finite iterate";
        break;
      }
      if (norm2(x_next) > huge) {
        trace.status = SolveStatus::Failed;
        trace.failure_reason = "diverged: iterate norm exceeds 1e300";
        break;
      }

      x_prev = x;
      x = std::move(x_next);
      if (inc + res < tol) {
        trace.status = SolveStatus::Converged;
        break;
      }
    } catch (const Error& e) {
      trace.status = SolveStatus::Failed;
      trace.failure_reason = e.what();
      break;
    }
  }

  // Fill the order estimate from the last three informative increments.
  // Terminal increments can sit at the rounding floor of the working
  // precision (the step after the orbit has landed); those say nothing
  // about convergence order, so trailing sub-floor entries are skipped.
  {
    std::vector<R> inc = trace.increments;
    R x_scale = norm2(x);
    R floor_rel = FT::real_two_pow(-static_cast<long>(bits) + 32, bits);
    R floor = floor_rel * (x_scale > RT::one(bits) ? x_scale : RT::one(bits));
    while (!inc.empty() && real_finite(inc.back()) && inc.back() < floor) inc.pop_back();
    if (inc.size() >= 3) {
      try {
        double v = acoc_last_three(inc);
        if (std::isfinite(v)) trace.acoc = v;
      } catch (const Error&) {
      }
    }
  }
  return trace;
}

}  // namespace steffkit
