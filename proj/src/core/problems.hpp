#pragma once

#include <cstdlib>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "core/linalg.hpp"

namespace steffkit {

// A square nonlinear system F: K^n -> K^n together with whatever roots are
// known in closed form (used by tests and by basin classification).
template <class S>
struct SystemDef {
  std::string name;
  std::size_t n = 0;
  std::function<Vector<S>(const Vector<S>&)> eval;
  std::vector<Vector<S>> known_roots;

  Vector<S> operator()(const Vector<S>& x) const {
    if (x.dim() != n) throw DimensionMismatch(x.dim(), n);
    return eval(x);
  }
};

// ---- expression AST ------------------------------------------------------

enum class NodeKind {
  Constant,
  Var,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Neg,
  Sin,
  Cos,
  Exp,
  Ln,
};

struct ExprNode {
  NodeKind kind;
  std::string literal;        // Constant: source text, kept verbatim
  std::size_t var_index = 0;  // Var: zero-based
  std::unique_ptr<ExprNode> a;
  std::unique_ptr<ExprNode> b;
};
using ExprPtr = std::unique_ptr<ExprNode>;

// One expression per non-blank line; '#' starts a comment.  Throws
// ParseError / UnknownVariable on bad input and ArityError when the number
// of expressions differs from n.
std::vector<ExprPtr> parse_expressions(std::string_view source, std::size_t n);

// Canonical text form; reparsing it yields a structurally identical tree.
std::string pretty_print(const ExprNode& node);

bool ast_equal(const ExprNode& x, const ExprNode& y);

namespace detail {
// A pow with an integral literal exponent of modest size is computed by
// repeated squaring instead of the transcendental pow.
bool integral_literal(const std::string& text, long* out);
}

template <class S>
S eval_node(const ExprNode& node, const Vector<S>& x) {
  using FT = FieldTraits<S>;
  const unsigned bits = FT::precision(x[0]);
  switch (node.kind) {
    case NodeKind::Constant:
      return FT::from_decimal(node.literal, bits);
    case NodeKind::Var:
      return x[node.var_index];
    case NodeKind::Add:
      return eval_node(*node.a, x) + eval_node(*node.b, x);
    case NodeKind::Sub:
      return eval_node(*node.a, x) - eval_node(*node.b, x);
    case NodeKind::Mul:
      return eval_node(*node.a, x) * eval_node(*node.b, x);
    case NodeKind::Div:
      return eval_node(*node.a, x) / eval_node(*node.b, x);
    case NodeKind::Pow: {
      long k = 0;
      if (node.b->kind == NodeKind::Constant &&
          detail::integral_literal(node.b->literal, &k))
        return ipow(eval_node(*node.a, x), k, FT::one(bits));
      return FT::pow_(eval_node(*node.a, x), eval_node(*node.b, x));
    }
    case NodeKind::Neg:
      return -eval_node(*node.a, x);
    case NodeKind::Sin:
      return FT::sin(eval_node(*node.a, x));
    case NodeKind::Cos:
      return FT::cos(eval_node(*node.a, x));
    case NodeKind::Exp:
      return FT::exp(eval_node(*node.a, x));
    case NodeKind::Ln:
      return FT::log(eval_node(*node.a, x));
  }
  throw Error("unreachable expression node");
}

template <class S>
SystemDef<S> parse_system(std::string_view source, std::size_t n) {
  auto exprs = std::make_shared<std::vector<ExprPtr>>(parse_expressions(source, n));
  SystemDef<S> def;
  def.name = "parsed";
  def.n = n;
  def.eval = [exprs, n](const Vector<S>& x) {
    using FT = FieldTraits<S>;
    Vector<S> out(n, FT::zero(FT::precision(x[0])));
    for (std::size_t i = 0; i < n; ++i) out[i] = eval_node<S>(*(*exprs)[i], x);
    return out;
  };
  return def;
}

// ---- built-in systems ----------------------------------------------------

// Positive solution of r*sin(r) = 1, bisected to full working precision.
template <class R>
R sine_chain_root(unsigned bits) {
  using FT = FieldTraits<R>;
  R lo = FT::from_double(1.0, bits);
  R hi = FT::from_double(1.2, bits);
  const unsigned steps = (FT::is_machine ? 64u : bits + 8u);
  for (unsigned i = 0; i < steps; ++i) {
    R mid = (lo + hi) / 2.0;
    R g = mid * FT::sin(mid) - FT::one(bits);
    if (g > FT::zero(bits))
      hi = mid;
    else
      lo = mid;
  }
  return (lo + hi) / 2.0;
}

// F_i(x) = x_i * sin(x_{i+1}) - 1 with the index wrapping at the end.
template <class S>
SystemDef<S> sine_chain(std::size_t n, unsigned bits) {
  using FT = FieldTraits<S>;
  if (n < 2) throw InvalidArgument("sine_chain needs dimension >= 2");
  SystemDef<S> def;
  def.name = "sine_chain";
  def.n = n;
  def.eval = [n](const Vector<S>& x) {
    using T = FieldTraits<S>;
    const unsigned b = T::precision(x[0]);
    Vector<S> out(n, T::zero(b));
    for (std::size_t i = 0; i < n; ++i)
      out[i] = x[i] * T::sin(x[(i + 1) % n]) - T::one(b);
    return out;
  };
  auto r = sine_chain_root<typename FT::Real>(bits);
  def.known_roots.push_back(Vector<S>(n, FT::from_real(r)));
  return def;
}

// p1(z) = (z - 1)^3 - 1 over the complex field.
template <class S>
SystemDef<S> cubic_p1(unsigned bits) {
  using FT = FieldTraits<S>;
  static_assert(FT::is_complex, "cubic_p1 lives over the complex field");
  SystemDef<S> def;
  def.name = "cubic_p1";
  def.n = 1;
  def.eval = [](const Vector<S>& x) {
    using T = FieldTraits<S>;
    const unsigned b = T::precision(x[0]);
    S one = T::one(b);
    Vector<S> out(1, ipow(x[0] - one, 3l, one) - one);
    return out;
  };
  using R = typename FT::Real;
  using RT = FieldTraits<R>;
  R half = RT::from_double(0.5, bits);
  R s3h = RT::sqrt_(RT::from_double(3.0, bits)) / 2.0;
  def.known_roots.push_back(Vector<S>(1, FT::from_double(2.0, bits)));
  def.known_roots.push_back(Vector<S>(1, FT::from_parts(half, RT::zero(bits) - s3h)));
  def.known_roots.push_back(Vector<S>(1, FT::from_parts(half, s3h)));
  return def;
}

// The same polynomial restricted to the real line; only the real root 2
// survives.  Used by the with-memory basin planes.
template <class S>
SystemDef<S> cubic_p1_real_slice(unsigned bits) {
  using FT = FieldTraits<S>;
  static_assert(!FT::is_complex, "real slice of p1 lives over the real field");
  SystemDef<S> def;
  def.name = "cubic_p1";
  def.n = 1;
  def.eval = [](const Vector<S>& x) {
    using T = FieldTraits<S>;
    const unsigned b = T::precision(x[0]);
    S one = T::one(b);
    Vector<S> out(1, ipow(x[0] - one, 3l, one) - one);
    return out;
  };
  def.known_roots.push_back(Vector<S>(1, FT::from_double(2.0, bits)));
  return def;
}

// p2(x, y) = (x^2 - 1, y^2 - 1), four roots at (+-1, +-1).
template <class S>
SystemDef<S> quad_p2(unsigned bits) {
  using FT = FieldTraits<S>;
  SystemDef<S> def;
  def.name = "quad_p2";
  def.n = 2;
  def.eval = [](const Vector<S>& x) {
    using T = FieldTraits<S>;
    const unsigned b = T::precision(x[0]);
    S one = T::one(b);
    Vector<S> out(2, T::zero(b));
    out[0] = ipow(x[0], 2l, one) - one;
    out[1] = ipow(x[1], 2l, one) - one;
    return out;
  };
  auto mk = [&](double a, double b2) {
    Vector<S> r(2, FT::from_double(a, bits));
    r[1] = FT::from_double(b2, bits);
    return r;
  };
  def.known_roots.push_back(mk(1.0, 1.0));
  def.known_roots.push_back(mk(1.0, -1.0));
  def.known_roots.push_back(mk(-1.0, 1.0));
  def.known_roots.push_back(mk(-1.0, -1.0));
  return def;
}

}  // namespace steffkit
