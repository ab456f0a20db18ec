#include "steffkit/steffkit.h"

#include <cstdlib>
#include <cstring>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "core/basins.hpp"
#include "core/divdiff.hpp"
#include "core/efficiency.hpp"
#include "core/problems.hpp"
#include "core/solver.hpp"
#include "core/weights.hpp"

using namespace steffkit;

namespace {

thread_local std::string t_last_error;

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p) std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

sk_status fail(sk_status code, const std::string& msg) {
  t_last_error = msg;
  return code;
}

sk_status code_for(const std::exception& e) {
  if (dynamic_cast<const CoincidentComponent*>(&e)) return SK_ERR_COINCIDENT;
  if (dynamic_cast<const SingularOperator*>(&e)) return SK_ERR_SINGULAR;
  if (dynamic_cast<const NonconformingWeight*>(&e)) return SK_ERR_WEIGHT;
  if (dynamic_cast<const ParseError*>(&e)) return SK_ERR_PARSE;
  if (dynamic_cast<const ArityError*>(&e)) return SK_ERR_PARSE;
  if (dynamic_cast<const DimensionMismatch*>(&e)) return SK_ERR_DIMENSION;
  if (dynamic_cast<const IoError*>(&e)) return SK_ERR_IO;
  if (dynamic_cast<const InvalidArgument*>(&e)) return SK_ERR_ARGUMENT;
  return SK_ERR_INTERNAL;
}

template <class F>
sk_status guarded(F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return fail(code_for(e), e.what());
  }
}

WeightSpec parse_weight(const char* w) {
  std::string s = w ? w : "paper-poly";
  if (s == "paper-poly") return WeightSpec::paper_poly();
  if (s == "reciprocal") return WeightSpec::reciprocal();
  if (s.rfind("poly:", 0) == 0) {
    std::vector<double> c;
    std::string rest = s.substr(5);
    std::size_t pos = 0;
    while (pos <= rest.size()) {
      std::size_t comma = rest.find(',', pos);
      std::string tok = rest.substr(pos, comma == std::string::npos ? comma : comma - pos);
      char* end = nullptr;
      double v = std::strtod(tok.c_str(), &end);
      if (tok.empty() || end != tok.c_str() + tok.size())
        throw InvalidArgument("bad weight coefficient '" + tok + "'");
      c.push_back(v);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return WeightSpec::poly(std::move(c));
  }
  throw InvalidArgument("unknown weight '" + s +
                        "' (expect paper-poly, reciprocal, or poly:c0,c1,...)");
}

MemoryMode parse_memory(const char* m) {
  std::string s = m ? m : "none";
  if (s == "none") return MemoryMode::None;
  if (s == "divdiff") return MemoryMode::DividedDifference;
  if (s == "kurchatov") return MemoryMode::Kurchatov;
  throw InvalidArgument("unknown memory mode '" + s +
                        "' (expect none, divdiff, or kurchatov)");
}

SolverConfig to_config(const sk_solve_opts& o) {
  SolverConfig cfg;
  cfg.m = o.m;
  cfg.beta = o.beta;
  cfg.delta = o.delta;
  cfg.weight = parse_weight(o.weight);
  cfg.memory = parse_memory(o.memory);
  cfg.tol = o.tol ? o.tol : "1e-100";
  cfg.max_iter = o.max_iter;
  cfg.allow_nonconforming_weight = o.allow_nonconforming_weight != 0;
  return cfg;
}

}  // namespace

enum class ProblemKind { SineChain, CubicP1, CubicP1Real, QuadP2, Parsed };

struct sk_problem {
  ProblemKind kind;
  int n;
  bool complex_field;
  int num_roots;
  std::string name;
  std::string source;  // Parsed only
};

struct sk_trace {
  std::variant<IterTrace<BigReal>, IterTrace<BigComplex>> tr;
  int digits;
};

struct sk_basin {
  BasinImage img;
};

namespace {

template <class S>
SystemDef<S> materialize(const sk_problem& p, unsigned bits) {
  using FT = FieldTraits<S>;
  switch (p.kind) {
    case ProblemKind::SineChain:
      return sine_chain<S>(static_cast<std::size_t>(p.n), bits);
    case ProblemKind::CubicP1:
      if constexpr (FT::is_complex) return cubic_p1<S>(bits);
      break;
    case ProblemKind::CubicP1Real:
      if constexpr (!FT::is_complex) return cubic_p1_real_slice<S>(bits);
      break;
    case ProblemKind::QuadP2:
      return quad_p2<S>(bits);
    case ProblemKind::Parsed:
      return parse_system<S>(p.source, static_cast<std::size_t>(p.n));
  }
  throw InvalidArgument("problem '" + p.name + "' does not live over this field");
}

template <class S>
S parse_component(const std::string& text, unsigned bits) {
  using FT = FieldTraits<S>;
  std::size_t comma = text.find(',');
  if (comma == std::string::npos) return FT::from_decimal(text, bits);
  if constexpr (FT::is_complex) {
    using R = typename FT::Real;
    R re = FieldTraits<R>::from_decimal(text.substr(0, comma), bits);
    R im = FieldTraits<R>::from_decimal(text.substr(comma + 1), bits);
    return FT::from_parts(re, im);
  } else {
    throw InvalidArgument("complex component '" + text + "' in a real problem");
  }
}

template <class S>
Vector<S> parse_vector(const char* const* comp, std::size_t len, unsigned bits) {
  using FT = FieldTraits<S>;
  Vector<S> v(len, FT::zero(bits));
  for (std::size_t i = 0; i < len; ++i) {
    if (!comp[i]) throw InvalidArgument("null vector component");
    v[i] = parse_component<S>(comp[i], bits);
  }
  return v;
}

template <class S>
sk_trace* solve_impl(const sk_problem& p, const char* const* x0, std::size_t x0_len,
                     const char* const* x_prev, std::size_t x_prev_len,
                     const SolverConfig& cfg, unsigned bits) {
  auto sys = materialize<S>(p, bits);
  Vector<S> start = parse_vector<S>(x0, x0_len, bits);
  std::optional<Vector<S>> prev;
  if (x_prev) prev = parse_vector<S>(x_prev, x_prev_len, bits);
  IterTrace<S> tr = run(sys, start, cfg, prev);
  int digits = static_cast<int>(bits * 0.30103) + 3;
  return new sk_trace{std::move(tr), digits};
}

}  // namespace

extern "C" {

const char* sk_version(void) { return "0.1.0"; }

const char* sk_last_error(void) { return t_last_error.c_str(); }

void sk_string_free(char* s) { std::free(s); }

/* ---- problems ---------------------------------------------------------- */

sk_status sk_problem_builtin(const char* name, int n, sk_problem** out) {
  if (!name || !out) return fail(SK_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    std::string s = name;
    sk_problem p;
    p.name = s;
    if (s == "sine_chain") {
      if (n < 2) throw InvalidArgument("sine_chain needs an explicit dimension >= 2");
      p.kind = ProblemKind::SineChain;
      p.n = n;
      p.complex_field = false;
      p.num_roots = 1;
    } else if (s == "cubic_p1") {
      if (n != 0 && n != 1) throw InvalidArgument("cubic_p1 is one-dimensional");
      p.kind = ProblemKind::CubicP1;
      p.n = 1;
      p.complex_field = true;
      p.num_roots = 3;
    } else if (s == "cubic_p1_real") {
      if (n != 0 && n != 1) throw InvalidArgument("cubic_p1_real is one-dimensional");
      p.kind = ProblemKind::CubicP1Real;
      p.n = 1;
      p.complex_field = false;
      p.num_roots = 1;
    } else if (s == "quad_p2") {
      if (n != 0 && n != 2) throw InvalidArgument("quad_p2 is two-dimensional");
      p.kind = ProblemKind::QuadP2;
      p.n = 2;
      p.complex_field = false;
      p.num_roots = 4;
    } else {
      throw InvalidArgument("unknown builtin problem '" + s + "'");
    }
    *out = new sk_problem(std::move(p));
    return SK_OK;
  });
}

sk_status sk_problem_parse(const char* source, int n, sk_problem** out) {
  if (!source || !out) return fail(SK_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    if (n < 1) throw InvalidArgument("dimension must be at least 1");
    parse_expressions(source, static_cast<std::size_t>(n));  // validate now
    sk_problem p;
    p.kind = ProblemKind::Parsed;
    p.n = n;
    p.complex_field = false;
    p.num_roots = 0;
    p.name = "parsed";
    p.source = source;
    *out = new sk_problem(std::move(p));
    return SK_OK;
  });
}

int sk_problem_dim(const sk_problem* p) { return p ? p->n : 0; }

int sk_problem_is_complex(const sk_problem* p) {
  return p && p->complex_field ? 1 : 0;
}

int sk_problem_num_roots(const sk_problem* p) { return p ? p->num_roots : 0; }

const char* sk_problem_name(const sk_problem* p) { return p ? p->name.c_str() : ""; }

void sk_problem_free(sk_problem* p) { delete p; }

char* sk_problem_list(void) {
  return dup_string(
      "sine_chain|n>=2|real|1|cyclic system x_i sin(x_{i+1}) = 1\n"
      "cubic_p1|1|complex|3|(z - 1)^3 - 1 = 0\n"
      "cubic_p1_real|1|real|1|(x - 1)^3 - 1 = 0 restricted to the real line\n"
      "quad_p2|2|real|4|x^2 - 1 = 0, y^2 - 1 = 0\n");
}

/* ---- solver ------------------------------------------------------------ */

void sk_solve_opts_init(sk_solve_opts* o) {
  if (!o) return;
  o->m = 1;
  o->beta = 0.1;
  o->delta = 0.1;
  o->weight = "paper-poly";
  o->memory = "none";
  o->tol = "1e-100";
  o->max_iter = 100;
  o->precision_bits = 0;
  o->allow_nonconforming_weight = 0;
}

sk_status sk_solve(const sk_problem* p, const char* const* x0, size_t x0_len,
                   const char* const* x_prev, size_t x_prev_len,
                   const sk_solve_opts* o, sk_trace** out) {
  if (!p || !x0 || !o || !out) return fail(SK_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    if (x0_len != static_cast<size_t>(p->n))
      throw DimensionMismatch(x0_len, static_cast<std::size_t>(p->n));
    SolverConfig cfg = to_config(*o);
    if (x_prev) {
      if (cfg.memory == MemoryMode::None)
        throw InvalidArgument("a previous iterate needs a memory mode");
      if (x_prev_len != static_cast<size_t>(p->n))
        throw DimensionMismatch(x_prev_len, static_cast<std::size_t>(p->n));
    }
    unsigned bits = o->precision_bits ? o->precision_bits : 1024;
    *out = p->complex_field
               ? solve_impl<BigComplex>(*p, x0, x0_len, x_prev, x_prev_len, cfg, bits)
               : solve_impl<BigReal>(*p, x0, x0_len, x_prev, x_prev_len, cfg, bits);
    return SK_OK;
  });
}

sk_solve_status sk_trace_status(const sk_trace* t) {
  auto st = std::visit([](const auto& tr) { return tr.status; }, t->tr);
  switch (st) {
    case SolveStatus::Converged: return SK_SOLVE_CONVERGED;
    case SolveStatus::MaxIterations: return SK_SOLVE_MAX_ITERATIONS;
    default: return SK_SOLVE_FAILED;
  }
}

const char* sk_trace_failure_reason(const sk_trace* t) {
  return std::visit([](const auto& tr) { return tr.failure_reason.c_str(); }, t->tr);
}

size_t sk_trace_iterations(const sk_trace* t) {
  return std::visit([](const auto& tr) { return tr.iterations(); }, t->tr);
}

size_t sk_trace_num_iterates(const sk_trace* t) {
  return std::visit([](const auto& tr) { return tr.iterates.size(); }, t->tr);
}

int sk_trace_has_seed(const sk_trace* t) {
  return std::visit([](const auto& tr) { return tr.has_memory_seed; }, t->tr) ? 1 : 0;
}

int sk_trace_acoc(const sk_trace* t, double* out) {
  auto a = std::visit([](const auto& tr) { return tr.acoc; }, t->tr);
  if (!a.has_value()) return 0;
  if (out) *out = *a;
  return 1;
}

sk_status sk_trace_increment(const sk_trace* t, size_t k, char** out) {
  if (!t || !out) return fail(SK_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    std::string s = std::visit(
        [&](const auto& tr) {
          if (k >= tr.increments.size())
            throw InvalidArgument("iteration index out of range");
          return tr.increments[k].to_string(t->digits);
        },
        t->tr);
    *out = dup_string(s);
    return SK_OK;
  });
}

sk_status sk_trace_residual(const sk_trace* t, size_t k, char** out) {
  if (!t || !out) return fail(SK_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    std::string s = std::visit(
        [&](const auto& tr) {
          if (k >= tr.residuals.size())
            throw InvalidArgument("iteration index out of range");
          return tr.residuals[k].to_string(t->digits);
        },
        t->tr);
    *out = dup_string(s);
    return SK_OK;
  });
}

sk_status sk_trace_component(const sk_trace* t, size_t k, size_t i, char** re,
                             char** im) {
  if (!t || !re) return fail(SK_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    std::string rs, is;
    std::visit(
        [&](const auto& tr) {
          using S = typename std::decay_t<decltype(tr.iterates[0][0])>;
          using FT = FieldTraits<S>;
          if (k >= tr.iterates.size()) throw InvalidArgument("iterate index out of range");
          if (i >= tr.iterates[k].dim())
            throw InvalidArgument("component index out of range");
          const S& v = tr.iterates[k][i];
          rs = FT::re(v).to_string(t->digits);
          BigReal imag = FT::im(v);
          is = imag.is_zero() ? "0" : imag.to_string(t->digits);
        },
        t->tr);
    *re = dup_string(rs);
    if (im) *im = dup_string(is);
    return SK_OK;
  });
}

void sk_trace_free(sk_trace* t) { delete t; }

/* ---- weights ----------------------------------------------------------- */

sk_status sk_weight_check(const char* weight, unsigned bits, sk_weight_report* out) {
  if (!out) return fail(SK_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    WeightSpec w = parse_weight(weight);
    ConditionReport rep = check_conditions(w, bits ? bits : 256);
    out->identity_deviation = rep.h_identity_deviation;
    out->h1 = rep.h1;
    out->h2 = rep.h2;
    out->order_conditions = rep.satisfies_theorem1 ? 1 : 0;
    out->memory_conditions = rep.satisfies_memory ? 1 : 0;
    return SK_OK;
  });
}

/* ---- efficiency -------------------------------------------------------- */

sk_status sk_efficiency_index(long m, long n, int digits, char** out) {
  if (!out) return fail(SK_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    if (digits < 1) throw InvalidArgument("digit count must be positive");
    *out = dup_string(efficiency_index(m, n).to_string(digits));
    return SK_OK;
  });
}

sk_status sk_optimal_steps(long n, double* m_star, long* m_best) {
  return guarded([&] {
    StepChoice c = optimal_steps(n);
    if (m_star) *m_star = c.m_star;
    if (m_best) *m_best = c.m_best;
    return SK_OK;
  });
}

sk_status sk_efficiency_csv(const long* n_values, size_t count, long m_max,
                            char** out) {
  if (!n_values || !out) return fail(SK_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    if (count == 0) throw InvalidArgument("empty dimension list");
    std::vector<long> ns(n_values, n_values + count);
    *out = dup_string(efficiency_table_csv(ns, m_max));
    return SK_OK;
  });
}

/* ---- basins ------------------------------------------------------------ */

void sk_basin_opts_init(sk_basin_opts* o) {
  if (!o) return;
  BasinSpec d;
  o->x_min = d.x_min;
  o->x_max = d.x_max;
  o->y_min = d.y_min;
  o->y_max = d.y_max;
  o->width = d.width;
  o->height = d.height;
  o->max_iter = d.max_iter;
  o->conv_tol = d.conv_tol;
  o->div_threshold = d.div_threshold;
  o->memory_plane = 0;
  o->threads = 0;
}

sk_status sk_basin_render(const sk_problem* p, const sk_basin_opts* bo,
                          const sk_solve_opts* so, sk_basin** out) {
  if (!p || !bo || !so || !out) return fail(SK_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    BasinSpec spec;
    spec.x_min = bo->x_min;
    spec.x_max = bo->x_max;
    spec.y_min = bo->y_min;
    spec.y_max = bo->y_max;
    spec.width = bo->width;
    spec.height = bo->height;
    spec.max_iter = bo->max_iter;
    spec.conv_tol = bo->conv_tol;
    spec.div_threshold = bo->div_threshold;
    spec.mode = bo->memory_plane ? BasinMode::Memory : BasinMode::Plain;
    spec.threads = bo->threads;
    SolverConfig cfg = to_config(*so);

    BasinImage img;
    if (bo->memory_plane) {
      if (p->complex_field || p->n != 1)
        throw InvalidArgument("seed-pair planes need a real one-dimensional problem");
      img = render_memory_real1(materialize<double>(*p, 53), spec, cfg);
    } else if (p->complex_field && p->n == 1) {
      img = render_plain_complex(materialize<std::complex<double>>(*p, 53), spec, cfg);
    } else if (!p->complex_field && p->n == 2) {
      img = render_plain_real2(materialize<double>(*p, 53), spec, cfg);
    } else {
      throw InvalidArgument("no plane renderer for problem '" + p->name + "'");
    }
    *out = new sk_basin{std::move(img)};
    return SK_OK;
  });
}

size_t sk_basin_num_roots(const sk_basin* b) { return b ? b->img.num_roots : 0; }

double sk_basin_share(const sk_basin* b, int index) {
  return b ? b->img.share(index) : 0.0;
}

sk_status sk_basin_pixel(const sk_basin* b, int row, int col, int* out) {
  if (!b || !out) return fail(SK_ERR_ARGUMENT, "null argument");
  const BasinSpec& s = b->img.spec;
  if (row < 0 || row >= s.height || col < 0 || col >= s.width)
    return fail(SK_ERR_ARGUMENT, "pixel out of range");
  *out = b->img.root_index[static_cast<std::size_t>(row) * s.width + col];
  return SK_OK;
}

sk_status sk_basin_write_ppm(const sk_basin* b, const char* path) {
  if (!b || !path) return fail(SK_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    write_ppm(b->img, path);
    return SK_OK;
  });
}

sk_status sk_basin_write_csv(const sk_basin* b, const char* path) {
  if (!b || !path) return fail(SK_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    write_csv(b->img, path);
    return SK_OK;
  });
}

void sk_basin_free(sk_basin* b) { delete b; }

}  // extern "C"
