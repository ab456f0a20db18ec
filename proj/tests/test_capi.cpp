#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "steffkit/steffkit.h"

namespace {

// Owning wrappers so failed CHECKs cannot leak handles.
struct Problem {
  sk_problem* p = nullptr;
  ~Problem() { sk_problem_free(p); }
};

struct TraceHandle {
  sk_trace* t = nullptr;
  ~TraceHandle() { sk_trace_free(t); }
};

struct BasinHandle {
  sk_basin* b = nullptr;
  ~BasinHandle() { sk_basin_free(b); }
};

std::string take(char* s) {
  REQUIRE(s != nullptr);
  std::string out(s);
  sk_string_free(s);
  return out;
}

double take_double(char* s) { return std::strtod(take(s).c_str(), nullptr); }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempPath {
  std::string path;
  explicit TempPath(const std::string& name) : path("capi_test_" + name) {}
  ~TempPath() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("version and error plumbing") {
  CHECK(sk_version() != nullptr);
  CHECK(sk_last_error() != nullptr);  // never NULL, even before any failure
  sk_problem* p = nullptr;
  CHECK(sk_problem_builtin("no_such_problem", 0, &p) == SK_ERR_ARGUMENT);
  CHECK(std::strstr(sk_last_error(), "no_such_problem") != nullptr);
  CHECK(p == nullptr);
}

TEST_CASE("builtin problem metadata") {
  struct Row {
    const char* name;
    int n, dim, complex_field, roots;
  };
  const Row rows[] = {
      {"sine_chain", 7, 7, 0, 1},
      {"cubic_p1", 0, 1, 1, 3},
      {"cubic_p1_real", 1, 1, 0, 1},
      {"quad_p2", 0, 2, 0, 4},
  };
  for (const Row& r : rows) {
    CAPTURE(r.name);
    Problem h;
    REQUIRE(sk_problem_builtin(r.name, r.n, &h.p) == SK_OK);
    CHECK(sk_problem_dim(h.p) == r.dim);
    CHECK(sk_problem_is_complex(h.p) == r.complex_field);
    CHECK(sk_problem_num_roots(h.p) == r.roots);
    CHECK(std::string(sk_problem_name(h.p)) == r.name);
  }
  sk_problem* p = nullptr;
  CHECK(sk_problem_builtin("sine_chain", 1, &p) == SK_ERR_ARGUMENT);
  CHECK(sk_problem_builtin("quad_p2", 3, &p) == SK_ERR_ARGUMENT);
  CHECK(sk_problem_builtin(nullptr, 0, &p) == SK_ERR_ARGUMENT);

  std::string listing = take(sk_problem_list());
  CHECK(listing.find("sine_chain|n>=2|real|1|") != std::string::npos);
  CHECK(listing.find("cubic_p1|1|complex|3|") != std::string::npos);
}

TEST_CASE("parsed problems validate their source up front") {
  Problem ok;
  REQUIRE(sk_problem_parse("x1^2 - 1\nx1*x2 # product row", 2, &ok.p) == SK_OK);
  CHECK(sk_problem_dim(ok.p) == 2);
  CHECK(sk_problem_is_complex(ok.p) == 0);
  CHECK(sk_problem_num_roots(ok.p) == 0);

  sk_problem* p = nullptr;
  CHECK(sk_problem_parse("x1 +", 1, &p) == SK_ERR_PARSE);
  CHECK(std::strstr(sk_last_error(), "line") != nullptr);
  CHECK(sk_problem_parse("x1\nx1", 1, &p) == SK_ERR_PARSE);  // arity
  CHECK(sk_problem_parse("x3", 2, &p) == SK_ERR_PARSE);      // unknown variable
  CHECK(sk_problem_parse("x1", 0, &p) == SK_ERR_ARGUMENT);
}

TEST_CASE("solve on the sine chain converges and exposes the trace") {
  Problem h;
  REQUIRE(sk_problem_builtin("sine_chain", 3, &h.p) == SK_OK);
  sk_solve_opts o;
  sk_solve_opts_init(&o);
  o.m = 2;
  o.tol = "1e-60";
  o.precision_bits = 1024;
  const char* x0[] = {"1.3", "1.3", "1.3"};
  TraceHandle tr;
  REQUIRE(sk_solve(h.p, x0, 3, nullptr, 0, &o, &tr.t) == SK_OK);

  CHECK(sk_trace_status(tr.t) == SK_SOLVE_CONVERGED);
  CHECK(std::string(sk_trace_failure_reason(tr.t)).empty());
  CHECK(sk_trace_has_seed(tr.t) == 0);
  size_t iters = sk_trace_iterations(tr.t);
  REQUIRE(iters >= 2);
  CHECK(sk_trace_num_iterates(tr.t) == iters + 1);

  double acoc = 0.0;
  REQUIRE(sk_trace_acoc(tr.t, &acoc) == 1);
  CHECK(acoc == doctest::Approx(4.0).epsilon(0.05));

  char* s = nullptr;
  REQUIRE(sk_trace_increment(tr.t, iters - 1, &s) == SK_OK);
  double last_inc = take_double(s);
  CHECK(last_inc < 1e-20);
  REQUIRE(sk_trace_residual(tr.t, iters - 1, &s) == SK_OK);
  CHECK(take_double(s) < 1e-20);

  char* re = nullptr;
  char* im = nullptr;
  REQUIRE(sk_trace_component(tr.t, iters, 0, &re, &im) == SK_OK);
  CHECK(take_double(re) == doctest::Approx(1.1141571408719302).epsilon(1e-12));
  CHECK(take(im) == "0");

  CHECK(sk_trace_increment(tr.t, iters, &s) == SK_ERR_ARGUMENT);
  CHECK(sk_trace_component(tr.t, iters + 1, 0, &re, nullptr) == SK_ERR_ARGUMENT);
  CHECK(sk_trace_component(tr.t, 0, 3, &re, nullptr) == SK_ERR_ARGUMENT);
}

TEST_CASE("memory runs accept an explicit previous iterate") {
  Problem h;
  REQUIRE(sk_problem_parse("x1^2 - 1", 1, &h.p) == SK_OK);
  sk_solve_opts o;
  sk_solve_opts_init(&o);
  o.memory = "kurchatov";
  o.tol = "1e-30";
  o.precision_bits = 256;
  const char* x0[] = {"2.0"};
  const char* xm1[] = {"3.0"};
  TraceHandle tr;
  REQUIRE(sk_solve(h.p, x0, 1, xm1, 1, &o, &tr.t) == SK_OK);
  CHECK(sk_trace_status(tr.t) == SK_SOLVE_CONVERGED);
  CHECK(sk_trace_has_seed(tr.t) == 1);
  char* re = nullptr;
  REQUIRE(sk_trace_component(tr.t, 0, 0, &re, nullptr) == SK_OK);
  CHECK(take_double(re) == doctest::Approx(3.0));  // seed is stored first

  // Without a memory mode the extra iterate is rejected.
  sk_solve_opts plain;
  sk_solve_opts_init(&plain);
  sk_trace* t2 = nullptr;
  CHECK(sk_solve(h.p, x0, 1, xm1, 1, &plain, &t2) == SK_ERR_ARGUMENT);

  // Wrong lengths are dimension errors.
  CHECK(sk_solve(h.p, x0, 2, nullptr, 0, &plain, &t2) == SK_ERR_DIMENSION);
}

TEST_CASE("complex problems take re,im components") {
  Problem h;
  REQUIRE(sk_problem_builtin("cubic_p1", 0, &h.p) == SK_OK);
  sk_solve_opts o;
  sk_solve_opts_init(&o);
  o.m = 2;
  o.tol = "1e-60";
  o.precision_bits = 1024;
  const char* x0[] = {"0.6,-0.9"};
  TraceHandle tr;
  REQUIRE(sk_solve(h.p, x0, 1, nullptr, 0, &o, &tr.t) == SK_OK);
  REQUIRE(sk_trace_status(tr.t) == SK_SOLVE_CONVERGED);
  char* re = nullptr;
  char* im = nullptr;
  REQUIRE(sk_trace_component(tr.t, sk_trace_num_iterates(tr.t) - 1, 0, &re, &im) == SK_OK);
  CHECK(take_double(re) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(take_double(im) == doctest::Approx(-std::sqrt(3.0) / 2.0).epsilon(1e-10));

  // A complex component in a real problem is rejected.
  Problem r;
  REQUIRE(sk_problem_builtin("sine_chain", 2, &r.p) == SK_OK);
  const char* bad[] = {"1.0,2.0", "1.0"};
  sk_trace* t2 = nullptr;
  CHECK(sk_solve(r.p, bad, 2, nullptr, 0, &o, &t2) == SK_ERR_ARGUMENT);
}

TEST_CASE("solver failures still hand back the trace") {
  Problem h;
  REQUIRE(sk_problem_parse("x1^2 - 1", 1, &h.p) == SK_OK);
  sk_solve_opts o;
  sk_solve_opts_init(&o);
  o.tol = "1e-250";  // unreachable at 256 bits
  o.precision_bits = 256;
  const char* x0[] = {"1.3"};
  TraceHandle tr;
  REQUIRE(sk_solve(h.p, x0, 1, nullptr, 0, &o, &tr.t) == SK_OK);
  CHECK(sk_trace_status(tr.t) == SK_SOLVE_FAILED);
  CHECK(std::string(sk_trace_failure_reason(tr.t)).find("coincide") != std::string::npos);
  CHECK(sk_trace_iterations(tr.t) >= 3);
}

TEST_CASE("config errors carry argument and weight codes") {
  Problem h;
  REQUIRE(sk_problem_builtin("sine_chain", 2, &h.p) == SK_OK);
  const char* x0[] = {"1.3", "1.3"};
  sk_trace* t = nullptr;

  sk_solve_opts o;
  sk_solve_opts_init(&o);
  o.m = 0;
  CHECK(sk_solve(h.p, x0, 2, nullptr, 0, &o, &t) == SK_ERR_ARGUMENT);

  sk_solve_opts_init(&o);
  o.weight = "poly:1,1";  // H1 = +1 breaks the order conditions
  o.m = 2;
  o.precision_bits = 256;
  CHECK(sk_solve(h.p, x0, 2, nullptr, 0, &o, &t) == SK_ERR_WEIGHT);

  sk_solve_opts_init(&o);
  o.weight = "bogus";
  CHECK(sk_solve(h.p, x0, 2, nullptr, 0, &o, &t) == SK_ERR_ARGUMENT);

  sk_solve_opts_init(&o);
  o.memory = "bogus";
  CHECK(sk_solve(h.p, x0, 2, nullptr, 0, &o, &t) == SK_ERR_ARGUMENT);

  sk_solve_opts_init(&o);
  o.tol = "minus three";
  CHECK(sk_solve(h.p, x0, 2, nullptr, 0, &o, &t) == SK_ERR_ARGUMENT);

  const char* garbled[] = {"1.x", "1.3"};
  sk_solve_opts_init(&o);
  CHECK(sk_solve(h.p, garbled, 2, nullptr, 0, &o, &t) == SK_ERR_ARGUMENT);
}

TEST_CASE("weight conformance probe") {
  sk_weight_report rep;
  REQUIRE(sk_weight_check("paper-poly", 0, &rep) == SK_OK);
  CHECK(rep.order_conditions == 1);
  CHECK(rep.memory_conditions == 1);
  CHECK(rep.h1 == doctest::Approx(-1.0).epsilon(1e-3));
  CHECK(rep.h2 == doctest::Approx(2.0).epsilon(1e-2));

  REQUIRE(sk_weight_check("reciprocal", 0, &rep) == SK_OK);
  CHECK(rep.order_conditions == 1);
  CHECK(rep.memory_conditions == 1);

  REQUIRE(sk_weight_check("poly:1,-1", 0, &rep) == SK_OK);
  CHECK(rep.order_conditions == 1);
  CHECK(rep.memory_conditions == 0);  // H2 = 0 misses the sharpened constant

  REQUIRE(sk_weight_check("poly:1,1", 0, &rep) == SK_OK);
  CHECK(rep.order_conditions == 0);

  CHECK(sk_weight_check("poly:", 0, &rep) == SK_ERR_ARGUMENT);
  CHECK(sk_weight_check("nope", 0, &rep) == SK_ERR_ARGUMENT);
}

TEST_CASE("efficiency surface") {
  char* s = nullptr;
  REQUIRE(sk_efficiency_index(1, 1, 12, &s) == SK_OK);
  CHECK(take_double(s) == doctest::Approx(2.0));
  REQUIRE(sk_efficiency_index(2, 10, 12, &s) == SK_OK);
  CHECK(take_double(s) == doctest::Approx(std::pow(4.0, 1.0 / 200.0)).epsilon(1e-10));
  CHECK(sk_efficiency_index(0, 5, 12, &s) == SK_ERR_ARGUMENT);
  CHECK(sk_efficiency_index(1, 5, 0, &s) == SK_ERR_ARGUMENT);

  double m_star = 0.0;
  long m_best = 0;
  REQUIRE(sk_optimal_steps(1, &m_star, &m_best) == SK_OK);
  CHECK(m_best == 1);
  CHECK(m_star == doctest::Approx(1.0));
  REQUIRE(sk_optimal_steps(100, &m_star, &m_best) == SK_OK);
  CHECK(m_best >= 2);

  const long ns[] = {2, 5};
  REQUIRE(sk_efficiency_csv(ns, 2, 3, &s) == SK_OK);
  std::string csv = take(s);
  CHECK(csv.rfind("n,m,evals,index,is_best\n", 0) == 0);
  CHECK(csv.find("\n2,1,4,") != std::string::npos);
  CHECK(sk_efficiency_csv(ns, 0, 3, &s) == SK_ERR_ARGUMENT);
}

TEST_CASE("basin rendering through the C surface") {
  Problem h;
  REQUIRE(sk_problem_builtin("cubic_p1", 0, &h.p) == SK_OK);
  sk_basin_opts bo;
  sk_basin_opts_init(&bo);
  CHECK(bo.width == 400);
  CHECK(bo.max_iter == 80);
  bo.width = 24;
  bo.height = 24;
  bo.threads = 1;
  sk_solve_opts so;
  sk_solve_opts_init(&so);

  BasinHandle b;
  REQUIRE(sk_basin_render(h.p, &bo, &so, &b.b) == SK_OK);
  CHECK(sk_basin_num_roots(b.b) == 3);
  double total = 0.0;
  for (int r = 0; r < 3; ++r) {
    CHECK(sk_basin_share(b.b, r) > 0.0);
    total += sk_basin_share(b.b, r);
  }
  total += sk_basin_share(b.b, SK_BASIN_NONE) + sk_basin_share(b.b, SK_BASIN_DIVERGED);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  int px = 0;
  REQUIRE(sk_basin_pixel(b.b, 0, 0, &px) == SK_OK);
  CHECK(px >= SK_BASIN_DIVERGED);
  CHECK(sk_basin_pixel(b.b, 24, 0, &px) == SK_ERR_ARGUMENT);

  TempPath ppm("plane.ppm"), csv("plane.csv");
  REQUIRE(sk_basin_write_ppm(b.b, ppm.path.c_str()) == SK_OK);
  REQUIRE(sk_basin_write_csv(b.b, csv.path.c_str()) == SK_OK);
  CHECK(slurp(ppm.path).rfind("P6\n24 24\n255\n", 0) == 0);
  CHECK(slurp(csv.path).rfind("row,col,root_index,iterations\n", 0) == 0);
}

TEST_CASE("seed-pair planes demand the right problem shape") {
  sk_basin_opts bo;
  sk_basin_opts_init(&bo);
  bo.width = 8;
  bo.height = 8;
  bo.memory_plane = 1;
  bo.max_iter = 60;
  sk_solve_opts so;
  sk_solve_opts_init(&so);
  so.memory = "kurchatov";

  Problem slice;
  REQUIRE(sk_problem_builtin("cubic_p1_real", 0, &slice.p) == SK_OK);
  BasinHandle b;
  REQUIRE(sk_basin_render(slice.p, &bo, &so, &b.b) == SK_OK);
  CHECK(sk_basin_num_roots(b.b) == 1);
  CHECK(sk_basin_share(b.b, 0) > 0.0);

  Problem quad;
  REQUIRE(sk_problem_builtin("quad_p2", 0, &quad.p) == SK_OK);
  sk_basin* nope = nullptr;
  CHECK(sk_basin_render(quad.p, &bo, &so, &nope) == SK_ERR_ARGUMENT);

  // Memory planes without solver memory are invalid downstream too.
  sk_solve_opts plain;
  sk_solve_opts_init(&plain);
  CHECK(sk_basin_render(slice.p, &bo, &plain, &nope) == SK_ERR_ARGUMENT);

  // A parsed problem has no known roots to classify against.
  Problem parsed;
  REQUIRE(sk_problem_parse("x1^2 - 1", 1, &parsed.p) == SK_OK);
  CHECK(sk_basin_render(parsed.p, &bo, &so, &nope) == SK_ERR_ARGUMENT);
}
