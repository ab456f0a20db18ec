// steffkit command-line front end.  Talks to the library strictly through the
// C API so it doubles as a smoke test for the shared-library surface.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "steffkit/steffkit.h"

using nlohmann::ordered_json;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitMaxIter = 2;
constexpr int kExitFailed = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

[[noreturn]] void bail(const std::string& msg) { throw ConfigError(msg); }

void check(sk_status st) {
  if (st != SK_OK) bail(sk_last_error());
}

std::string take(char* s) {
  std::string out = s ? s : "";
  sk_string_free(s);
  return out;
}

struct ProblemHandle {
  sk_problem* p = nullptr;
  ~ProblemHandle() { sk_problem_free(p); }
};

struct TraceHandle {
  sk_trace* t = nullptr;
  ~TraceHandle() { sk_trace_free(t); }
};

struct BasinHandle {
  sk_basin* b = nullptr;
  ~BasinHandle() { sk_basin_free(b); }
};

// Shorten a full-precision scientific string for console tables.  Plain
// truncation: these columns report magnitudes, and sub-1e-308 exponents make
// a strtod round trip impossible anyway.
std::string short_sci(const std::string& full, std::size_t digits = 4) {
  std::size_t e = full.find('e');
  if (e == std::string::npos) return full;
  std::string mant = full.substr(0, e);
  bool nonzero = false;
  for (char c : mant)
    if (c >= '1' && c <= '9') nonzero = true;
  if (!nonzero) return "0";
  std::size_t lead = (mant[0] == '-' || mant[0] == '+') ? 1 : 0;
  std::size_t keep = lead + 2 + digits;
  if (mant.size() > keep) mant.resize(keep);
  return mant + full.substr(e);
}

void print_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> w;
  for (const auto& r : rows) {
    if (w.size() < r.size()) w.resize(r.size(), 0);
    for (std::size_t i = 0; i < r.size(); ++i)
      if (r[i].size() > w[i]) w[i] = r[i].size();
  }
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t i = 0; i < r.size(); ++i) {
      line += r[i];
      if (i + 1 < r.size()) line.append(w[i] - r[i].size() + 2, ' ');
    }
    std::cout << line << "\n";
  }
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.5f", v);
  return buf;
}

/* ---- config plumbing ---------------------------------------------------- */

ordered_json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bail("cannot open config file '" + path + "'");
  try {
    return ordered_json::parse(in);
  } catch (const std::exception& e) {
    bail("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

void check_keys(const ordered_json& obj, const std::string& where,
                const std::vector<std::string>& allowed) {
  if (!obj.is_object()) bail(where + " must be a JSON object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const auto& k : allowed)
      if (item.key() == k) known = true;
    if (!known) bail("unknown key '" + item.key() + "' in " + where);
  }
}

std::string get_string(const ordered_json& v, const std::string& field) {
  if (!v.is_string()) bail("field '" + field + "' must be a string");
  return v.get<std::string>();
}

long get_long(const ordered_json& v, const std::string& field) {
  if (!v.is_number_integer()) bail("field '" + field + "' must be an integer");
  return v.get<long>();
}

double get_double(const ordered_json& v, const std::string& field) {
  if (!v.is_number()) bail("field '" + field + "' must be a number");
  return v.get<double>();
}

bool get_bool(const ordered_json& v, const std::string& field) {
  if (!v.is_boolean()) bail("field '" + field + "' must be a boolean");
  return v.get<bool>();
}

// Point components travel as decimal strings; JSON numbers are accepted and
// rendered with their shortest round-trip form.
std::string scalar_string(const ordered_json& v, const std::string& field) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return v.dump();
  bail("field '" + field + "' must hold strings or numbers");
}

std::vector<std::string> parse_point(const ordered_json& v, const std::string& field) {
  std::vector<std::string> out;
  if (v.is_array()) {
    for (const auto& c : v) out.push_back(scalar_string(c, field));
    if (out.empty()) bail("field '" + field + "' must not be empty");
  } else {
    out.push_back(scalar_string(v, field));
  }
  return out;
}

struct ProblemSel {
  std::string name;  // builtin
  std::string file;  // DSL source path
  int n = 0;         // 0 = natural dimension
};

void parse_problem_obj(const ordered_json& j, ProblemSel& sel) {
  check_keys(j, "problem", {"name", "file", "n"});
  bool has_name = j.contains("name"), has_file = j.contains("file");
  if (has_name == has_file) bail("problem needs exactly one of 'name' or 'file'");
  if (has_name) sel.name = get_string(j.at("name"), "problem.name");
  if (has_file) sel.file = get_string(j.at("file"), "problem.file");
  if (j.contains("n")) sel.n = static_cast<int>(get_long(j.at("n"), "problem.n"));
}

struct SolveSettings {
  ProblemSel prob;
  std::vector<std::string> x0, xm1;
  long m = 1;
  double beta = 0.1, delta = 0.1;
  std::string weight = "paper-poly";
  std::string memory = "none";
  std::string tol = "1e-100";
  long max_iter = 100;
  unsigned bits = 0;  // 0 = unresolved
  bool allow_nc = false;
  std::string out_csv, out_ppm;
};

// `with_method` covers solve/basin; acoc-table drives m and memory from its
// methods x m_values lists, so those keys are unknown there.
void parse_solver_obj(const ordered_json& j, SolveSettings& s, bool with_method) {
  std::vector<std::string> allowed = {"beta",     "delta",          "weight",
                                      "tol",      "max_iter",       "precision_bits",
                                      "allow_nonconforming_weight"};
  if (with_method) {
    allowed.push_back("m");
    allowed.push_back("memory");
  }
  check_keys(j, "solver", allowed);
  if (with_method) {
    if (!j.contains("m")) bail("missing required field 'm' in solver");
    s.m = get_long(j.at("m"), "solver.m");
    if (j.contains("memory")) s.memory = get_string(j.at("memory"), "solver.memory");
  }
  if (j.contains("beta")) s.beta = get_double(j.at("beta"), "solver.beta");
  if (j.contains("delta")) s.delta = get_double(j.at("delta"), "solver.delta");
  if (j.contains("weight")) s.weight = get_string(j.at("weight"), "solver.weight");
  if (j.contains("tol")) s.tol = scalar_string(j.at("tol"), "solver.tol");
  if (j.contains("max_iter")) s.max_iter = get_long(j.at("max_iter"), "solver.max_iter");
  if (j.contains("precision_bits")) {
    long b = get_long(j.at("precision_bits"), "solver.precision_bits");
    if (b < 2) bail("field 'solver.precision_bits' must be at least 2");
    s.bits = static_cast<unsigned>(b);
  }
  if (j.contains("allow_nonconforming_weight"))
    s.allow_nc = get_bool(j.at("allow_nonconforming_weight"),
                          "solver.allow_nonconforming_weight");
}

void parse_output_obj(const ordered_json& j, SolveSettings& s, bool with_ppm) {
  std::vector<std::string> allowed = {"csv"};
  if (with_ppm) allowed.push_back("ppm");
  check_keys(j, "output", allowed);
  if (j.contains("csv")) s.out_csv = get_string(j.at("csv"), "output.csv");
  if (j.contains("ppm")) s.out_ppm = get_string(j.at("ppm"), "output.ppm");
}

unsigned env_precision_bits() {
  const char* e = std::getenv("STEFFKIT_PRECISION_BITS");
  if (!e || !*e) return 0;
  char* end = nullptr;
  unsigned long v = std::strtoul(e, &end, 10);
  if (*end != '\0' || v < 2 || v > (1ul << 26))
    bail("invalid STEFFKIT_PRECISION_BITS value '" + std::string(e) + "'");
  return static_cast<unsigned>(v);
}

void resolve_bits(SolveSettings& s) {
  if (s.bits == 0) s.bits = env_precision_bits();
  if (s.bits == 0) s.bits = 1024;
}

void make_problem(const ProblemSel& sel, ProblemHandle& h) {
  if (!sel.file.empty()) {
    if (sel.n < 1) bail("problem files need an explicit dimension 'n'");
    std::ifstream in(sel.file);
    if (!in) bail("cannot open problem file '" + sel.file + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    check(sk_problem_parse(ss.str().c_str(), sel.n, &h.p));
  } else if (!sel.name.empty()) {
    check(sk_problem_builtin(sel.name.c_str(), sel.n, &h.p));
  } else {
    bail("missing required field 'problem'");
  }
}

std::vector<std::string> broadcast(std::vector<std::string> v, int dim,
                                   const std::string& what) {
  if (v.size() == 1 && dim > 1) return std::vector<std::string>(dim, v[0]);
  if (v.size() != static_cast<std::size_t>(dim))
    bail("'" + what + "' has " + std::to_string(v.size()) +
         " components but the problem dimension is " + std::to_string(dim));
  return v;
}

ordered_json dump_problem(const ProblemSel& sel, int resolved_dim) {
  ordered_json p;
  if (!sel.file.empty())
    p["file"] = sel.file;
  else
    p["name"] = sel.name;
  p["n"] = resolved_dim;
  return p;
}

ordered_json dump_solver(const SolveSettings& s, bool with_method) {
  ordered_json so;
  if (with_method) {
    so["m"] = s.m;
    so["memory"] = s.memory;
  }
  so["beta"] = s.beta;
  so["delta"] = s.delta;
  so["weight"] = s.weight;
  so["tol"] = s.tol;
  so["max_iter"] = s.max_iter;
  so["precision_bits"] = s.bits;
  so["allow_nonconforming_weight"] = s.allow_nc;
  return so;
}

/* ---- shared solve runner ------------------------------------------------- */

struct RowResult {
  std::string method;
  sk_solve_status status = SK_SOLVE_FAILED;
  std::string reason;
  std::size_t iters = 0;
  std::string inc, res;  // full-precision strings, empty for 0-step runs
  std::optional<double> acoc;
  double seconds = 0.0;
  std::vector<std::string> final_point;  // short form, re or re,im
};

const char* status_word(sk_solve_status st) {
  switch (st) {
    case SK_SOLVE_CONVERGED: return "converged";
    case SK_SOLVE_MAX_ITERATIONS: return "max_iterations";
    default: return "failed";
  }
}

RowResult run_one(sk_problem* p, const SolveSettings& s, long m,
                  const std::string& memory) {
  sk_solve_opts o;
  sk_solve_opts_init(&o);
  o.m = m;
  o.beta = s.beta;
  o.delta = s.delta;
  o.weight = s.weight.c_str();
  o.memory = memory.c_str();
  o.tol = s.tol.c_str();
  o.max_iter = s.max_iter;
  o.precision_bits = s.bits;
  o.allow_nonconforming_weight = s.allow_nc ? 1 : 0;

  std::vector<const char*> x0;
  for (const auto& c : s.x0) x0.push_back(c.c_str());
  std::vector<const char*> xm1;
  if (memory != "none")
    for (const auto& c : s.xm1) xm1.push_back(c.c_str());

  RowResult r;
  r.method = (memory == "none"     ? "SW_"
              : memory == "divdiff" ? "SWD_"
                                    : "SWK_") +
             std::to_string(m);

  auto t0 = std::chrono::steady_clock::now();
  TraceHandle tr;
  check(sk_solve(p, x0.data(), x0.size(), xm1.empty() ? nullptr : xm1.data(),
                 xm1.size(), &o, &tr.t));
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  r.status = sk_trace_status(tr.t);
  r.reason = sk_trace_failure_reason(tr.t);
  r.iters = sk_trace_iterations(tr.t);
  if (r.iters > 0) {
    char* v = nullptr;
    check(sk_trace_increment(tr.t, r.iters - 1, &v));
    r.inc = take(v);
    check(sk_trace_residual(tr.t, r.iters - 1, &v));
    r.res = take(v);
  }
  double a = 0.0;
  if (sk_trace_acoc(tr.t, &a)) r.acoc = a;

  std::size_t last = sk_trace_num_iterates(tr.t) - 1;
  for (int i = 0; i < sk_problem_dim(p); ++i) {
    char* re = nullptr;
    char* im = nullptr;
    check(sk_trace_component(tr.t, last, i, &re, &im));
    std::string comp = short_sci(take(re), 12);
    std::string imag = take(im);
    if (imag != "0") comp += "," + short_sci(imag, 12);
    r.final_point.push_back(comp);
  }
  return r;
}

const std::string kCsvHeader = "method,iterations,final_increment,final_residual,acoc,status\n";

std::string csv_row(const RowResult& r) {
  std::string acoc = r.acoc ? format_double(*r.acoc) : "";
  return r.method + ',' + std::to_string(r.iters) + ',' + r.inc + ',' + r.res +
         ',' + acoc + ',' + status_word(r.status) + '\n';
}

std::vector<std::string> console_row(const RowResult& r) {
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.2f", r.seconds);
  return {r.method,
          std::to_string(r.iters),
          r.inc.empty() ? "-" : short_sci(r.inc),
          r.res.empty() ? "-" : short_sci(r.res),
          r.acoc ? format_double(*r.acoc) : "-",
          secs,
          status_word(r.status)};
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) bail("cannot open '" + path + "' for writing");
  out << body;
  if (!out) bail("short write to '" + path + "'");
}

/* ---- subcommand state ----------------------------------------------------
   Raw flag storage; count() on the CLI11 options decides what overrides the
   config file.  Precedence: flag > config > env (precision only) > default. */

struct CommonArgs {
  std::string config_path;
  bool dump = false;
  bool paper_scale = false;
  std::string problem, problem_file;
  int n = 0;
  std::vector<std::string> x0, xm1;
  long m = 1;
  double beta = 0.1, delta = 0.1;
  std::string weight, memory, tol;
  long max_iter = 100;
  long bits = 0;
  bool allow_nc = false;
  std::string out_csv, out_ppm;
};

void add_problem_flags(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--config", a.config_path, "JSON run config");
  cmd->add_option("--problem", a.problem, "builtin problem name");
  cmd->add_option("--problem-file", a.problem_file, "file with one expression per line");
  cmd->add_option("--n", a.n, "problem dimension");
  cmd->add_flag("--dump-config", a.dump, "print the effective config as JSON and exit");
}

void add_solver_flags(CLI::App* cmd, CommonArgs& a, bool with_method) {
  if (with_method) {
    cmd->add_option("--m", a.m, "steps per iteration (order 2m)");
    cmd->add_option("--memory", a.memory, "none | divdiff | kurchatov");
  }
  cmd->add_option("--beta", a.beta, "Steffensen shift parameter");
  cmd->add_option("--delta", a.delta, "second shift parameter");
  cmd->add_option("--weight", a.weight, "paper-poly | reciprocal | poly:c0,c1,...");
  cmd->add_option("--tol", a.tol, "convergence tolerance (decimal string)");
  cmd->add_option("--max-iter", a.max_iter, "iteration cap");
  cmd->add_option("--precision-bits", a.bits, "working precision in bits");
  cmd->add_flag("--allow-nonconforming-weight", a.allow_nc,
                "run m>=2 even if the weight breaks the order conditions");
  cmd->add_flag("--paper-scale", a.paper_scale,
                "use the source experiment scale: tol 1e-300, 16610 bits");
}

// count() for options a given subcommand may not define at all.
std::size_t opt_count(const CLI::App* cmd, const std::string& name) {
  const CLI::Option* o = cmd->get_option_no_throw(name);
  return o ? o->count() : 0;
}

// Overlay explicit flags onto settings that may have come from a config file.
void overlay_flags(const CLI::App* cmd, const CommonArgs& a, SolveSettings& s,
                   bool with_method) {
  if (a.paper_scale) {
    s.tol = "1e-300";
    s.bits = 16610;
  }
  if (opt_count(cmd, "--problem")) {
    s.prob.name = a.problem;
    s.prob.file.clear();
  }
  if (opt_count(cmd, "--problem-file")) {
    s.prob.file = a.problem_file;
    s.prob.name.clear();
  }
  if (opt_count(cmd, "--n")) s.prob.n = a.n;
  if (opt_count(cmd, "--x0")) s.x0 = a.x0;
  if (opt_count(cmd, "--x-minus1")) s.xm1 = a.xm1;
  if (with_method && opt_count(cmd, "--m")) s.m = a.m;
  if (with_method && opt_count(cmd, "--memory")) s.memory = a.memory;
  if (opt_count(cmd, "--beta")) s.beta = a.beta;
  if (opt_count(cmd, "--delta")) s.delta = a.delta;
  if (opt_count(cmd, "--weight")) s.weight = a.weight;
  if (opt_count(cmd, "--tol")) s.tol = a.tol;
  if (opt_count(cmd, "--max-iter")) s.max_iter = a.max_iter;
  if (opt_count(cmd, "--precision-bits")) {
    if (a.bits < 2) bail("--precision-bits must be at least 2");
    s.bits = static_cast<unsigned>(a.bits);
  }
  if (opt_count(cmd, "--allow-nonconforming-weight")) s.allow_nc = true;
  if (opt_count(cmd, "--csv")) s.out_csv = a.out_csv;
  if (opt_count(cmd, "--ppm")) s.out_ppm = a.out_ppm;
}

/* ---- solve --------------------------------------------------------------- */

int cmd_solve(const CLI::App* cmd, const CommonArgs& a) {
  SolveSettings s;
  if (!a.config_path.empty()) {
    ordered_json j = load_json_file(a.config_path);
    check_keys(j, "config", {"problem", "x0", "x_minus1", "solver", "output"});
    if (!j.contains("problem")) bail("missing required field 'problem'");
    parse_problem_obj(j.at("problem"), s.prob);
    if (!j.contains("x0")) bail("missing required field 'x0'");
    s.x0 = parse_point(j.at("x0"), "x0");
    if (j.contains("x_minus1")) s.xm1 = parse_point(j.at("x_minus1"), "x_minus1");
    if (!j.contains("solver")) bail("missing required field 'solver'");
    parse_solver_obj(j.at("solver"), s, true);
    if (j.contains("output")) parse_output_obj(j.at("output"), s, false);
  }
  overlay_flags(cmd, a, s, true);
  if (s.x0.empty()) bail("missing required field 'x0'");
  if (!s.xm1.empty() && s.memory == "none")
    bail("'x_minus1' needs a memory mode (divdiff or kurchatov)");
  resolve_bits(s);

  ProblemHandle h;
  make_problem(s.prob, h);
  int dim = sk_problem_dim(h.p);
  s.x0 = broadcast(std::move(s.x0), dim, "x0");
  if (!s.xm1.empty()) s.xm1 = broadcast(std::move(s.xm1), dim, "x_minus1");

  if (a.dump) {
    ordered_json j;
    j["problem"] = dump_problem(s.prob, dim);
    j["x0"] = s.x0;
    if (!s.xm1.empty()) j["x_minus1"] = s.xm1;
    j["solver"] = dump_solver(s, true);
    if (!s.out_csv.empty()) j["output"] = ordered_json{{"csv", s.out_csv}};
    std::cout << j.dump(2) << "\n";
    return 0;
  }

  RowResult r = run_one(h.p, s, s.m, s.memory);
  print_table({{"method", "iterations", "final increment", "final residual", "acoc",
                "wall time (s)", "status"},
               console_row(r)});
  std::string point = "(";
  for (std::size_t i = 0; i < r.final_point.size(); ++i)
    point += (i ? ", " : "") + r.final_point[i];
  std::cout << "last iterate: " << point << ")\n";
  if (!r.reason.empty()) std::cout << "failure: " << r.reason << "\n";
  if (!s.out_csv.empty()) {
    write_file(s.out_csv, kCsvHeader + csv_row(r));
    std::cout << "wrote " << s.out_csv << "\n";
  }
  if (r.status == SK_SOLVE_CONVERGED) return 0;
  return r.status == SK_SOLVE_MAX_ITERATIONS ? kExitMaxIter : kExitFailed;
}

/* ---- acoc-table ----------------------------------------------------------- */

std::string memory_for_method(const std::string& method) {
  if (method == "SW") return "none";
  if (method == "SWD") return "divdiff";
  if (method == "SWK") return "kurchatov";
  bail("unknown method '" + method + "' (expect SW, SWD, or SWK)");
}

int cmd_acoc_table(const CLI::App* cmd, const CommonArgs& a,
                   std::vector<std::string> methods, std::vector<long> m_values) {
  SolveSettings s;
  bool cfg_methods = false, cfg_m_values = false;
  std::vector<std::string> file_methods;
  std::vector<long> file_m_values;
  if (!a.config_path.empty()) {
    ordered_json j = load_json_file(a.config_path);
    check_keys(j, "config",
               {"problem", "x0", "x_minus1", "methods", "m_values", "solver", "output"});
    if (!j.contains("problem")) bail("missing required field 'problem'");
    parse_problem_obj(j.at("problem"), s.prob);
    if (!j.contains("x0")) bail("missing required field 'x0'");
    s.x0 = parse_point(j.at("x0"), "x0");
    if (j.contains("x_minus1")) s.xm1 = parse_point(j.at("x_minus1"), "x_minus1");
    if (!j.contains("methods")) bail("missing required field 'methods'");
    for (const auto& v : j.at("methods"))
      file_methods.push_back(get_string(v, "methods"));
    cfg_methods = true;
    if (!j.contains("m_values")) bail("missing required field 'm_values'");
    for (const auto& v : j.at("m_values")) file_m_values.push_back(get_long(v, "m_values"));
    cfg_m_values = true;
    if (j.contains("solver")) parse_solver_obj(j.at("solver"), s, false);
    if (j.contains("output")) parse_output_obj(j.at("output"), s, false);
  }
  overlay_flags(cmd, a, s, false);
  if (cfg_methods && !cmd->count("--methods")) methods = file_methods;
  if (cfg_m_values && !cmd->count("--m-values")) m_values = file_m_values;
  if (s.x0.empty()) bail("missing required field 'x0'");
  if (methods.empty()) bail("missing required field 'methods'");
  if (m_values.empty()) bail("missing required field 'm_values'");
  for (const auto& meth : methods) memory_for_method(meth);  // validate early
  for (long m : m_values)
    if (m < 1) bail("m values must be positive (got " + std::to_string(m) + ")");
  resolve_bits(s);

  ProblemHandle h;
  make_problem(s.prob, h);
  int dim = sk_problem_dim(h.p);
  s.x0 = broadcast(std::move(s.x0), dim, "x0");
  if (!s.xm1.empty()) s.xm1 = broadcast(std::move(s.xm1), dim, "x_minus1");

  if (a.dump) {
    ordered_json j;
    j["problem"] = dump_problem(s.prob, dim);
    j["x0"] = s.x0;
    if (!s.xm1.empty()) j["x_minus1"] = s.xm1;
    j["methods"] = methods;
    j["m_values"] = m_values;
    j["solver"] = dump_solver(s, false);
    if (!s.out_csv.empty()) j["output"] = ordered_json{{"csv", s.out_csv}};
    std::cout << j.dump(2) << "\n";
    return 0;
  }

  std::string csv = kCsvHeader;
  std::vector<std::vector<std::string>> rows = {{"method", "iterations",
                                                 "final increment", "final residual",
                                                 "acoc", "wall time (s)", "status"}};
  std::vector<std::string> notes;
  for (const auto& meth : methods) {
    for (long m : m_values) {
      RowResult r = run_one(h.p, s, m, memory_for_method(meth));
      csv += csv_row(r);
      rows.push_back(console_row(r));
      if (!r.reason.empty()) notes.push_back(r.method + ": " + r.reason);
    }
  }
  if (s.out_csv.empty()) {
    std::cout << csv;
  } else {
    print_table(rows);
    for (const auto& n : notes) std::cout << n << "\n";
    write_file(s.out_csv, csv);
    std::cout << "wrote " << s.out_csv << "\n";
  }
  return 0;
}

/* ---- basin ---------------------------------------------------------------- */

struct BasinArgs {
  double x_min = 0, x_max = 0, y_min = 0, y_max = 0, conv_tol = 0, div_threshold = 0;
  long width = 0, height = 0, max_iter = 0, threads = 0;
  bool memory_plane = false;
};

int cmd_basin(const CLI::App* cmd, const CommonArgs& a, const BasinArgs& ba) {
  SolveSettings s;
  sk_basin_opts bo;
  sk_basin_opts_init(&bo);
  if (!a.config_path.empty()) {
    ordered_json j = load_json_file(a.config_path);
    check_keys(j, "config", {"problem", "solver", "basin", "output"});
    if (!j.contains("problem")) bail("missing required field 'problem'");
    parse_problem_obj(j.at("problem"), s.prob);
    if (!j.contains("solver")) bail("missing required field 'solver'");
    parse_solver_obj(j.at("solver"), s, true);
    if (j.contains("basin")) {
      const ordered_json& b = j.at("basin");
      check_keys(b, "basin",
                 {"x_min", "x_max", "y_min", "y_max", "width", "height", "max_iter",
                  "conv_tol", "div_threshold", "memory_plane", "threads"});
      if (b.contains("x_min")) bo.x_min = get_double(b.at("x_min"), "basin.x_min");
      if (b.contains("x_max")) bo.x_max = get_double(b.at("x_max"), "basin.x_max");
      if (b.contains("y_min")) bo.y_min = get_double(b.at("y_min"), "basin.y_min");
      if (b.contains("y_max")) bo.y_max = get_double(b.at("y_max"), "basin.y_max");
      if (b.contains("width"))
        bo.width = static_cast<int>(get_long(b.at("width"), "basin.width"));
      if (b.contains("height"))
        bo.height = static_cast<int>(get_long(b.at("height"), "basin.height"));
      if (b.contains("max_iter"))
        bo.max_iter = static_cast<int>(get_long(b.at("max_iter"), "basin.max_iter"));
      if (b.contains("conv_tol")) bo.conv_tol = get_double(b.at("conv_tol"), "basin.conv_tol");
      if (b.contains("div_threshold"))
        bo.div_threshold = get_double(b.at("div_threshold"), "basin.div_threshold");
      if (b.contains("memory_plane"))
        bo.memory_plane = get_bool(b.at("memory_plane"), "basin.memory_plane") ? 1 : 0;
      if (b.contains("threads"))
        bo.threads = static_cast<int>(get_long(b.at("threads"), "basin.threads"));
    }
    if (j.contains("output")) parse_output_obj(j.at("output"), s, true);
  }
  overlay_flags(cmd, a, s, true);
  if (cmd->count("--x-min")) bo.x_min = ba.x_min;
  if (cmd->count("--x-max")) bo.x_max = ba.x_max;
  if (cmd->count("--y-min")) bo.y_min = ba.y_min;
  if (cmd->count("--y-max")) bo.y_max = ba.y_max;
  if (cmd->count("--width")) bo.width = static_cast<int>(ba.width);
  if (cmd->count("--height")) bo.height = static_cast<int>(ba.height);
  if (cmd->count("--iterations")) bo.max_iter = static_cast<int>(ba.max_iter);
  if (cmd->count("--conv-tol")) bo.conv_tol = ba.conv_tol;
  if (cmd->count("--div-threshold")) bo.div_threshold = ba.div_threshold;
  if (cmd->count("--memory-plane")) bo.memory_plane = 1;
  if (cmd->count("--threads")) bo.threads = static_cast<int>(ba.threads);
  resolve_bits(s);

  ProblemHandle h;
  make_problem(s.prob, h);

  if (a.dump) {
    ordered_json j;
    j["problem"] = dump_problem(s.prob, sk_problem_dim(h.p));
    j["solver"] = dump_solver(s, true);
    ordered_json b;
    b["x_min"] = bo.x_min;
    b["x_max"] = bo.x_max;
    b["y_min"] = bo.y_min;
    b["y_max"] = bo.y_max;
    b["width"] = bo.width;
    b["height"] = bo.height;
    b["max_iter"] = bo.max_iter;
    b["conv_tol"] = bo.conv_tol;
    b["div_threshold"] = bo.div_threshold;
    b["memory_plane"] = bo.memory_plane != 0;
    b["threads"] = bo.threads;
    j["basin"] = b;
    ordered_json out;
    if (!s.out_ppm.empty()) out["ppm"] = s.out_ppm;
    if (!s.out_csv.empty()) out["csv"] = s.out_csv;
    if (!out.empty()) j["output"] = out;
    std::cout << j.dump(2) << "\n";
    return 0;
  }

  sk_solve_opts so;
  sk_solve_opts_init(&so);
  so.m = s.m;
  so.beta = s.beta;
  so.delta = s.delta;
  so.weight = s.weight.c_str();
  so.memory = s.memory.c_str();
  so.tol = s.tol.c_str();
  so.max_iter = s.max_iter;
  so.precision_bits = s.bits;
  so.allow_nonconforming_weight = s.allow_nc ? 1 : 0;

  auto t0 = std::chrono::steady_clock::now();
  BasinHandle b;
  check(sk_basin_render(h.p, &bo, &so, &b.b));
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  long total = static_cast<long>(bo.width) * bo.height;
  std::cout << "plane: " << bo.width << "x" << bo.height << " (" << total
            << " pixels), [" << bo.x_min << ", " << bo.x_max << "] x [" << bo.y_min
            << ", " << bo.y_max << "]\n";
  char buf[64];
  for (std::size_t r = 0; r < sk_basin_num_roots(b.b); ++r) {
    std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * sk_basin_share(b.b, static_cast<int>(r)));
    std::cout << "root " << r << ": " << buf << "\n";
  }
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * sk_basin_share(b.b, SK_BASIN_NONE));
  std::cout << "unresolved: " << buf << "\n";
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * sk_basin_share(b.b, SK_BASIN_DIVERGED));
  std::cout << "diverged: " << buf << "\n";
  std::snprintf(buf, sizeof buf, "%.2f", secs);
  std::cout << "render time: " << buf << " s\n";

  if (!s.out_ppm.empty()) {
    check(sk_basin_write_ppm(b.b, s.out_ppm.c_str()));
    std::cout << "wrote " << s.out_ppm << "\n";
  }
  if (!s.out_csv.empty()) {
    check(sk_basin_write_csv(b.b, s.out_csv.c_str()));
    std::cout << "wrote " << s.out_csv << "\n";
  }
  return 0;
}

/* ---- efficiency ------------------------------------------------------------ */

int cmd_efficiency(const CLI::App* cmd, const std::string& config_path,
                   std::vector<long> n_values, long m_max, std::string out_csv,
                   bool dump) {
  if (!config_path.empty()) {
    ordered_json j = load_json_file(config_path);
    check_keys(j, "config", {"n", "m_max", "output"});
    if (!j.contains("n")) bail("missing required field 'n'");
    std::vector<long> file_n;
    for (const auto& v : j.at("n")) file_n.push_back(get_long(v, "n"));
    if (!cmd->count("--n")) n_values = file_n;
    if (j.contains("m_max") && !cmd->count("--m-max"))
      m_max = get_long(j.at("m_max"), "m_max");
    if (j.contains("output")) {
      check_keys(j.at("output"), "output", {"csv"});
      if (j.at("output").contains("csv") && !cmd->count("--csv"))
        out_csv = get_string(j.at("output").at("csv"), "output.csv");
    }
  }
  if (n_values.empty()) bail("missing required field 'n' (at least one dimension)");
  if (m_max < 1) bail("m_max must be at least 1");

  if (dump) {
    ordered_json j;
    j["n"] = n_values;
    j["m_max"] = m_max;
    if (!out_csv.empty()) j["output"] = ordered_json{{"csv", out_csv}};
    std::cout << j.dump(2) << "\n";
    return 0;
  }

  char* raw = nullptr;
  check(sk_efficiency_csv(n_values.data(), n_values.size(), m_max, &raw));
  std::string csv = take(raw);
  if (out_csv.empty()) {
    std::cout << csv;
  } else {
    write_file(out_csv, csv);
    for (long n : n_values) {
      double m_star = 0.0;
      long m_best = 0;
      check(sk_optimal_steps(n, &m_star, &m_best));
      char buf[128];
      std::snprintf(buf, sizeof buf, "n=%ld: best m=%ld (continuous m*=%.4f)", n,
                    m_best, m_star);
      std::cout << buf << "\n";
    }
    std::cout << "wrote " << out_csv << "\n";
  }
  return 0;
}

/* ---- check-weight ----------------------------------------------------------- */

int cmd_check_weight(const std::string& weight, long bits) {
  sk_weight_report rep;
  check(sk_weight_check(weight.c_str(), static_cast<unsigned>(bits), &rep));
  char buf[256];
  std::cout << "weight: " << weight << "\n";
  std::snprintf(buf, sizeof buf, "%.3e", rep.identity_deviation);
  std::cout << "H(I) deviation from I: " << buf << "\n";
  std::snprintf(buf, sizeof buf, "%.6g", rep.h1);
  std::cout << "H1: " << buf << "\n";
  std::snprintf(buf, sizeof buf, "%.6g", rep.h2);
  std::cout << "H2: " << buf << "\n";
  std::cout << "order conditions (H(I)=I, H1=-1): "
            << (rep.order_conditions ? "satisfied" : "violated") << "\n";
  std::cout << "memory condition (H2=2): "
            << (rep.memory_conditions ? "satisfied" : "violated") << "\n";
  return 0;
}

/* ---- list-problems ----------------------------------------------------------- */

int cmd_list_problems() {
  std::string listing = take(sk_problem_list());
  std::vector<std::vector<std::string>> rows = {
      {"name", "dimension", "field", "known roots", "description"}};
  std::istringstream in(listing);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t pos = 0;
    for (int i = 0; i < 4; ++i) {
      std::size_t bar = line.find('|', pos);
      cells.push_back(line.substr(pos, bar - pos));
      pos = bar + 1;
    }
    cells.push_back(line.substr(pos));
    rows.push_back(cells);
  }
  print_table(rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"derivative-free multi-step solver toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sk_version()));

  CommonArgs sa;
  CLI::App* solve = app.add_subcommand("solve", "run one method on one problem");
  add_problem_flags(solve, sa);
  solve->add_option("--x0", sa.x0, "initial point components (one broadcasts)")
      ->expected(-1);
  solve->add_option("--x-minus1", sa.xm1, "previous iterate for memory methods")
      ->expected(-1);
  add_solver_flags(solve, sa, true);
  solve->add_option("--csv", sa.out_csv, "write the report row as CSV");

  CommonArgs ta;
  std::vector<std::string> methods{"SW", "SWD", "SWK"};
  std::vector<long> m_values{1, 2, 3};
  CLI::App* table = app.add_subcommand("acoc-table", "method x steps comparison table");
  add_problem_flags(table, ta);
  table->add_option("--x0", ta.x0, "initial point components (one broadcasts)")
      ->expected(-1);
  table->add_option("--x-minus1", ta.xm1, "previous iterate for memory methods")
      ->expected(-1);
  table->add_option("--methods", methods, "subset of SW, SWD, SWK")
      ->delimiter(',');
  table->add_option("--m-values", m_values, "step counts to run")->delimiter(',');
  add_solver_flags(table, ta, false);
  table->add_option("--csv", ta.out_csv, "write the table as CSV");

  CommonArgs ba;
  BasinArgs bargs;
  CLI::App* basin = app.add_subcommand("basin", "render a basin-of-attraction plane");
  add_problem_flags(basin, ba);
  add_solver_flags(basin, ba, true);
  basin->add_option("--x-min", bargs.x_min, "window left edge");
  basin->add_option("--x-max", bargs.x_max, "window right edge");
  basin->add_option("--y-min", bargs.y_min, "window bottom edge");
  basin->add_option("--y-max", bargs.y_max, "window top edge");
  basin->add_option("--width", bargs.width, "grid columns");
  basin->add_option("--height", bargs.height, "grid rows");
  basin->add_option("--iterations", bargs.max_iter, "iteration cap per pixel");
  basin->add_option("--conv-tol", bargs.conv_tol, "root-capture tolerance");
  basin->add_option("--div-threshold", bargs.div_threshold, "divergence cutoff");
  basin->add_flag("--memory-plane", bargs.memory_plane,
                  "seed-pair plane (x0 horizontal, x_minus1 vertical)");
  basin->add_option("--threads", bargs.threads, "worker count (0 = hardware)");
  basin->add_option("--ppm", ba.out_ppm, "write the plane as binary PPM");
  basin->add_option("--csv", ba.out_csv, "write per-pixel rows as CSV");

  std::string eff_config;
  std::vector<long> eff_n;
  long eff_m_max = 10;
  std::string eff_csv;
  bool eff_dump = false;
  CLI::App* eff = app.add_subcommand("efficiency", "efficiency-index table");
  eff->add_option("--config", eff_config, "JSON run config");
  eff->add_option("--n", eff_n, "system dimensions")->delimiter(',');
  eff->add_option("--m-max", eff_m_max, "largest step count tabulated");
  eff->add_option("--csv", eff_csv, "write the table to a file");
  eff->add_flag("--dump-config", eff_dump, "print the effective config as JSON and exit");

  std::string cw_weight;
  long cw_bits = 0;
  CLI::App* cw = app.add_subcommand("check-weight", "probe weight-function conditions");
  cw->add_option("--weight", cw_weight, "paper-poly | reciprocal | poly:c0,c1,...")
      ->required();
  cw->add_option("--bits", cw_bits, "probe precision in bits");

  CLI::App* lp = app.add_subcommand("list-problems", "describe the builtin problems");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return cmd_solve(solve, sa);
    if (*table) return cmd_acoc_table(table, ta, methods, m_values);
    if (*basin) return cmd_basin(basin, ba, bargs);
    if (*eff) return cmd_efficiency(eff, eff_config, eff_n, eff_m_max, eff_csv, eff_dump);
    if (*cw) return cmd_check_weight(cw_weight, cw_bits);
    if (*lp) return cmd_list_problems();
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
