#include "core/basins.hpp"

#include <atomic>
#include <fstream>
#include <thread>

namespace steffkit {

double BasinImage::share(int index) const {
  if (root_index.empty()) return 0.0;
  std::size_t hits = 0;
  for (int v : root_index)
    if (v == index) ++hits;
  return static_cast<double>(hits) / static_cast<double>(root_index.size());
}

std::vector<Rgb> default_palette(std::size_t num_roots) {
  static const Rgb pool[] = {
      {255, 165, 0},   // orange
      {0, 200, 0},     // green
      {160, 32, 240},  // purple
      {220, 20, 60},   // red
      {0, 255, 255},   // cyan
      {255, 255, 0},   // yellow
      {255, 0, 255},   // magenta
      {128, 128, 128}  // grey
  };
  std::vector<Rgb> pal;
  for (std::size_t i = 0; i < num_roots; ++i) pal.push_back(pool[i % 8]);
  return pal;
}

namespace {

constexpr Rgb kNoneColor{0, 0, 0};
constexpr Rgb kDivergedColor{0, 0, 255};

void validate_spec(const BasinSpec& spec) {
  if (spec.width < 1 || spec.height < 1)
    throw InvalidArgument("basin grid must be at least 1x1");
  if (!(spec.x_min < spec.x_max) || !(spec.y_min < spec.y_max))
    throw InvalidArgument("basin window is empty");
  if (!(spec.conv_tol > 0.0)) throw InvalidArgument("conv_tol must be positive");
  if (spec.max_iter < 0) throw InvalidArgument("max_iter must be nonnegative");
  if (!(spec.div_threshold > 0.0))
    throw InvalidArgument("div_threshold must be positive");
  if (spec.threads < 0) throw InvalidArgument("thread count must be nonnegative");
}

void check_weight_once(const SolverConfig& cfg, bool memory) {
  if (cfg.m < 1) throw InvalidArgument("step count m must be at least 1");
  if (cfg.m < 2 || cfg.allow_nonconforming_weight) return;
  ConditionReport rep = check_conditions(cfg.weight);
  bool ok = memory ? rep.satisfies_memory : rep.satisfies_theorem1;
  if (!ok)
    throw NonconformingWeight("weight '" + cfg.weight.label +
                              "' fails the order conditions; pass "
                              "allow_nonconforming_weight to force");
}

template <class Fn>
void for_rows(int height, int threads, Fn&& fn) {
  int t = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  if (t < 1) t = 1;
  if (t > height) t = height;
  if (t == 1) {
    for (int r = 0; r < height; ++r) fn(r);
    return;
  }
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (int w = 0; w < t; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int r = w; r < height; r += t) fn(r);
      } catch (...) {
        failed.store(true);
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failed.load()) throw Error("basin render worker failed");
}

template <class S>
int classify(const Vector<S>& x, const std::vector<Vector<S>>& roots, double tol) {
  for (std::size_t r = 0; r < roots.size(); ++r)
    if (real_to_double(norm2(x - roots[r])) < tol) return static_cast<int>(r);
  return kBasinNone;
}

template <class S>
bool all_finite(const Vector<S>& x) {
  using FT = FieldTraits<S>;
  for (std::size_t i = 0; i < x.dim(); ++i)
    if (!FT::finite(x[i])) return false;
  return true;
}

struct PixelOut {
  int root = kBasinNone;
  int iters = 0;
};

// Fixed-parameter orbit: classification runs before the first step and
// after every step, so a seed already inside a capture disk costs nothing.
template <class S>
PixelOut plain_orbit(const SystemDef<S>& F, Vector<S> x,
                     const std::vector<Vector<S>>& roots, const BasinSpec& spec,
                     const SolverConfig& cfg, const ParamValue<S>& beta,
                     const ParamValue<S>& delta) {
  for (int it = 0;; ++it) {
    if (!all_finite(x)) return {kBasinNone, it};
    int r = classify(x, roots, spec.conv_tol);
    if (r >= 0) return {r, it};
    if (it == spec.max_iter) return {kBasinNone, spec.max_iter};
    try {
      x = sw_iterate(F, x, beta, delta, cfg);
    } catch (const Error&) {
      return {kBasinNone, it};
    }
  }
}

PixelOut memory_orbit(const SystemDef<double>& F, double seed_curr, double seed_prev,
                      const std::vector<Vector<double>>& roots, const BasinSpec& spec,
                      const SolverConfig& cfg) {
  Vector<double> x(1, seed_curr);
  Vector<double> xp(1, seed_prev);
  for (int it = 0;; ++it) {
    if (!all_finite(x)) return {kBasinNone, it};
    if (std::fabs(x[0]) > spec.div_threshold) return {kBasinDiverged, it};
    int r = classify(x, roots, spec.conv_tol);
    if (r >= 0) return {r, it};
    if (it == spec.max_iter) return {kBasinNone, spec.max_iter};
    try {
      auto md = update_memory_params(F, x, xp, cfg.memory);
      Vector<double> xn =
          sw_iterate(F, x, ParamValue<double>(std::move(md.first)),
                     ParamValue<double>(std::move(md.second)), cfg);
      xp = x;
      x = std::move(xn);
    } catch (const Error&) {
      return {kBasinNone, it};
    }
  }
}

BasinImage blank_image(const BasinSpec& spec, std::size_t num_roots) {
  BasinImage img;
  img.spec = spec;
  if (img.spec.palette.empty()) img.spec.palette = default_palette(num_roots);
  img.num_roots = num_roots;
  img.root_index.assign(static_cast<std::size_t>(spec.width) * spec.height, kBasinNone);
  img.iterations.assign(static_cast<std::size_t>(spec.width) * spec.height, 0);
  return img;
}

// Pixel centers; row 0 carries the top of the window.
double pixel_x(const BasinSpec& s, int col) {
  return s.x_min + (col + 0.5) * (s.x_max - s.x_min) / s.width;
}
double pixel_y(const BasinSpec& s, int row) {
  return s.y_max - (row + 0.5) * (s.y_max - s.y_min) / s.height;
}

void require_nonzero_params(const SolverConfig& cfg) {
  if (cfg.beta == 0.0 || cfg.delta == 0.0)
    throw InvalidArgument("beta and delta must be nonzero without memory");
}

}  // namespace

BasinImage render_plain_complex(const SystemDef<std::complex<double>>& F,
                                const BasinSpec& spec, const SolverConfig& cfg) {
  using C = std::complex<double>;
  validate_spec(spec);
  if (F.n != 1) throw InvalidArgument("complex plane rendering needs a 1-d system");
  if (F.known_roots.empty()) throw InvalidArgument("basin rendering needs known roots");
  require_nonzero_params(cfg);
  check_weight_once(cfg, false);

  BasinImage img = blank_image(spec, F.known_roots.size());
  ParamValue<C> beta{C(cfg.beta, 0.0)};
  ParamValue<C> delta{C(cfg.delta, 0.0)};
  for_rows(spec.height, spec.threads, [&](int row) {
    for (int col = 0; col < spec.width; ++col) {
      Vector<C> x(1, C(pixel_x(spec, col), pixel_y(spec, row)));
      PixelOut out = plain_orbit(F, std::move(x), F.known_roots, spec, cfg, beta, delta);
      std::size_t at = static_cast<std::size_t>(row) * spec.width + col;
      img.root_index[at] = out.root;
      img.iterations[at] = out.iters;
    }
  });
  return img;
}

BasinImage render_plain_real2(const SystemDef<double>& F, const BasinSpec& spec,
                              const SolverConfig& cfg) {
  validate_spec(spec);
  if (F.n != 2) throw InvalidArgument("real plane rendering needs a 2-d system");
  if (F.known_roots.empty()) throw InvalidArgument("basin rendering needs known roots");
  require_nonzero_params(cfg);
  check_weight_once(cfg, false);

  BasinImage img = blank_image(spec, F.known_roots.size());
  ParamValue<double> beta{cfg.beta};
  ParamValue<double> delta{cfg.delta};
  for_rows(spec.height, spec.threads, [&](int row) {
    for (int col = 0; col < spec.width; ++col) {
      Vector<double> x(2, pixel_x(spec, col));
      x[1] = pixel_y(spec, row);
      PixelOut out = plain_orbit(F, std::move(x), F.known_roots, spec, cfg, beta, delta);
      std::size_t at = static_cast<std::size_t>(row) * spec.width + col;
      img.root_index[at] = out.root;
      img.iterations[at] = out.iters;
    }
  });
  return img;
}

BasinImage render_memory_real1(const SystemDef<double>& F, const BasinSpec& spec,
                               const SolverConfig& cfg) {
  validate_spec(spec);
  if (F.n != 1) throw InvalidArgument("memory plane rendering needs a 1-d real system");
  if (F.known_roots.empty()) throw InvalidArgument("basin rendering needs known roots");
  if (cfg.memory == MemoryMode::None)
    throw InvalidArgument("memory plane rendering needs a memory mode");
  check_weight_once(cfg, true);

  BasinImage img = blank_image(spec, F.known_roots.size());
  for_rows(spec.height, spec.threads, [&](int row) {
    for (int col = 0; col < spec.width; ++col) {
      // horizontal axis is x_k, vertical is x_{k-1}
      PixelOut out = memory_orbit(F, pixel_x(spec, col), pixel_y(spec, row),
                                  F.known_roots, spec, cfg);
      std::size_t at = static_cast<std::size_t>(row) * spec.width + col;
      img.root_index[at] = out.root;
      img.iterations[at] = out.iters;
    }
  });
  return img;
}

void write_ppm(const BasinImage& img, const std::string& path) {
  std::string buf = "P6\n" + std::to_string(img.spec.width) + " " +
                    std::to_string(img.spec.height) + "\n255\n";
  buf.reserve(buf.size() + img.root_index.size() * 3);
  for (int v : img.root_index) {
    Rgb c = kNoneColor;
    if (v == kBasinDiverged)
      c = kDivergedColor;
    else if (v >= 0)
      c = img.spec.palette[static_cast<std::size_t>(v) % img.spec.palette.size()];
    buf.push_back(static_cast<char>(c.r));
    buf.push_back(static_cast<char>(c.g));
    buf.push_back(static_cast<char>(c.b));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("short write to '" + path + "'");
}

void write_csv(const BasinImage& img, const std::string& path) {
  std::string buf = "row,col,root_index,iterations\n";
  for (int row = 0; row < img.spec.height; ++row)
    for (int col = 0; col < img.spec.width; ++col) {
      std::size_t at = static_cast<std::size_t>(row) * img.spec.width + col;
      buf += std::to_string(row) + ',' + std::to_string(col) + ',' +
             std::to_string(img.root_index[at]) + ',' +
             std::to_string(img.iterations[at]) + '\n';
    }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("short write to '" + path + "'");
}

}  // namespace steffkit
