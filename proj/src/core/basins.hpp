#pragma once

#include <complex>
#include <string>
#include <vector>

#include "core/solver.hpp"

namespace steffkit {

struct Rgb {
  unsigned char r = 0, g = 0, b = 0;
};

enum class BasinMode { Plain, Memory };

inline constexpr int kBasinNone = -1;
inline constexpr int kBasinDiverged = -2;

// Rendering window and orbit policy for one attraction plane.  Plain mode
// seeds a fixed-parameter orbit at each grid point; memory mode reads the
// point as the pair (x_k, x_{k-1}) of a one-dimensional real problem, with
// the horizontal axis carrying the current iterate.
struct BasinSpec {
  double x_min = -3.0, x_max = 3.0;
  double y_min = -3.0, y_max = 3.0;
  int width = 400, height = 400;
  int max_iter = 80;             // 500 is the customary memory-mode budget
  double conv_tol = 1e-3;
  double div_threshold = 1e150;  // memory mode only
  BasinMode mode = BasinMode::Plain;
  std::vector<Rgb> palette;      // per-root colors; filled by the renderer if empty
  int threads = 0;               // 0 = hardware concurrency
};

struct BasinImage {
  BasinSpec spec;
  std::size_t num_roots = 0;
  std::vector<int> root_index;  // row-major, kBasinNone / kBasinDiverged markers
  std::vector<int> iterations;

  double share(int index) const;
};

std::vector<Rgb> default_palette(std::size_t num_roots);

// Orbits run in machine precision.  The weight is checked for conformance
// once per plane, never per pixel.
BasinImage render_plain_complex(const SystemDef<std::complex<double>>& F,
                                const BasinSpec& spec, const SolverConfig& cfg);
BasinImage render_plain_real2(const SystemDef<double>& F, const BasinSpec& spec,
                              const SolverConfig& cfg);
BasinImage render_memory_real1(const SystemDef<double>& F, const BasinSpec& spec,
                               const SolverConfig& cfg);

// Binary PPM (P6); root colors from the palette, black for unresolved
// pixels, blue for diverged ones.
void write_ppm(const BasinImage& img, const std::string& path);

// CSV rows row,col,root_index,iterations in row-major order.
void write_csv(const BasinImage& img, const std::string& path);

}  // namespace steffkit
