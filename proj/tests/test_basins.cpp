#include <doctest.h>

#include <complex>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "core/basins.hpp"

using namespace steffkit;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempPath {
  std::string path;
  explicit TempPath(const std::string& name) : path("basin_test_" + name) {}
  ~TempPath() { std::remove(path.c_str()); }
};

BasinSpec small_spec(int w, int h) {
  BasinSpec s;
  s.width = w;
  s.height = h;
  return s;
}

}  // namespace

TEST_CASE("default palette leads with the documented colors") {
  auto pal = default_palette(4);
  REQUIRE(pal.size() == 4);
  CHECK(pal[0].r == 255);
  CHECK(pal[0].g == 165);
  CHECK(pal[0].b == 0);  // orange
  CHECK(pal[1].g == 200);   // green
  CHECK(pal[2].r == 160);   // purple
  CHECK(pal[2].b == 240);
  CHECK(pal[3].r == 220);   // red
  CHECK(pal[3].g == 20);
  // Indices wrap for an absurd number of roots.
  auto big = default_palette(10);
  CHECK(big[8].r == big[0].r);
}

TEST_CASE("ppm bytes for single pixel images") {
  BasinImage img;
  img.spec.width = 1;
  img.spec.height = 1;
  img.spec.palette = {Rgb{255, 165, 0}};
  img.num_roots = 1;
  img.iterations = {0};

  TempPath tmp("pixel.ppm");
  SUBCASE("root pixel uses the palette") {
    img.root_index = {0};
    write_ppm(img, tmp.path);
    std::string bytes = slurp(tmp.path);
    CHECK(bytes == std::string("P6\n1 1\n255\n\xFF\xA5\x00", 14));
  }
  SUBCASE("unresolved pixel is black") {
    img.root_index = {kBasinNone};
    write_ppm(img, tmp.path);
    std::string bytes = slurp(tmp.path);
    CHECK(bytes.substr(11) == std::string("\x00\x00\x00", 3));
  }
  SUBCASE("diverged pixel is blue") {
    img.root_index = {kBasinDiverged};
    write_ppm(img, tmp.path);
    std::string bytes = slurp(tmp.path);
    CHECK(bytes.substr(11) == std::string("\x00\x00\xFF", 3));
  }
}

TEST_CASE("csv layout is row major with a header") {
  BasinImage img;
  img.spec.width = 2;
  img.spec.height = 2;
  img.num_roots = 1;
  img.root_index = {0, kBasinNone, kBasinDiverged, 0};
  img.iterations = {1, 80, 3, 0};
  TempPath tmp("grid.csv");
  write_csv(img, tmp.path);
  CHECK(slurp(tmp.path) ==
        "row,col,root_index,iterations\n"
        "0,0,0,1\n"
        "0,1,-1,80\n"
        "1,0,-2,3\n"
        "1,1,0,0\n");
}

TEST_CASE("complex cubic plane finds all three basins") {
  auto sys = cubic_p1<std::complex<double>>(53);
  SolverConfig cfg;  // SW_1 with beta 0.1
  BasinSpec spec = small_spec(60, 60);
  spec.threads = 1;
  BasinImage img = render_plain_complex(sys, spec, cfg);

  for (std::size_t r = 0; r < 3; ++r) CHECK(img.share(static_cast<int>(r)) > 0.0);
  double total = img.share(0) + img.share(1) + img.share(2) + img.share(kBasinNone) +
                 img.share(kBasinDiverged);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  // The pixel nearest each root belongs to that root almost immediately.
  auto nearest_pixel = [&](std::complex<double> z) {
    double dx = (spec.x_max - spec.x_min) / spec.width;
    double dy = (spec.y_max - spec.y_min) / spec.height;
    int col = static_cast<int>((z.real() - spec.x_min) / dx);
    int row = static_cast<int>((spec.y_max - z.imag()) / dy);
    if (col >= spec.width) col = spec.width - 1;
    if (row >= spec.height) row = spec.height - 1;
    return static_cast<std::size_t>(row) * spec.width + col;
  };
  for (std::size_t r = 0; r < 3; ++r) {
    std::size_t at = nearest_pixel(sys.known_roots[r][0]);
    CHECK(img.root_index[at] == static_cast<int>(r));
    CHECK(img.iterations[at] <= 2);
  }
}

TEST_CASE("renders are deterministic across thread counts") {
  auto sys = cubic_p1<std::complex<double>>(53);
  SolverConfig cfg;
  BasinSpec spec = small_spec(40, 40);
  spec.threads = 1;
  BasinImage a = render_plain_complex(sys, spec, cfg);
  spec.threads = 5;
  BasinImage b = render_plain_complex(sys, spec, cfg);
  CHECK(a.root_index == b.root_index);
  CHECK(a.iterations == b.iterations);

  TempPath pa("a.ppm"), pb("b.ppm"), ca("a.csv"), cb("b.csv");
  write_ppm(a, pa.path);
  write_ppm(b, pb.path);
  write_csv(a, ca.path);
  write_csv(b, cb.path);
  CHECK(slurp(pa.path) == slurp(pb.path));
  CHECK(slurp(ca.path) == slurp(cb.path));
}

TEST_CASE("recorded orbits replay sequentially") {
  using C = std::complex<double>;
  auto sys = cubic_p1<C>(53);
  SolverConfig cfg;
  cfg.m = 2;  // exercises the weight path too
  BasinSpec spec = small_spec(32, 32);
  spec.threads = 2;
  BasinImage img = render_plain_complex(sys, spec, cfg);

  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> pick(0, spec.width * spec.height - 1);
  ParamValue<C> beta{C(cfg.beta, 0.0)};
  ParamValue<C> delta{C(cfg.delta, 0.0)};
  for (int trial = 0; trial < 100; ++trial) {
    int at = pick(rng);
    int row = at / spec.width;
    int col = at % spec.width;
    double px = spec.x_min + (col + 0.5) * (spec.x_max - spec.x_min) / spec.width;
    double py = spec.y_max - (row + 0.5) * (spec.y_max - spec.y_min) / spec.height;
    Vector<C> x(1, C(px, py));
    int found = kBasinNone;
    int steps = 0;
    for (int it = 0; it <= spec.max_iter; ++it) {
      bool hit = false;
      for (std::size_t r = 0; r < sys.known_roots.size(); ++r) {
        if (std::abs(x[0] - sys.known_roots[r][0]) < spec.conv_tol) {
          found = static_cast<int>(r);
          steps = it;
          hit = true;
          break;
        }
      }
      if (hit || it == spec.max_iter) break;
      try {
        x = sw_iterate(sys, x, beta, delta, cfg);
      } catch (const Error&) {
        break;
      }
    }
    if (img.root_index[at] >= 0) {
      CHECK(img.root_index[at] == found);
      CHECK(img.iterations[at] == steps);
    } else {
      CHECK(found == kBasinNone);
    }
  }
}

TEST_CASE("real quadratic plane respects the coordinate swap symmetry") {
  auto sys = quad_p2<double>(53);
  SolverConfig cfg;
  BasinSpec spec = small_spec(36, 36);
  spec.threads = 2;
  BasinImage img = render_plain_real2(sys, spec, cfg);

  for (int r = 0; r < 4; ++r) CHECK(img.share(r) > 0.0);

  // Swapping (x,y) maps roots (1,-1) <-> (-1,1) and fixes the other two.
  auto swap_root = [](int r) { return r == 1 ? 2 : (r == 2 ? 1 : r); };
  for (int row = 0; row < spec.height; ++row) {
    for (int col = 0; col < spec.width; ++col) {
      std::size_t at = static_cast<std::size_t>(row) * spec.width + col;
      int srow = spec.width - 1 - col;
      int scol = spec.height - 1 - row;
      std::size_t sat = static_cast<std::size_t>(srow) * spec.width + scol;
      int want = img.root_index[sat] >= 0 ? swap_root(img.root_index[sat])
                                          : img.root_index[sat];
      CHECK(img.root_index[at] == want);
    }
  }
}

TEST_CASE("memory plane on the real cubic slice") {
  auto sys = cubic_p1_real_slice<double>(53);
  SolverConfig cfg;
  cfg.memory = MemoryMode::Kurchatov;
  BasinSpec spec;
  spec.mode = BasinMode::Memory;
  spec.max_iter = 500;

  SUBCASE("pixel already inside the capture disk classifies at entry") {
    spec.width = 1;
    spec.height = 1;
    spec.x_min = 2.0 - 1e-6;
    spec.x_max = 2.0 + 3e-6;  // center 2 + 1e-6
    spec.y_min = 2.0 - 3e-6;
    spec.y_max = 2.0 + 1e-6;  // center 2 - 1e-6
    BasinImage img = render_memory_real1(sys, spec, cfg);
    CHECK(img.root_index[0] == 0);
    CHECK(img.iterations[0] <= 3);
  }
  SUBCASE("an off-diagonal seed pair walks to the root") {
    spec.width = 1;
    spec.height = 1;
    spec.x_min = 2.4;
    spec.x_max = 2.6;  // x_0 = 2.5
    spec.y_min = 2.2;
    spec.y_max = 2.4;  // x_{-1} = 2.3
    BasinImage img = render_memory_real1(sys, spec, cfg);
    CHECK(img.root_index[0] == 0);
    CHECK(img.iterations[0] >= 1);
    CHECK(img.iterations[0] <= 10);
  }
  SUBCASE("diagonal seeds degenerate to an unresolved pixel") {
    spec.width = 1;
    spec.height = 1;
    spec.x_min = 2.4;
    spec.x_max = 2.6;
    spec.y_min = 2.4;
    spec.y_max = 2.6;  // both seeds 2.5
    BasinImage img = render_memory_real1(sys, spec, cfg);
    CHECK(img.root_index[0] == kBasinNone);
    CHECK(img.iterations[0] == 0);
  }
  SUBCASE("seeds beyond the escape radius are flagged diverged") {
    spec.width = 1;
    spec.height = 1;
    spec.x_min = 0.9e200;
    spec.x_max = 1.1e200;
    spec.y_min = 0.9e200;
    spec.y_max = 1.1e200;
    BasinImage img = render_memory_real1(sys, spec, cfg);
    CHECK(img.root_index[0] == kBasinDiverged);
  }
  SUBCASE("a small full plane renders deterministically") {
    spec.width = 24;
    spec.height = 24;
    spec.threads = 1;
    BasinImage a = render_memory_real1(sys, spec, cfg);
    spec.threads = 4;
    BasinImage b = render_memory_real1(sys, spec, cfg);
    CHECK(a.root_index == b.root_index);
    CHECK(a.iterations == b.iterations);
    CHECK(a.share(0) > 0.0);  // the real root does get a basin
  }
}

TEST_CASE("renderer input validation") {
  auto p1 = cubic_p1<std::complex<double>>(53);
  auto p2 = quad_p2<double>(53);
  auto slice = cubic_p1_real_slice<double>(53);
  SolverConfig cfg;

  SUBCASE("grid and window sanity") {
    BasinSpec s = small_spec(0, 10);
    CHECK_THROWS_AS(render_plain_complex(p1, s, cfg), InvalidArgument);
    s = small_spec(10, 10);
    s.x_min = 3.0;
    s.x_max = 3.0;
    CHECK_THROWS_AS(render_plain_complex(p1, s, cfg), InvalidArgument);
    s = small_spec(10, 10);
    s.conv_tol = 0.0;
    CHECK_THROWS_AS(render_plain_complex(p1, s, cfg), InvalidArgument);
  }
  SUBCASE("dimension mismatches") {
    BasinSpec s = small_spec(4, 4);
    auto two_dim = parse_system<std::complex<double>>("x1^2-1\nx2^2-1", 2);
    two_dim.known_roots.push_back(Vector<std::complex<double>>(2, {1.0, 0.0}));
    CHECK_THROWS_AS(render_plain_complex(two_dim, s, cfg), InvalidArgument);
    CHECK_THROWS_AS(render_plain_real2(slice, s, cfg), InvalidArgument);
    CHECK_THROWS_AS(render_memory_real1(p2, s, cfg), InvalidArgument);
  }
  SUBCASE("plain mode needs nonzero scalars and roots") {
    BasinSpec s = small_spec(4, 4);
    SolverConfig zero = cfg;
    zero.beta = 0.0;
    CHECK_THROWS_AS(render_plain_complex(p1, s, zero), InvalidArgument);
    auto rootless = cubic_p1<std::complex<double>>(53);
    rootless.known_roots.clear();
    CHECK_THROWS_AS(render_plain_complex(rootless, s, cfg), InvalidArgument);
  }
  SUBCASE("memory render requires a memory mode") {
    BasinSpec s = small_spec(4, 4);
    s.mode = BasinMode::Memory;
    CHECK_THROWS_AS(render_memory_real1(slice, s, cfg), InvalidArgument);
  }
}

TEST_CASE("weight conformance is enforced once per plane") {
  auto p1 = cubic_p1<std::complex<double>>(53);
  auto slice = cubic_p1_real_slice<double>(53);
  BasinSpec s = small_spec(4, 4);
  SolverConfig cfg;
  cfg.m = 2;
  cfg.weight = WeightSpec::poly({1.0, 1.0});
  CHECK_THROWS_AS(render_plain_complex(p1, s, cfg), NonconformingWeight);

  // Theorem-1-only weights pass plain planes but not memory planes.
  cfg.weight = WeightSpec::poly({1.0, -1.0, 0.0});
  CHECK_NOTHROW(render_plain_complex(p1, s, cfg));
  SolverConfig mem = cfg;
  mem.memory = MemoryMode::DividedDifference;
  BasinSpec ms = small_spec(4, 4);
  ms.mode = BasinMode::Memory;
  CHECK_THROWS_AS(render_memory_real1(slice, ms, mem), NonconformingWeight);
  mem.allow_nonconforming_weight = true;
  CHECK_NOTHROW(render_memory_real1(slice, ms, mem));
}
