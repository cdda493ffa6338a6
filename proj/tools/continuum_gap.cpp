// How far quartic-penalty solutions sit from the linear homotopy path.
//
// For random G and several weights, solves the quartic problem, samples the
// homotopy H(t) = (1 - t) G + t polar(G) at 1000 points of [0, 1], and
// reports the smallest Frobenius distance (relative to ||h_quartic||).
// Both families share the singular vectors of G, but the quartic one maps
// each singular value through its own cubic, so a common t rarely fits.
//
// usage: continuum_gap [seed] [n]

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "orthoreg/errors.hpp"
#include "orthoreg/linalg.hpp"
#include "orthoreg/regularizers.hpp"
#include "orthoreg/rng.hpp"

int main(int argc, char** argv) {
  using namespace orthoreg;
  const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 7;
  const int n = argc > 2 ? std::atoi(argv[2]) : 4;
  if (n < 2) {
    std::fprintf(stderr, "continuum_gap: n must be at least 2\n");
    return 2;
  }
  constexpr int kSamples = 1000;
  constexpr int kDraws = 5;

  std::printf("draw,weight,cond_g,cond_quartic,best_t,relative_gap\n");
  for (int d = 0; d < kDraws; ++d) {
    SplitMix64 rng = SplitMix64::substream(seed, d);
    Eigen::MatrixXd g(n, n);
    for (Eigen::Index j = 0; j < g.cols(); ++j)
      for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = rng.normal();

    for (double w : {0.05, 0.25, 1.0, 10.0}) {
      try {
        const auto q = solve_quartic(g, HomotopyParam::quartic(w), 1e-12, 200000);
        double best = INFINITY, best_t = 0;
        for (int k = 0; k < kSamples; ++k) {
          const double t = k / double(kSamples - 1);
          const double gap = (homotopy_system(HomotopyParam::homotopy(t), g) - q.system).norm();
          if (gap < best) best = gap, best_t = t;
        }
        std::printf("%d,%g,%.4g,%.4g,%.3f,%.3e\n", d, w, condition_number(g), condition_number(q.system), best_t,
                    best / q.system.norm());
      } catch (const Error& e) {
        std::fprintf(stderr, "draw %d weight %g: %s\n", d, w, e.what());
      }
    }
  }
  return 0;
}
