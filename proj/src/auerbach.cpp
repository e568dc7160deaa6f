#include "mbasis/auerbach.hpp"

#include "mbasis/error.hpp"

#include <cmath>
#include <random>

namespace mbasis {

AuerbachResult auerbach_search(const NormSpec& space, int max_sweeps, std::uint64_t seed) {
  const int d = space.dim();
  if (max_sweeps < 1) throw InvalidArgument("auerbach_search: need at least one sweep");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Mat x(d, d);
  for (int attempt = 0;; ++attempt) {
    for (int j = 0; j < d; ++j) {
      Vec v(d);
      for (int k = 0; k < d; ++k) v(k) = gauss(rng);
      x.col(j) = v / norm(space, Vector(v));
    }
    if (std::abs(x.determinant()) > 1e-8) break;
    if (attempt > 100) throw DegenerateSystem("auerbach_search: could not draw a nonsingular start");
  }

  AuerbachResult res;
  res.det_trace.push_back(std::abs(x.determinant()));
  constexpr double kAccept = 1e-13;

  for (res.sweeps = 0; res.sweeps < max_sweeps; ++res.sweeps) {
    bool improved = false;
    for (int j = 0; j < d; ++j) {
      const Mat inv = x.inverse();
      const Functional fj(inv.row(j).transpose());
      const DualNormResult dn = dual_norm_certified(space, fj);
      if (dn.value <= 1.0 + kAccept) continue;
      const double nm = norm(space, dn.maximizer);
      const Vec cand = dn.maximizer.coords / nm;
      Mat trial = x;
      trial.col(j) = cand;
      const double det = std::abs(trial.determinant());
      if (det <= res.det_trace.back()) continue;
      x = std::move(trial);
      res.det_trace.push_back(det);
      improved = true;
    }
    if (!improved) {
      res.converged = true;
      break;
    }
  }

  res.system = SystemOfVectors{space, {}};
  for (int j = 0; j < d; ++j) res.system.vectors.emplace_back(x.col(j));
  const Mat inv = x.inverse();
  std::vector<Functional> fs;
  for (int j = 0; j < d; ++j) fs.emplace_back(inv.row(j).transpose());
  res.biorthogonal = make_biorthogonal_system(res.system, std::move(fs));
  res.epsilon_search = res.biorthogonal.products.maxCoeff() - 1.0;
  return res;
}

}  // namespace mbasis
