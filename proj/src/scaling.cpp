#include "thinfilm/scaling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "thinfilm/analysis.hpp"
#include "thinfilm/errors.hpp"
#include "thinfilm/radial.hpp"
#include "thinfilm/rupture.hpp"

namespace thinfilm {

namespace {

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  if (threads <= 0)
    threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex err_mutex;
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

Params canonical_params(double alpha, int dim) {
  return Params(alpha, dim, 1.0 / alpha);
}

// rescaled average thickness of the k-th Neumann solution:
// (r_k)^{-2/(1+a)} * average of h over B_{r_k}
std::vector<double> hbar_sequence(const Trajectory& traj, const Params& params,
                                  const std::vector<double>& radii) {
  const double e = 2.0 / (params.alpha + 1.0);
  std::vector<double> avg =
      average_thickness_cumulative(traj, radii, params);
  for (std::size_t i = 0; i < radii.size(); ++i)
    avg[i] *= std::pow(radii[i], -e);
  return avg;
}

}  // namespace

Trajectory scale_from_canonical(const Params& target, double eta,
                                const Trajectory& canonical) {
  const double a = target.alpha;
  if (canonical.params().dim != target.dim ||
      canonical.params().alpha != a)
    throw std::invalid_argument(
        "scale_from_canonical: alpha/dim mismatch with canonical solve");
  if (std::abs(canonical.params().pressure - 1.0 / a) > 1e-12 / a)
    throw std::invalid_argument(
        "scale_from_canonical: canonical trajectory must be at p = 1/alpha");

  const double ap = a * target.pressure;
  const double s_h = std::pow(ap, -1.0 / a);            // height scale
  const double s_r = std::pow(ap, (1.0 + a) / (2.0 * a));  // radius shrink
  const double beta = 2.0 * a / (a + 1.0);

  const double eta_c = std::pow(ap, 1.0 / a) * eta;
  if (std::abs(canonical.eta() - eta_c) > 1e-9 * std::max(1.0, eta_c))
    throw std::invalid_argument(
        "scale_from_canonical: canonical center height does not match "
        "(alpha p)^{1/alpha} eta");

  TrajectoryBuilder b(target, canonical.kind(), eta);
  if (canonical.kind() == SolutionKind::kRupture)
    b.set_rupture_asymptote(canonical.rupture_c_star(),
                            canonical.rupture_kappa() * std::pow(s_r, beta));

  using Form = Trajectory::Segment::Form;
  for (Trajectory::Segment s : canonical.segments()) {
    s.r0 /= s_r;
    s.r1 /= s_r;
    switch (s.form) {
      case Form::kFlat:
        s.a *= s_h;
        break;
      case Form::kTaylor2:
        s.a *= s_h;
        s.b *= s_h * s_r * s_r;
        break;
      case Form::kDopri:
        s.x0 /= s_r;
        s.h /= s_r;
        for (int i = 0; i < 5; ++i) {
          auto& c = (i == 0   ? s.c1
                     : i == 1 ? s.c2
                     : i == 2 ? s.c3
                     : i == 3 ? s.c4
                              : s.c5);
          c[0] *= s_h;        // h component
          c[1] *= s_h * s_r;  // dh component
        }
        break;
      case Form::kNormalized:
        // r' = r / s_r  <=>  t' = t + log(s_r); phi data unchanged
        s.x0 += std::log(s_r);
        break;
      case Form::kAsymptote:
        s.b *= std::pow(s_r, beta);
        break;
    }
    b.add_segment(s);
  }
  for (State st : canonical.samples()) {
    st.r /= s_r;
    st.h *= s_h;
    st.dh *= s_h * s_r;
    b.add_sample(st);
  }
  for (double ev : canonical.events()) b.add_event(ev / s_r);
  return b.take();
}

std::vector<double> default_eta_grid(double xi, int points_upper,
                                     int points_lower) {
  std::vector<double> grid;
  grid.reserve(points_lower + points_upper);
  const double lo0 = 0.02 * xi, lo1 = 0.99 * xi;
  for (int i = 0; i < points_lower; ++i) {
    const double t = static_cast<double>(i) / (points_lower - 1);
    grid.push_back(lo0 * std::pow(lo1 / lo0, t));
  }
  const double up0 = 1.01 * xi, up1 = 50.0 * xi;
  for (int i = 0; i < points_upper; ++i) {
    const double t = static_cast<double>(i) / (points_upper - 1);
    grid.push_back(up0 * std::pow(up1 / up0, t));
  }
  return grid;
}

SolutionMenu solve_prescribed_pressure(const Params& params, double R,
                                       int k_max,
                                       const std::vector<double>& eta_grid,
                                       double rupture_match_rtol) {
  if (!(R > 0.0) || k_max < 1)
    throw std::invalid_argument("solve_prescribed_pressure: bad R or k_max");
  const double a = params.alpha;
  const double ap = a * params.pressure;
  const double s_h = std::pow(ap, -1.0 / a);
  const double s_r = std::pow(ap, (1.0 + a) / (2.0 * a));
  const double R_c = R * s_r;  // target radius in canonical units
  const Params canon = canonical_params(a, params.dim);

  SolutionMenu menu;
  menu.flat_height = derive_constants(params).xi;

  // canonical grid solves, cached across k
  std::vector<std::vector<double>> rk(eta_grid.size());
  SolveConfig cfg;
  for (std::size_t i = 0; i < eta_grid.size(); ++i) {
    const double eta_c = eta_grid[i] / s_h;
    Trajectory traj = solve_smooth(canon, eta_c, cfg, k_max);
    rk[i].assign(traj.events().begin(), traj.events().begin() + k_max);
  }

  auto rk_of = [&](double eta_c, int k) {
    Trajectory traj = solve_smooth(canon, eta_c, cfg, k);
    return traj.events()[k - 1];
  };

  auto push_entry = [&](double eta_c, int k) {
    Trajectory traj = solve_smooth(canon, eta_c, cfg, k);
    const double rk_c = traj.events()[k - 1];
    const double hbar = hbar_sequence(traj, canon, {rk_c})[0];
    SolutionKey key;
    key.pressure = params.pressure;
    key.eta = eta_c * s_h;
    key.k = k;
    key.r_k = rk_c / s_r;
    key.hbar = hbar;  // scaling-invariant
    key.scaled_pressure =
        params.pressure * std::pow(key.r_k, 2.0 * a / (1.0 + a));
    menu.entries.push_back(key);
  };

  for (int k = 1; k <= k_max; ++k) {
    for (std::size_t i = 0; i + 1 < eta_grid.size(); ++i) {
      // skip the xi gap between the two grid branches
      if ((eta_grid[i] - menu.flat_height) *
              (eta_grid[i + 1] - menu.flat_height) <
          0.0)
        continue;
      const double g0 = rk[i][k - 1] - R_c;
      const double g1 = rk[i + 1][k - 1] - R_c;
      if (!(g0 * g1 < 0.0)) continue;
      double lo = eta_grid[i] / s_h, hi = eta_grid[i + 1] / s_h;
      double glo = g0;
      for (int it = 0; it < 100; ++it) {
        if (hi - lo <= 1e-9 * std::max(1.0, hi)) break;
        const double mid = 0.5 * (lo + hi);
        const double gm = rk_of(mid, k) - R_c;
        if (gm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((gm > 0.0) == (glo > 0.0)) {
          lo = mid;
          glo = gm;
        } else {
          hi = mid;
        }
      }
      push_entry(0.5 * (lo + hi), k);
    }
  }

  // rupture matches
  SolveConfig rcfg;
  Trajectory rupture = solve_rupture(canon, rcfg, k_max);
  for (int k = 1; k <= k_max; ++k) {
    const double rk_c = rupture.events()[k - 1];
    if (std::abs(rk_c - R_c) <= rupture_match_rtol * R_c) {
      const double hbar = hbar_sequence(rupture, canon, {rk_c})[0];
      SolutionKey key;
      key.pressure = params.pressure;
      key.eta = 0.0;
      key.k = k;
      key.r_k = rk_c / s_r;
      key.hbar = hbar;
      key.scaled_pressure =
          params.pressure * std::pow(key.r_k, 2.0 * a / (1.0 + a));
      menu.entries.push_back(key);
    }
  }
  return menu;
}

FamilyRecord hbar_table(const Params& params,
                        const std::vector<double>& eta_grid, int k_max,
                        bool include_rupture, int threads) {
  FamilyRecord rec;
  rec.alpha = params.alpha;
  rec.dim = params.dim;
  rec.k_max = k_max;
  if (include_rupture) rec.eta_grid.push_back(0.0);
  rec.eta_grid.insert(rec.eta_grid.end(), eta_grid.begin(), eta_grid.end());
  for (double eta : rec.eta_grid)
    if (eta != 0.0 && std::abs(eta - 1.0) < 1e-9)
      throw std::invalid_argument(
          "hbar_table: canonical eta grid must avoid the flat value 1");

  const int n = static_cast<int>(rec.eta_grid.size());
  rec.r_k.assign(n, {});
  rec.hbar.assign(n, {});
  const Params canon = canonical_params(params.alpha, params.dim);

  parallel_for(n, threads, [&](int i) {
    SolveConfig cfg;
    const double eta = rec.eta_grid[i];
    Trajectory traj = (eta == 0.0) ? solve_rupture(canon, cfg, k_max)
                                   : solve_smooth(canon, eta, cfg, k_max);
    std::vector<double> radii(traj.events().begin(),
                              traj.events().begin() + k_max);
    rec.r_k[i] = radii;
    rec.hbar[i] = hbar_sequence(traj, canon, radii);
  });
  return rec;
}

std::optional<SolutionKey> solve_prescribed_volume_rupture(double alpha,
                                                           int dim,
                                                           double hbar_target,
                                                           int k_max,
                                                           double rel_tol) {
  if (!(hbar_target > 0.0))
    throw std::invalid_argument(
        "solve_prescribed_volume_rupture: hbar_target must be > 0");
  const Params canon = canonical_params(alpha, dim);
  SolveConfig cfg;
  Trajectory traj = solve_rupture(canon, cfg, k_max);
  std::vector<double> radii(traj.events().begin(),
                            traj.events().begin() + k_max);
  const std::vector<double> hb = hbar_sequence(traj, canon, radii);

  int best = -1;
  double best_err = rel_tol;
  for (int k = 0; k < k_max; ++k) {
    const double err = std::abs(hb[k] - hbar_target) / hbar_target;
    if (err <= best_err) {
      best_err = err;
      best = k;
    }
  }
  if (best < 0) return std::nullopt;
  SolutionKey key;
  key.pressure = 1.0 / alpha;
  key.eta = 0.0;
  key.k = best + 1;
  key.r_k = radii[best];
  key.hbar = hb[best];
  key.scaled_pressure =
      (1.0 / alpha) * std::pow(radii[best], 2.0 * alpha / (1.0 + alpha));
  return key;
}

InfR1Record estimate_inf_r1(double alpha, int dim,
                            const std::vector<double>& eta_grid, int k_max) {
  const Params canon = canonical_params(alpha, dim);
  InfR1Record rec;
  rec.R_k.assign(k_max, std::numeric_limits<double>::infinity());
  rec.R1_inf = std::numeric_limits<double>::infinity();

  std::vector<std::vector<double>> rk(eta_grid.size());
  parallel_for(static_cast<int>(eta_grid.size()), 0, [&](int i) {
    SolveConfig cfg;
    Trajectory traj = solve_smooth(canon, eta_grid[i], cfg, k_max);
    rk[i].assign(traj.events().begin(), traj.events().begin() + k_max);
  });

  for (std::size_t i = 0; i < eta_grid.size(); ++i) {
    if (rk[i][0] < rec.R1_inf) {
      rec.R1_inf = rk[i][0];
      rec.argmin_eta = eta_grid[i];
    }
    if (eta_grid[i] > 1.0)
      for (int k = 0; k < k_max; ++k)
        rec.R_k[k] = std::min(rec.R_k[k], rk[i][k]);
  }
  rec.p_k.resize(k_max);
  for (int k = 0; k < k_max; ++k)
    rec.p_k[k] =
        (1.0 / alpha) * std::pow(rec.R_k[k], 2.0 * alpha / (1.0 + alpha));
  return rec;
}

}  // namespace thinfilm
