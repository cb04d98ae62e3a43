#include "cutfem/qmc.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <random>
#include <thread>

namespace cutfem {

std::vector<std::vector<double>> lattice_points(const LatticeRule& rule) {
  if (rule.n == 0) throw Error("lattice_points: n must be positive");
  if (rule.z.empty()) throw Error("lattice_points: empty generating vector");
  const std::size_t dim = rule.z.size();
  std::vector<std::vector<double>> points(rule.n, std::vector<double>(dim));
  for (std::uint64_t k = 0; k < rule.n; ++k) {
    for (std::size_t i = 0; i < dim; ++i) {
      // Exact integer residue first, so frac(k*z/n) carries no rounding.
      const std::uint64_t r = (k % rule.n) * (rule.z[i] % rule.n) % rule.n;
      points[k][i] = static_cast<double>(r) / static_cast<double>(rule.n);
    }
  }
  return points;
}

std::vector<std::vector<double>> shift_and_wrap(
    const std::vector<std::vector<double>>& points,
    const std::vector<double>& shift) {
  std::vector<std::vector<double>> out = points;
  for (auto& p : out) {
    if (p.size() != shift.size())
      throw Error("shift_and_wrap: dimension mismatch");
    for (std::size_t i = 0; i < p.size(); ++i) {
      double v = p[i] + shift[i];
      v -= std::floor(v);
      if (v >= 1.0) v = 0.0;
      p[i] = v;
    }
  }
  return out;
}

std::vector<std::vector<double>> map_to_box(
    const std::vector<std::vector<double>>& points, const Box& box) {
  if (box.lo.size() != box.hi.size())
    throw Error("map_to_box: malformed box");
  for (std::size_t i = 0; i < box.lo.size(); ++i)
    if (!(box.lo[i] < box.hi[i])) throw Error("map_to_box: degenerate box");
  std::vector<std::vector<double>> out = points;
  for (auto& p : out) {
    if (p.size() != box.lo.size())
      throw Error("map_to_box: dimension mismatch");
    for (std::size_t i = 0; i < p.size(); ++i)
      p[i] = box.lo[i] + p[i] * (box.hi[i] - box.lo[i]);
  }
  return out;
}

std::vector<std::vector<double>> mc_points(std::uint64_t n, std::size_t dim,
                                           std::uint64_t seed) {
  if (n == 0) throw Error("mc_points: n must be positive");
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> points(n, std::vector<double>(dim));
  for (auto& p : points)
    for (auto& c : p) c = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return points;
}

namespace {

struct SampleSlot {
  bool ok = false;
  std::vector<double> values;
};

// Evaluates every point, preserving the sample order in the output slots so
// the later reduction is independent of thread scheduling.
std::vector<SampleSlot> evaluate_all(const Integrand& integrand,
                                     const std::vector<std::vector<double>>& points,
                                     int threads) {
  std::vector<SampleSlot> slots(points.size());
  auto work = [&](std::size_t k) {
    auto r = integrand(points[k]);
    if (r.has_value()) {
      slots[k].ok = true;
      slots[k].values = std::move(*r);
    }
  };
  if (threads <= 1 || points.size() <= 1) {
    for (std::size_t k = 0; k < points.size(); ++k) work(k);
    return slots;
  }
  std::atomic<std::size_t> next{0};
  auto body = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= points.size()) return;
      work(k);
    }
  };
  std::vector<std::thread> pool;
  const int count = std::min<int>(threads, static_cast<int>(points.size()));
  pool.reserve(count);
  for (int t = 0; t < count; ++t) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  return slots;
}

struct Accumulated {
  std::vector<double> mean;
  std::vector<double> variance;
  std::uint64_t used = 0;
  std::uint64_t failed = 0;
};

Accumulated reduce_ordered(const std::vector<SampleSlot>& slots) {
  Accumulated acc;
  std::size_t qoi_count = 0;
  for (const auto& s : slots)
    if (s.ok) {
      qoi_count = s.values.size();
      break;
    }
  std::vector<double> sum(qoi_count, 0.0), sumsq(qoi_count, 0.0);
  for (const auto& s : slots) {
    if (!s.ok) {
      ++acc.failed;
      continue;
    }
    if (s.values.size() != qoi_count)
      throw Error("estimate: integrand returned inconsistent QoI counts");
    ++acc.used;
    for (std::size_t i = 0; i < qoi_count; ++i) {
      sum[i] += s.values[i];
      sumsq[i] += s.values[i] * s.values[i];
    }
  }
  acc.mean.assign(qoi_count, 0.0);
  acc.variance.assign(qoi_count, 0.0);
  if (acc.used == 0) return acc;
  const double n = static_cast<double>(acc.used);
  for (std::size_t i = 0; i < qoi_count; ++i) {
    acc.mean[i] = sum[i] / n;
    if (acc.used > 1) {
      double v = (sumsq[i] - n * acc.mean[i] * acc.mean[i]) / (n - 1.0);
      acc.variance[i] = v > 0.0 ? v : 0.0;
    }
  }
  return acc;
}

}  // namespace

EstimateResult estimate(const Integrand& integrand, std::size_t dim,
                        const EstimateOptions& options) {
  if (options.n == 0) throw Error("estimate: n must be positive");
  EstimateResult result;

  if (options.sampler == SamplerKind::MonteCarlo) {
    auto slots = evaluate_all(integrand, mc_points(options.n, dim, options.seed),
                              options.threads);
    auto acc = reduce_ordered(slots);
    result.mean = acc.mean;
    result.variance = acc.variance;
    result.requested_samples = options.n;
    result.failed_samples = acc.failed;
    return result;
  }

  LatticeRule rule{options.n, options.z};
  if (rule.z.size() != dim)
    throw Error("estimate: generating vector dimension mismatch");
  const auto base = lattice_points(rule);

  if (options.sampler == SamplerKind::Lattice) {
    auto acc = reduce_ordered(evaluate_all(integrand, base, options.threads));
    result.mean = acc.mean;
    result.variance = acc.variance;
    result.requested_samples = options.n;
    result.failed_samples = acc.failed;
    return result;
  }

  const int q = options.shift_count;
  if (q < 2) throw Error("estimate: shifted lattice needs at least 2 shifts");
  std::vector<std::vector<double>> shifts = options.forced_shifts;
  if (shifts.empty()) {
    std::mt19937_64 rng(options.seed);
    shifts.assign(q, std::vector<double>(dim));
    for (auto& s : shifts)
      for (auto& c : s) c = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  }
  if (static_cast<int>(shifts.size()) != q)
    throw Error("estimate: forced shift count must equal q");

  std::size_t qoi_count = 0;
  std::vector<double> pooled_sum, pooled_sumsq;
  std::uint64_t pooled_used = 0;
  result.requested_samples = static_cast<std::uint64_t>(q) * options.n;
  for (const auto& shift : shifts) {
    auto acc = reduce_ordered(
        evaluate_all(integrand, shift_and_wrap(base, shift), options.threads));
    result.failed_samples += acc.failed;
    if (acc.used == 0)
      throw Error("estimate: a shift lost every sample; cannot average");
    if (qoi_count == 0) {
      qoi_count = acc.mean.size();
      pooled_sum.assign(qoi_count, 0.0);
      pooled_sumsq.assign(qoi_count, 0.0);
    }
    result.shift_means.push_back(acc.mean);
    const double n = static_cast<double>(acc.used);
    for (std::size_t i = 0; i < qoi_count; ++i) {
      pooled_sum[i] += acc.mean[i] * n;
      // Reconstitute the raw second moment from mean and unbiased variance.
      pooled_sumsq[i] +=
          acc.variance[i] * (n - 1.0) + n * acc.mean[i] * acc.mean[i];
    }
    pooled_used += acc.used;
  }

  result.mean.assign(qoi_count, 0.0);
  for (const auto& sm : result.shift_means)
    for (std::size_t i = 0; i < qoi_count; ++i) result.mean[i] += sm[i];
  for (auto& m : result.mean) m /= static_cast<double>(q);

  result.variance.assign(qoi_count, 0.0);
  if (pooled_used > 1) {
    const double n = static_cast<double>(pooled_used);
    std::vector<double> pooled_mean(qoi_count);
    for (std::size_t i = 0; i < qoi_count; ++i) {
      pooled_mean[i] = pooled_sum[i] / n;
      double v = (pooled_sumsq[i] - n * pooled_mean[i] * pooled_mean[i]) / (n - 1.0);
      result.variance[i] = v > 0.0 ? v : 0.0;
    }
  }

  // centered on the first shift so equal shift means give exactly zero
  result.rms.assign(qoi_count, 0.0);
  for (std::size_t i = 0; i < qoi_count; ++i) {
    double ebar = 0.0;
    for (const auto& sm : result.shift_means) ebar += sm[i] - result.shift_means[0][i];
    ebar /= static_cast<double>(q);
    double s = 0.0;
    for (const auto& sm : result.shift_means) {
      const double d = (sm[i] - result.shift_means[0][i]) - ebar;
      s += d * d;
    }
    result.rms[i] = std::sqrt(s / static_cast<double>(q - 1));
  }
  return result;
}

std::vector<ConvergenceRow> convergence_study(const Integrand& integrand,
                                              std::size_t dim,
                                              const std::vector<std::uint64_t>& n_list,
                                              const EstimateOptions& base) {
  if (n_list.empty()) throw Error("convergence_study: empty n list");
  for (std::size_t i = 0; i + 1 < n_list.size(); ++i)
    if (n_list[i] >= n_list[i + 1])
      throw Error("convergence_study: n list must be strictly increasing");

  std::vector<ConvergenceRow> rows;
  for (auto n : n_list) {
    EstimateOptions opt = base;
    opt.n = n;
    auto est = estimate(integrand, dim, opt);
    ConvergenceRow row;
    row.n = n;
    row.mean = est.mean;
    row.variance = est.variance;
    row.rms = est.rms;
    row.failed_samples = est.failed_samples;
    rows.push_back(std::move(row));
  }

  const auto& ref = rows.back();
  for (auto& row : rows) {
    const std::size_t m = ref.mean.size();
    row.mean_abs_error.resize(m);
    row.mean_rel_error.resize(m);
    row.variance_abs_error.resize(m);
    row.variance_rel_error.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      row.mean_abs_error[i] = std::fabs(row.mean[i] - ref.mean[i]);
      row.mean_rel_error[i] = ref.mean[i] != 0.0
                                  ? row.mean_abs_error[i] / std::fabs(ref.mean[i])
                                  : row.mean_abs_error[i];
      row.variance_abs_error[i] = std::fabs(row.variance[i] - ref.variance[i]);
      row.variance_rel_error[i] =
          ref.variance[i] != 0.0
              ? row.variance_abs_error[i] / std::fabs(ref.variance[i])
              : row.variance_abs_error[i];
    }
  }
  return rows;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw Error("log_log_slope: size mismatch");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m < 2) throw Error("log_log_slope: fewer than 2 positive points");
  const double denom = m * sxx - sx * sx;
  if (denom == 0.0) throw Error("log_log_slope: degenerate abscissae");
  return (m * sxy - sx * sy) / denom;
}

}  // namespace cutfem
