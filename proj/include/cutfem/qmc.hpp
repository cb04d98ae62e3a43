#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "cutfem/geometry.hpp"

namespace cutfem {

// Rank-1 lattice rule: point k is frac(k*z/n) componentwise.
struct LatticeRule {
  std::uint64_t n = 0;
  std::vector<std::uint64_t> z;
};

std::vector<std::vector<double>> lattice_points(const LatticeRule& rule);

// Componentwise frac(point + shift); inputs and outputs live in [0,1)^s.
std::vector<std::vector<double>> shift_and_wrap(
    const std::vector<std::vector<double>>& points,
    const std::vector<double>& shift);

struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
};

std::vector<std::vector<double>> map_to_box(
    const std::vector<std::vector<double>>& points, const Box& box);

std::vector<std::vector<double>> mc_points(std::uint64_t n, std::size_t dim,
                                           std::uint64_t seed);

// Unit-cube point to QoI vector; nullopt marks a failed sample that must be
// excluded from the averages and counted.
using Integrand =
    std::function<std::optional<std::vector<double>>(const std::vector<double>&)>;

enum class SamplerKind { Lattice, ShiftedLattice, MonteCarlo };

struct EstimateOptions {
  SamplerKind sampler = SamplerKind::Lattice;
  std::uint64_t n = 0;
  std::vector<std::uint64_t> z = {1, 127};
  int shift_count = 16;
  std::uint64_t seed = 0;
  int threads = 1;
  // When nonempty these shifts replace the seeded random ones (size = q).
  std::vector<std::vector<double>> forced_shifts;
};

struct EstimateResult {
  std::vector<double> mean;
  std::vector<double> variance;
  std::vector<double> rms;                       // shifted lattice only
  std::vector<std::vector<double>> shift_means;  // [shift][qoi]
  std::uint64_t requested_samples = 0;
  std::uint64_t failed_samples = 0;
};

EstimateResult estimate(const Integrand& integrand, std::size_t dim,
                        const EstimateOptions& options);

struct ConvergenceRow {
  std::uint64_t n = 0;
  std::vector<double> mean;
  std::vector<double> variance;
  std::vector<double> rms;  // filled for the shifted-lattice sampler
  std::vector<double> mean_abs_error;
  std::vector<double> mean_rel_error;
  std::vector<double> variance_abs_error;
  std::vector<double> variance_rel_error;
  std::uint64_t failed_samples = 0;
};

// Errors are measured against the estimates at the largest n in the list.
std::vector<ConvergenceRow> convergence_study(const Integrand& integrand,
                                              std::size_t dim,
                                              const std::vector<std::uint64_t>& n_list,
                                              const EstimateOptions& base);

// Least-squares slope of log(y) against log(x), skipping non-positive y.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace cutfem
