#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cutfem/io.hpp"
#include "cutfem/lanczos.hpp"
#include "cutfem/problems.hpp"
#include "cutfem/qmc.hpp"
#include "json.hpp"

namespace {

using namespace cutfem;

// Typed view over the key=value config with defaults; tracks which keys were
// consumed so typos can be reported.
class Config {
 public:
  explicit Config(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}

  bool has(const std::string& key) const { return kv_.count(key) != 0; }

  std::string get_string(const std::string& key, const std::string& fallback) {
    used_.insert(key);
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
  }

  double get_double(const std::string& key, double fallback) {
    used_.insert(key);
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    return parse_double_list(it->second).at(0);
  }

  int get_int(const std::string& key, int fallback) {
    return static_cast<int>(get_uint64(key, static_cast<std::uint64_t>(fallback)));
  }

  std::uint64_t get_uint64(const std::string& key, std::uint64_t fallback) {
    used_.insert(key);
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    return parse_uint_list(it->second).at(0);
  }

  std::vector<std::uint64_t> get_uint_list(const std::string& key,
                                           const std::vector<std::uint64_t>& fallback) {
    used_.insert(key);
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : parse_uint_list(it->second);
  }

  std::vector<double> get_double_list(const std::string& key,
                                      const std::vector<double>& fallback) {
    used_.insert(key);
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : parse_double_list(it->second);
  }

  void warn_unused(std::ostream& err) const {
    for (const auto& [key, value] : kv_)
      if (!used_.count(key))
        err << "warning: unused config key '" << key << "'\n";
  }

  const std::map<std::string, std::string>& raw() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
  std::set<std::string> used_;
};

struct GeometrySetup {
  LevelSetSpec level_set;
  BoundingBox box;
  int mesh_n = 0;
  bool has_exact = false;
};

GeometrySetup make_geometry(Config& config) {
  GeometrySetup g;
  const std::string name = config.get_string("geometry", "circle");
  if (name == "circle") {
    g.level_set = unit_circle_level_set();
    g.box = circle_benchmark_box();
    g.mesh_n = config.get_int("mesh_n", 17);
    g.has_exact = true;
  } else if (name == "gasket") {
    const double w1 = config.get_double("omega1", 9.0);
    const double w2 = config.get_double("omega2", 2.0);
    g.level_set = gasket_level_set(w1, w2);
    g.box = gasket_box();
    g.mesh_n = config.get_int("mesh_n", 52);
  } else {
    throw Error("unknown geometry '" + name + "' (use circle or gasket)");
  }
  return g;
}

AssemblyParams make_params(Config& config) {
  AssemblyParams p;
  p.gamma_d = config.get_double("gamma_d", p.gamma_d);
  p.gamma1 = config.get_double("gamma1", p.gamma1);
  p.gamma_n = config.get_double("gamma_n", p.gamma_n);
  p.quad_degree = config.get_int("quad_degree", p.quad_degree);
  return p;
}

ClassifyOptions make_classify_options(Config& config) {
  ClassifyOptions c;
  c.resolution_depth = config.get_double("resolution_depth", c.resolution_depth);
  return c;
}

// "levels = 4" means refinement levels 0..3; an explicit comma list selects
// which levels are reported (the hierarchy is always built up to the largest).
std::vector<int> parse_levels(Config& config, int fallback_count) {
  std::vector<int> levels;
  const std::string text = config.get_string("levels", "");
  if (text.empty()) {
    for (int l = 0; l < fallback_count; ++l) levels.push_back(l);
    return levels;
  }
  const auto list = parse_uint_list(text);
  if (list.size() == 1 && text.find(',') == std::string::npos) {
    if (list[0] == 0) throw Error("levels count must be positive");
    for (std::uint64_t l = 0; l < list[0]; ++l)
      levels.push_back(static_cast<int>(l));
    return levels;
  }
  for (auto v : list) levels.push_back(static_cast<int>(v));
  for (std::size_t i = 0; i + 1 < levels.size(); ++i)
    if (levels[i] >= levels[i + 1])
      throw Error("levels list must be strictly increasing");
  return levels;
}

std::unique_ptr<Preconditioner> make_preconditioner(
    const std::string& name, const InstanceHierarchy& hierarchy, int level) {
  const SparseMatrix& k = hierarchy.instances[level]->problem.k;
  if (name == "none" || name == "identity") return make_identity();
  if (name == "jacobi") return make_jacobi(k);
  if (name == "sgs") return make_sgs(k);
  if (name == "multigrid" || name == "mg") {
    if (static_cast<int>(hierarchy.prolongations.size()) < level)
      throw Error("multigrid needs nested transfers up to level " +
                  std::to_string(level));
    std::vector<SparseMatrix> prolongations(
        hierarchy.prolongations.begin(), hierarchy.prolongations.begin() + level);
    std::vector<std::vector<int>> cut_dofs(
        hierarchy.cut_dofs.begin(), hierarchy.cut_dofs.begin() + level + 1);
    return make_multigrid(k, std::move(prolongations), std::move(cut_dofs));
  }
  throw Error("unknown preconditioner '" + name + "'");
}

std::string eoc_cell(double coarse_err, double fine_err, double h_ratio) {
  if (!(coarse_err > 0.0) || !(fine_err > 0.0) || !(h_ratio > 1.0)) return "";
  return format_number(std::log(coarse_err / fine_err) / std::log(h_ratio));
}

void write_run_record(const Config& config, const std::string& out_dir,
                      const nlohmann::json& summary) {
  nlohmann::json j;
  j["config"] = config.raw();
  j["summary"] = summary;
  std::ofstream out(out_dir + "/run.json");
  if (!out) throw Error("cannot open for writing: " + out_dir + "/run.json");
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------

int run_converge(Config& config, const std::string& out_dir) {
  GeometrySetup geom = make_geometry(config);
  if (!geom.has_exact)
    throw Error("converge needs a geometry with a registered exact solution "
                "(circle)");
  const AssemblyParams params = make_params(config);
  const double alpha = config.get_double("alpha", 0.1);
  const auto levels = parse_levels(config, 4);
  const double inner_tol = config.get_double("inner_tol", 1e-8);
  OptimizeOptions opts;
  opts.tolerance = config.get_double("outer_tol", 1e-6);
  opts.max_outer = config.get_int("max_outer", 500);
  const std::string precond_name = config.get_string("precond", "sgs");

  const CaseData data = circle_benchmark_data(alpha);
  const ExactTriple exact = circle_benchmark_exact(alpha);
  // transfers are only needed (and only guaranteed to nest) for multigrid
  const bool wants_mg = precond_name == "multigrid" || precond_name == "mg";
  InstanceHierarchy hierarchy =
      make_hierarchy(geom.box, geom.mesh_n, levels.back() + 1, geom.level_set,
                     params, alpha, data, make_classify_options(config), wants_mg);

  std::vector<std::string> header = {"level", "h", "dofs"};
  const char* vars[3] = {"y", "p", "u"};
  const char* norms[3] = {"l2", "h1", "star"};
  for (const auto* norm : norms)
    for (const auto* var : vars) {
      header.push_back(std::string("err_") + var + "_" + norm);
      header.push_back(std::string("eoc_") + var + "_" + norm);
    }
  CsvWriter csv(out_dir + "/converge.csv", header);

  const ScalarField* exact_fields[3] = {&exact.y, &exact.p, &exact.u};
  const VectorField* exact_grads[3] = {&exact.grad_y, &exact.grad_p, &exact.grad_u};
  const NormKind kinds[3] = {NormKind::L2, NormKind::H1, NormKind::Star};

  std::vector<double> prev_errors;
  double prev_h = 0.0;
  std::vector<std::vector<double>> eocs(9);
  for (int level : levels) {
    const ProblemInstance& inst = *hierarchy.instances[level];
    auto precond = make_preconditioner(precond_name, hierarchy, level);
    ControlProblem problem_view = inst.problem;  // tolerances are run-local
    problem_view.cg_tol = inner_tol;
    StateSolver solver(problem_view, precond.get());
    OptimalTriple triple = optimize(problem_view, solver, opts);

    const std::vector<double>* coeffs[3] = {&triple.y, &triple.p, &triple.u};
    std::vector<double> errors(9);
    for (int n = 0; n < 3; ++n)
      for (int v = 0; v < 3; ++v)
        errors[3 * n + v] =
            measure_error(inst.space, inst.topo, params, *coeffs[v],
                          *exact_fields[v], *exact_grads[v], kinds[n]);

    std::vector<std::string> row = {std::to_string(level),
                                    format_number(inst.topo.h),
                                    std::to_string(inst.space.num_dofs())};
    for (int c = 0; c < 9; ++c) {
      row.push_back(format_number(errors[c]));
      if (prev_errors.empty()) {
        row.push_back("");
      } else {
        const double ratio = prev_h / inst.topo.h;
        row.push_back(eoc_cell(prev_errors[c], errors[c], ratio));
        if (!row.back().empty())
          eocs[c].push_back(std::log(prev_errors[c] / errors[c]) / std::log(ratio));
      }
    }
    csv.write_row(row);
    prev_errors = errors;
    prev_h = inst.topo.h;
    std::cout << "level " << level << ": dofs " << inst.space.num_dofs()
              << ", outer " << triple.outer_iterations << ", cost "
              << format_number(triple.cost) << '\n';
  }

  std::vector<std::string> mean_row = {"mean", "", ""};
  nlohmann::json mean_eoc;
  for (int c = 0; c < 9; ++c) {
    mean_row.push_back("");
    if (eocs[c].empty()) {
      mean_row.push_back("");
      continue;
    }
    double sum = 0.0;
    for (double e : eocs[c]) sum += e;
    const double mean = sum / static_cast<double>(eocs[c].size());
    mean_row.push_back(format_number(mean));
    mean_eoc[std::string(vars[c % 3]) + "_" + norms[c / 3]] = mean;
  }
  csv.write_row(mean_row);
  write_run_record(config, out_dir, {{"mean_eoc", mean_eoc}});
  return 0;
}

int run_precond(Config& config, const std::string& out_dir) {
  GeometrySetup geom = make_geometry(config);
  const AssemblyParams params = make_params(config);
  const double alpha = config.get_double("alpha", 0.1);
  const auto levels = parse_levels(config, 4);
  const double inner_tol = config.get_double("inner_tol", 1e-8);
  const int lanczos_steps = config.get_int("lanczos_steps", 200);
  const int cg_cap = config.get_int("cg_max_iterations", 20000);

  const CaseData data =
      geom.has_exact ? circle_benchmark_data(alpha) : constant_target_data();
  InstanceHierarchy hierarchy =
      make_hierarchy(geom.box, geom.mesh_n, levels.back() + 1, geom.level_set,
                     params, alpha, data, make_classify_options(config), false);
  // build transfers as far as the active sets nest; multigrid rows past a
  // break report NA instead of aborting the study
  for (int l = 1; l < hierarchy.num_levels(); ++l) {
    try {
      hierarchy.prolongations.push_back(
          prolongation(hierarchy.instances[l - 1]->space,
                       hierarchy.instances[l]->space,
                       hierarchy.meshes.parent_maps[l - 1]));
    } catch (const Error& e) {
      std::cerr << "warning: transfers stop at level " << l - 1 << ": " << e.what()
                << '\n';
      break;
    }
  }

  CsvWriter csv(out_dir + "/precond.csv",
                {"level", "dofs", "preconditioner", "kappa", "iterations",
                 "residual"});
  const char* names[4] = {"none", "jacobi", "sgs", "multigrid"};
  nlohmann::json summary = nlohmann::json::array();
  for (int level : levels) {
    const ProblemInstance& inst = *hierarchy.instances[level];
    const int n = inst.space.num_dofs();
    // State solve at the registered data with the initial control u = 1.
    std::vector<double> ones(n, 1.0), rhs(n);
    inst.problem.m.multiply(ones, rhs);
    for (int i = 0; i < n; ++i) rhs[i] += inst.problem.d[i];

    for (const char* name : names) {
      std::vector<std::string> row = {std::to_string(level), std::to_string(n),
                                      name, "NA", "NA", "NA"};
      try {
        auto precond = make_preconditioner(name, hierarchy, level);
        ConditionEstimate est =
            estimate_condition(inst.problem.k, *precond, lanczos_steps);
        std::vector<double> x(n, 0.0);
        SolveReport report =
            cg_solve(inst.problem.k, rhs, x, *precond, inner_tol, cg_cap);
        row[3] = format_number(est.kappa);
        row[4] = std::to_string(report.iterations);
        row[5] = format_number(report.residual);
        summary.push_back({{"level", level},
                           {"preconditioner", name},
                           {"kappa", est.kappa},
                           {"iterations", report.iterations}});
        std::cout << "level " << level << " " << name << ": kappa "
                  << format_number(est.kappa) << ", iters " << report.iterations
                  << '\n';
      } catch (const Error& e) {
        std::cerr << "warning: level " << level << " " << name
                  << " failed: " << e.what() << '\n';
      }
      csv.write_row(row);
    }
  }
  write_run_record(config, out_dir, {{"cells", summary}});
  return 0;
}

struct QoiSpec {
  std::vector<std::string> names;
  Integrand integrand;
  // Exact reference when known (analytic mode); otherwise errors are
  // measured against the lattice estimate at the largest N.
  std::vector<double> exact_mean;
  std::vector<double> exact_variance;
};

QoiSpec make_integrand(Config& config, const Box& box) {
  QoiSpec spec;
  const std::string kind = config.get_string("integrand", "control");
  if (kind == "analytic") {
    spec.names = {"t1t2"};
    spec.integrand = [](const std::vector<double>& t) {
      return std::optional<std::vector<double>>{{t.at(0) * t.at(1)}};
    };
    spec.exact_mean = {0.25};
    spec.exact_variance = {7.0 / 144.0};
    return spec;
  }
  if (kind != "control") throw Error("unknown integrand '" + kind + "'");

  const AssemblyParams params = make_params(config);
  const double alpha = config.get_double("alpha", 0.1);
  const double inner_tol = config.get_double("inner_tol", 1e-8);
  OptimizeOptions opts;
  opts.tolerance = config.get_double("outer_tol", 1e-6);
  opts.max_outer = config.get_int("max_outer", 500);

  GeometrySetup geom = make_geometry(config);
  if (geom.level_set.kind != LevelSetKind::Gasket)
    throw Error("the control integrand is defined for the gasket geometry");
  const ClassifyOptions copts = make_classify_options(config);
  auto mesh = std::make_shared<BackgroundMesh>(
      build_structured_mesh(geom.box, geom.mesh_n));
  auto data = std::make_shared<CaseData>(constant_target_data());

  spec.names = {"misfit_norm", "state_norm", "control_norm", "cost"};
  spec.integrand = [mesh, data, params, alpha, inner_tol, opts, copts,
                    box](const std::vector<double>& t)
      -> std::optional<std::vector<double>> {
    const auto omega = map_to_box({t}, box).front();
    try {
      auto inst = make_instance(*mesh, gasket_level_set(omega[0], omega[1]),
                                params, alpha, *data, copts);
      inst->problem.cg_tol = inner_tol;
      auto precond = make_sgs(inst->problem.k);
      StateSolver solver(inst->problem, precond.get());
      OptimalTriple triple = optimize(inst->problem, solver, opts);
      const ScalarField zero = [](Vec2) { return 0.0; };
      const double misfit = measure_error(inst->space, inst->topo, params,
                                          triple.y, data->y_d, nullptr,
                                          NormKind::L2);
      const double state_norm = measure_error(inst->space, inst->topo, params,
                                              triple.y, zero, nullptr, NormKind::L2);
      const double control_norm = measure_error(
          inst->space, inst->topo, params, triple.u, zero, nullptr, NormKind::L2);
      return std::vector<double>{misfit, state_norm, control_norm, triple.cost};
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  return spec;
}

int run_qmc(Config& config, const std::string& out_dir, bool randomized) {
  Box box;
  if (randomized) {
    box.lo = config.get_double_list("box_lo", {9.0, 2.0});
    box.hi = config.get_double_list("box_hi", {9.25, 2.25});
  } else {
    box.lo = config.get_double_list("box_lo", {9.0, 2.0});
    box.hi = config.get_double_list("box_hi", {12.0, 3.0});
  }
  EstimateOptions base;
  base.z = config.get_uint_list("z", {1, 127});
  base.shift_count = config.get_int("q", 16);
  base.seed = config.get_uint64("seed", 2026);
  base.threads = config.get_int("threads", 1);
  const auto n_list = config.get_uint_list("n_list", {32, 128, 512, 1024});
  const int mc_seeds = config.get_int("mc_seeds", 3);
  const std::size_t dim = base.z.size();

  std::uint64_t failure_total = 0;
  QoiSpec spec = make_integrand(config, box);
  CsvWriter csv(out_dir + (randomized ? "/qmc_randomized.csv" : "/qmc.csv"),
                {"sampler", "N", "q", "qoi", "mean", "variance", "abs_error",
                 "rel_error", "rms"});

  nlohmann::json summary;
  if (randomized) {
    base.sampler = SamplerKind::ShiftedLattice;
    auto rows = convergence_study(spec.integrand, dim, n_list, base);
    for (const auto& row : rows) {
      failure_total += row.failed_samples;
      for (std::size_t i = 0; i < spec.names.size(); ++i)
        csv.write_row({"shifted_lattice", std::to_string(row.n),
                       std::to_string(base.shift_count), spec.names[i],
                       format_number(row.mean[i]), format_number(row.variance[i]),
                       format_number(row.mean_abs_error[i]),
                       format_number(row.mean_rel_error[i]),
                       format_number(row.rms[i])});
    }
    summary["failed_samples"] = failure_total;
    write_run_record(config, out_dir, summary);
    if (failure_total > 0)
      std::cout << "warning: " << failure_total << " failed sample(s) excluded\n";
    return 0;
  }

  // Deterministic study: plain lattice rows plus seed-averaged Monte Carlo
  // rows against a shared reference.
  std::vector<EstimateResult> lattice(n_list.size());
  for (std::size_t j = 0; j < n_list.size(); ++j) {
    EstimateOptions opt = base;
    opt.sampler = SamplerKind::Lattice;
    opt.n = n_list[j];
    lattice[j] = estimate(spec.integrand, dim, opt);
    failure_total += lattice[j].failed_samples;
    if (lattice[j].failed_samples > 0)
      std::cout << "lattice N=" << n_list[j] << ": " << lattice[j].failed_samples
                << " failed sample(s)\n";
  }
  const std::vector<double> ref_mean =
      spec.exact_mean.empty() ? lattice.back().mean : spec.exact_mean;

  for (std::size_t j = 0; j < n_list.size(); ++j) {
    for (std::size_t i = 0; i < spec.names.size(); ++i) {
      const double abs_err = std::fabs(lattice[j].mean[i] - ref_mean[i]);
      const double rel_err =
          ref_mean[i] != 0.0 ? abs_err / std::fabs(ref_mean[i]) : abs_err;
      csv.write_row({"lattice", std::to_string(n_list[j]), "",
                     spec.names[i], format_number(lattice[j].mean[i]),
                     format_number(lattice[j].variance[i]), format_number(abs_err),
                     format_number(rel_err), ""});
    }
  }

  for (std::size_t j = 0; j < n_list.size(); ++j) {
    std::vector<double> mean(spec.names.size(), 0.0),
        var(spec.names.size(), 0.0), abs_err(spec.names.size(), 0.0);
    for (int s = 0; s < mc_seeds; ++s) {
      EstimateOptions opt = base;
      opt.sampler = SamplerKind::MonteCarlo;
      opt.n = n_list[j];
      opt.seed = base.seed + 1000003ull * static_cast<std::uint64_t>(s + 1);
      auto est = estimate(spec.integrand, dim, opt);
      failure_total += est.failed_samples;
      for (std::size_t i = 0; i < spec.names.size(); ++i) {
        mean[i] += est.mean[i];
        var[i] += est.variance[i];
        abs_err[i] += std::fabs(est.mean[i] - ref_mean[i]);
      }
    }
    for (std::size_t i = 0; i < spec.names.size(); ++i) {
      mean[i] /= mc_seeds;
      var[i] /= mc_seeds;
      abs_err[i] /= mc_seeds;
      const double rel_err =
          ref_mean[i] != 0.0 ? abs_err[i] / std::fabs(ref_mean[i]) : abs_err[i];
      csv.write_row({"mc", std::to_string(n_list[j]), "", spec.names[i],
                     format_number(mean[i]), format_number(var[i]),
                     format_number(abs_err[i]), format_number(rel_err), ""});
    }
  }
  summary["failed_samples"] = failure_total;
  write_run_record(config, out_dir, summary);
  if (failure_total > 0)
    std::cout << "warning: " << failure_total << " failed sample(s) excluded\n";
  return 0;
}

int run_geometry_dump(Config& config, const std::string& out_dir) {
  GeometrySetup geom = make_geometry(config);
  const AssemblyParams params = make_params(config);
  BackgroundMesh mesh = build_structured_mesh(geom.box, geom.mesh_n);
  CutTopology topo = classify_elements(mesh, geom.level_set, make_classify_options(config));
  dump_mesh(mesh, out_dir + "/mesh.txt");
  dump_element_classes(topo, out_dir + "/classes.txt");
  dump_interface(topo, out_dir + "/interface.txt");

  nlohmann::json summary = {
      {"elements", mesh.num_triangles()},
      {"cut_elements", topo.cut_data.size()},
      {"isolated_cut_elements", topo.isolated_cut_elements.size()},
  };
  if (config.get_int("solve", 0) != 0) {
    const double alpha = config.get_double("alpha", 0.1);
    const CaseData data =
        geom.has_exact ? circle_benchmark_data(alpha) : constant_target_data();
    auto inst = make_instance(mesh, geom.level_set, params, alpha, data,
                              make_classify_options(config));
    inst->problem.cg_tol = config.get_double("inner_tol", 1e-8);
    auto precond = make_sgs(inst->problem.k);
    StateSolver solver(inst->problem, precond.get());
    OptimizeOptions opts;
    opts.tolerance = config.get_double("outer_tol", 1e-6);
    opts.max_outer = config.get_int("max_outer", 500);
    OptimalTriple triple = optimize(inst->problem, solver, opts);
    dump_nodal_field(inst->space, triple.y, out_dir + "/y.txt");
    dump_nodal_field(inst->space, triple.p, out_dir + "/p.txt");
    dump_nodal_field(inst->space, triple.u, out_dir + "/u.txt");
    summary["cost"] = triple.cost;
    summary["dofs"] = inst->space.num_dofs();
  }
  write_run_record(config, out_dir, summary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CutFEM distributed optimal control experiment runner"};
  std::string config_path;
  app.add_option("-c,--config", config_path, "key=value config file")
      ->required()
      ->check(CLI::ExistingFile);
  std::string experiment_flag;
  app.add_option("-e,--experiment", experiment_flag,
                 "override the experiment kind");
  std::string out_dir = ".";
  app.add_option("-o,--out", out_dir, "output directory");
  std::vector<std::string> overrides;
  app.add_option("--set", overrides, "config override key=value");
  std::int64_t seed_flag = -1;
  app.add_option("--seed", seed_flag, "seed override");
  int threads_flag = 0;
  app.add_option("--threads", threads_flag, "parallel sample evaluations");
  CLI11_PARSE(app, argc, argv);

  try {
    auto kv = cutfem::read_config(config_path);
    for (const auto& o : overrides) cutfem::apply_override(kv, o);
    if (!experiment_flag.empty()) kv["experiment"] = experiment_flag;
    if (seed_flag >= 0) kv["seed"] = std::to_string(seed_flag);
    if (threads_flag > 0) kv["threads"] = std::to_string(threads_flag);
    Config config(std::move(kv));

    std::filesystem::create_directories(out_dir);
    const std::string experiment = config.get_string("experiment", "");
    if (experiment.empty())
      throw cutfem::Error("config must set 'experiment'");

    int rc = 0;
    if (experiment == "converge")
      rc = run_converge(config, out_dir);
    else if (experiment == "precond")
      rc = run_precond(config, out_dir);
    else if (experiment == "qmc_deterministic")
      rc = run_qmc(config, out_dir, false);
    else if (experiment == "qmc_randomized")
      rc = run_qmc(config, out_dir, true);
    else if (experiment == "geometry_dump")
      rc = run_geometry_dump(config, out_dir);
    else
      throw cutfem::Error("unknown experiment '" + experiment + "'");
    config.warn_unused(std::cerr);
    return rc;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
