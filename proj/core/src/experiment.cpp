#include "subqaoa/experiment.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <map>
#include <sstream>
#include <thread>

#include "subqaoa/errors.hpp"
#include "subqaoa/symmetry.hpp"
#include "subqaoa/version.hpp"

namespace subqaoa {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  std::vector<std::string> families;
  for (GraphFamily f : c.families) families.push_back(family_name(f));
  j["families"] = families;
  j["sizes"] = c.sizes;
  j["k_grid"] = c.k_grid;
  j["constraint_size"] = c.constraint_size;
  j["layers"] = c.layers;
  j["restarts"] = c.restarts;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["cert_tol"] = c.cert_tol;
  j["dense_limit"] = c.dense_limit;
  j["workers"] = c.workers;
  j["fast_path"] = c.fast_path;
  j["negative_control"] = c.negative_control;
  j["lemma1_draws"] = c.lemma1_draws;
  j["lemma1_max_n"] = c.lemma1_max_n;
  j["irreducibility_size"] = c.irreducibility_size;
  j["intertwine_every_trial_max_m"] = c.intertwine_every_trial_max_m;
  return j;
}

struct InstanceDesc {
  GraphFamily family;
  int n;
  int k;  // -1: unconstrained
};

std::vector<InstanceDesc> instance_grid(const ExperimentConfig& c) {
  std::vector<InstanceDesc> grid;
  for (GraphFamily f : c.families) {
    for (int n : c.sizes) grid.push_back({f, n, -1});
  }
  for (int k : c.k_grid) grid.push_back({GraphFamily::ErdosRenyi, c.constraint_size, k});
  return grid;
}

std::uint64_t instance_seed_for(const ExperimentConfig& c, GraphFamily family, int n) {
  // The constraint sweep reuses the unconstrained graph of the same (family, n).
  return derive_seed(c.seed, {fnv1a64(family_name(family)), static_cast<std::uint64_t>(n)});
}

double weight_sector_leak(const Vec& state, int n, int k) {
  double leak = 0.0;
  const std::uint64_t dim = 1ULL << n;
  for (std::uint64_t x = 0; x < dim; ++x) {
    if (std::popcount(x) != k) leak += std::norm(state[x]);
  }
  return leak;
}

ReducedSystem relaxed_induce(const OperatorSum& hc, const OperatorSum& hm,
                             const Isometry& iso, const Vec& psi0) {
  // Negative-control variant: symmetrizes and normalizes unconditionally so
  // that a corrupted isometry still yields a runnable reduced system.
  ReducedSystem sys;
  sys.n = iso.n;
  sys.m = iso.m;
  sys.M = iso.M;
  for (auto [h, target] : {std::pair{&hc, &sys.hc_red}, std::pair{&hm, &sys.hm_red}}) {
    const Mat image = apply_columns(*h, iso.v);
    Mat reduced = iso.v.adjoint() * image;
    *target = 0.5 * (reduced + reduced.adjoint().eval());
  }
  sys.psi0_red = isometry_adjoint_apply(iso, psi0);
  sys.psi0_red /= sys.psi0_red.norm();
  return sys;
}

struct InstancePipeline {
  OperatorSum hc;
  OperatorSum hm;
  Vec psi0;
  InvariantSubspace sub;
  Isometry iso;
};

InstancePipeline build_pipeline(const ExperimentConfig& config, GraphFamily family,
                                int n, int k, std::uint64_t instance_seed,
                                GraphInstance* graph_out = nullptr) {
  const GraphInstance graph = make_graph(family, n, instance_seed);
  if (graph_out) *graph_out = graph;
  const ConstraintSpec constraint =
      k >= 0 ? ConstraintSpec{ConstraintKind::HammingWeight, k} : ConstraintSpec{};
  const QuboInstance qubo = maxcut_to_qubo(graph);
  InstancePipeline p{cost_hamiltonian(qubo, config.dense_limit),
                     mixer_hamiltonian(n, constraint),
                     initial_state(n, constraint),
                     {},
                     {}};
  ClosureOptions closure_opts;
  closure_opts.allow_dicke_fast_path = config.fast_path;
  p.sub = krylov_closure(p.hc, p.hm, p.psi0, closure_opts);
  p.iso = build_isometry(p.sub);
  return p;
}

InstanceRecord process_instance(const ExperimentConfig& config, const InstanceDesc& desc) {
  InstanceRecord rec;
  rec.family = family_name(desc.family);
  rec.n = desc.n;
  rec.k = desc.k;
  rec.instance_seed = instance_seed_for(config, desc.family, desc.n);
  try {
    const auto reduce_start = Clock::now();
    const GraphInstance graph = make_graph(desc.family, desc.n, rec.instance_seed);
    const ConstraintSpec constraint =
        desc.k >= 0 ? ConstraintSpec{ConstraintKind::HammingWeight, desc.k}
                    : ConstraintSpec{};
    const QuboInstance qubo = maxcut_to_qubo(graph);
    const OperatorSum hc = cost_hamiltonian(qubo, config.dense_limit);
    const OperatorSum hm = mixer_hamiltonian(desc.n, constraint);
    const Vec psi0 = initial_state(desc.n, constraint);

    const RVec table = objective_table(qubo);
    const RVec diag = diagonal_of(hc);
    rec.hc_diag_residual = (diag - table).cwiseAbs().maxCoeff();
    rec.brute_min = table.minCoeff();

    ClosureOptions closure_opts;
    closure_opts.allow_dicke_fast_path = config.fast_path;
    const InvariantSubspace sub = krylov_closure(hc, hm, psi0, closure_opts);
    Isometry iso = build_isometry(sub);
    ReducedSystem red;
    if (config.negative_control) {
      iso = corrupt_isometry_column(iso, 0, 1e-3);
      red = relaxed_induce(hc, hm, iso, psi0);
    } else {
      red = induce_hamiltonians(hc, hm, iso, psi0);
    }
    rec.wall_reduce_s = elapsed(reduce_start);
    rec.M = sub.dimension;
    rec.m = iso.m;
    rec.dim_full = 1ULL << desc.n;
    rec.dim_reduced = 1ULL << iso.m;
    rec.reduction_method = sub.log.method;

    EvolverLimits limits;
    limits.dense_limit = config.dense_limit;
    const FullEvolver full(hc, hm, limits);
    const ReducedEvolver reduced(red);

    const std::uint64_t famtag = fnv1a64(rec.family);
    const auto ntag = static_cast<std::uint64_t>(desc.n);
    const auto ktag = static_cast<std::uint64_t>(desc.k + 1);

    for (int trial = 0; trial < config.trials; ++trial) {
      TrialRecord t;
      t.trial = trial;
      t.seed = derive_seed(config.seed, {famtag, ntag, ktag, 1000 + static_cast<std::uint64_t>(trial)});
      SplitMix64 rng(t.seed);
      const QaoaParams params = draw_params(config.layers, rng);

      CertifyOptions cert_opts;
      cert_opts.with_intertwining =
          (sub.dimension <= config.intertwine_every_trial_max_m) || trial == 0;
      t.report = certify_pair(full, psi0, reduced, iso, params, cert_opts);

      const EvolutionResult full_res = full.evolve(psi0, params);
      const EvolutionResult red_res = reduced.evolve(params);
      t.energy_full = full_res.energy;
      t.energy_reduced = red_res.energy;
      t.wall_full_s = full_res.wall_seconds;
      t.wall_reduced_s = red_res.wall_seconds;
      if (desc.k >= 0) {
        t.weight_leak = weight_sector_leak(full_res.final_state, desc.n, desc.k);
      }
      const ExclusionReport excl = certify_orthogonal_exclusion(sub, full_res);
      t.exclusion_states = excl.excluded_count;
      t.exclusion_worst = excl.worst_probability;
      rec.trials.push_back(std::move(t));
    }

    const std::uint64_t opt_seed = derive_seed(config.seed, {famtag, ntag, ktag, 555});
    const OptimizationRun best_full = optimize(
        [&](const QaoaParams& p) { return full.energy(full.evolve_state(psi0, p)); },
        config.layers, config.restarts, opt_seed);
    const OptimizationRun best_red = optimize(
        [&](const QaoaParams& p) {
          return reduced.energy(reduced.evolve_state(red.psi0_red, p));
        },
        config.layers, config.restarts, opt_seed);
    rec.best_energy_full = best_full.best_energy;
    rec.best_energy_reduced = best_red.best_energy;
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  return rec;
}

ExtraChecks::Lemma1 lemma1_check(const ExperimentConfig& config, const InstanceDesc& desc) {
  ExtraChecks::Lemma1 out;
  const std::uint64_t seed = instance_seed_for(config, desc.family, desc.n);
  InstancePipeline p = build_pipeline(config, desc.family, desc.n, desc.k, seed);
  out.instance = family_name(desc.family) + "_n" + std::to_string(desc.n);
  out.draws = config.lemma1_draws;
  EvolverLimits limits;
  limits.dense_limit = config.dense_limit;
  const FullEvolver full(p.hc, p.hm, limits);
  const Mat projector = subspace_projector(p.sub);
  SplitMix64 rng(derive_seed(config.seed, {fnv1a64("lemma1"), fnv1a64(out.instance)}));
  for (int d = 0; d < config.lemma1_draws; ++d) {
    const QaoaParams params = draw_params(config.layers, rng);
    const Mat u = assemble_dense_unitary(full, params);
    out.max_residual = std::max(out.max_residual, commutation_residual(projector, u));
  }
  return out;
}

ExtraChecks::Irreducibility irreducibility_check(std::uint64_t seed, int n) {
  ExtraChecks::Irreducibility out;
  out.seed = seed;
  out.n = n;
  SplitMix64 rng(seed);
  RMat w(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      w(i, j) = rng.next_uniform(-1.0, 1.0);
      w(j, i) = w(i, j);
    }
  }
  RVec c(n);
  for (int i = 0; i < n; ++i) c[i] = rng.next_uniform(-1.0, 1.0);
  const QuboInstance qubo = make_qubo(n, std::move(w), std::move(c), 0.0);
  const OperatorSum hc = cost_hamiltonian(qubo);
  const OperatorSum hm = mixer_hamiltonian(n, {});
  out.commutant_dim = commutant_nullspace(hc, hm).dimension;
  out.closure_dim = krylov_closure(hc, hm, initial_state(n, {})).dimension;
  out.agree = (out.commutant_dim == 1) && (out.closure_dim == (1 << n));
  return out;
}

ExtraChecks::NegativeControl negative_control_check(const ExperimentConfig& config) {
  ExtraChecks::NegativeControl out;
  out.epsilon = 1e-3;
  const int n = 6;
  const std::uint64_t seed = instance_seed_for(config, GraphFamily::Complete, n);
  InstancePipeline p = build_pipeline(config, GraphFamily::Complete, n, -1, seed);
  SplitMix64 rng(derive_seed(config.seed, {fnv1a64("negative_control")}));
  const QaoaParams params = draw_params(config.layers, rng);
  const EquivalenceReport report =
      corrupted_reduction_certificate(p.hc, p.hm, p.psi0, p.iso, params, out.epsilon);
  out.max_metric = std::max({std::abs(report.fidelity_offset), report.delta_e,
                             report.tvd, report.intertwine_max_column,
                             report.lemma2_vtv, report.lemma2_vvt});
  out.detected = out.max_metric >= 1e-6;
  return out;
}

const char* kCsvHeader =
    "family,n,k,trial,M,m,dim_full,dim_reduced,method,"
    "fidelity_offset,delta_e,tvd,intertwine_max_column,intertwine_frobenius,"
    "lemma2_vtv,lemma2_vvt,weight_leak,energy_full,energy_reduced,"
    "best_energy_full,best_energy_reduced,brute_min,hc_diag_residual,"
    "wall_full_s,wall_reduced_s,wall_reduce_s";

std::string results_csv(const std::vector<InstanceRecord>& instances) {
  std::ostringstream os;
  os << kCsvHeader << "\n";
  for (const auto& rec : instances) {
    if (!rec.error.empty()) continue;
    for (const auto& t : rec.trials) {
      os << rec.family << ',' << rec.n << ',' << rec.k << ',' << t.trial << ','
         << rec.M << ',' << rec.m << ',' << rec.dim_full << ',' << rec.dim_reduced
         << ',' << rec.reduction_method << ',' << fmt(t.report.fidelity_offset)
         << ',' << fmt(t.report.delta_e) << ',' << fmt(t.report.tvd) << ','
         << fmt(t.report.intertwine_max_column) << ','
         << fmt(t.report.intertwine_residual) << ',' << fmt(t.report.lemma2_vtv)
         << ',' << fmt(t.report.lemma2_vvt) << ',' << fmt(t.weight_leak) << ','
         << fmt(t.energy_full) << ',' << fmt(t.energy_reduced) << ','
         << fmt(rec.best_energy_full) << ',' << fmt(rec.best_energy_reduced)
         << ',' << fmt(rec.brute_min) << ',' << fmt(rec.hc_diag_residual) << ','
         << fmt(t.wall_full_s) << ',' << fmt(t.wall_reduced_s) << ','
         << fmt(rec.wall_reduce_s) << "\n";
    }
  }
  return os.str();
}

json trial_to_json(const TrialRecord& t) {
  json j;
  j["trial"] = t.trial;
  j["seed"] = t.seed;
  j["gammas"] = t.report.params.gammas;
  j["betas"] = t.report.params.betas;
  j["fidelity_offset"] = t.report.fidelity_offset;
  j["delta_e"] = t.report.delta_e;
  j["tvd"] = t.report.tvd;
  j["intertwine_max_column"] = t.report.intertwine_max_column;
  j["intertwine_frobenius"] = t.report.intertwine_residual;
  j["lemma2_vtv"] = t.report.lemma2_vtv;
  j["lemma2_vvt"] = t.report.lemma2_vvt;
  j["weight_leak"] = t.weight_leak;
  j["exclusion_states"] = t.exclusion_states;
  j["exclusion_worst"] = t.exclusion_worst;
  j["energy_full"] = t.energy_full;
  j["energy_reduced"] = t.energy_reduced;
  j["wall_full_s"] = t.wall_full_s;
  j["wall_reduced_s"] = t.wall_reduced_s;
  return j;
}

json summary_json(const ExperimentConfig& config, const std::vector<InstanceRecord>& instances) {
  json j;
  j["schema_version"] = kCsvSchemaVersion;
  j["library_version"] = kVersion;
  j["config"] = config_to_json(config);
  json list = json::array();
  for (const auto& rec : instances) {
    json ji;
    ji["family"] = rec.family;
    ji["n"] = rec.n;
    ji["k"] = rec.k;
    ji["instance_seed"] = rec.instance_seed;
    if (!rec.error.empty()) {
      ji["error"] = rec.error;
      list.push_back(std::move(ji));
      continue;
    }
    ji["M"] = rec.M;
    ji["m"] = rec.m;
    ji["dim_full"] = rec.dim_full;
    ji["dim_reduced"] = rec.dim_reduced;
    ji["method"] = rec.reduction_method;
    ji["hc_diag_residual"] = rec.hc_diag_residual;
    ji["brute_min"] = rec.brute_min;
    ji["best_energy_full"] = rec.best_energy_full;
    ji["best_energy_reduced"] = rec.best_energy_reduced;
    ji["wall_reduce_s"] = rec.wall_reduce_s;
    json trials = json::array();
    for (const auto& t : rec.trials) trials.push_back(trial_to_json(t));
    ji["trials"] = std::move(trials);
    list.push_back(std::move(ji));
  }
  j["instances"] = std::move(list);
  return j;
}

json checks_json(const ExtraChecks& checks) {
  json j;
  json lemma1 = json::array();
  for (const auto& l : checks.lemma1) {
    lemma1.push_back({{"instance", l.instance},
                      {"draws", l.draws},
                      {"max_residual", l.max_residual}});
  }
  j["lemma1"] = std::move(lemma1);
  json irr = json::array();
  for (const auto& i : checks.irreducibility) {
    irr.push_back({{"seed", i.seed},
                   {"n", i.n},
                   {"commutant_dim", i.commutant_dim},
                   {"closure_dim", i.closure_dim},
                   {"agree", i.agree}});
  }
  j["irreducibility"] = std::move(irr);
  j["negative_control"] = {{"epsilon", checks.negative_control.epsilon},
                           {"max_metric", checks.negative_control.max_metric},
                           {"detected", checks.negative_control.detected}};
  return j;
}

std::string fig1_csv(const std::vector<InstanceRecord>& instances) {
  std::ostringstream os;
  os << "family,n,original_qubits,reduced_qubits\n";
  for (const auto& rec : instances) {
    if (!rec.error.empty() || rec.k >= 0) continue;
    os << rec.family << ',' << rec.n << ',' << rec.n << ',' << rec.m << "\n";
  }
  return os.str();
}

std::string fig2_csv(const std::vector<InstanceRecord>& instances) {
  std::ostringstream os;
  os << "k,M,m\n";
  for (const auto& rec : instances) {
    if (!rec.error.empty() || rec.k < 0) continue;
    os << rec.k << ',' << rec.M << ',' << rec.m << "\n";
  }
  return os.str();
}

std::string fig34_csv(const std::vector<InstanceRecord>& instances, bool constrained) {
  std::ostringstream os;
  os << (constrained ? "k,trial,fidelity_offset,delta_e,tvd\n"
                     : "family,n,trial,fidelity_offset,delta_e,tvd\n");
  for (const auto& rec : instances) {
    if (!rec.error.empty() || (rec.k >= 0) != constrained) continue;
    for (const auto& t : rec.trials) {
      if (constrained) {
        os << rec.k;
      } else {
        os << rec.family << ',' << rec.n;
      }
      os << ',' << t.trial << ',' << fmt(t.report.fidelity_offset) << ','
         << fmt(t.report.delta_e) << ',' << fmt(t.report.tvd) << "\n";
    }
  }
  return os.str();
}

std::string fig5_csv(const std::vector<InstanceRecord>& instances) {
  std::ostringstream os;
  os << "family,n,k,dim_full,dim_reduced,bytes_full,bytes_reduced,subspace_dim,effective_ratio\n";
  for (const auto& rec : instances) {
    if (!rec.error.empty()) continue;
    const MemoryRecord mem = memory_report(rec.n, rec.m, static_cast<std::uint64_t>(rec.M));
    os << rec.family << ',' << rec.n << ',' << rec.k << ',' << mem.dim_full << ','
       << mem.dim_reduced << ',' << fmt(mem.bytes_full) << ','
       << fmt(mem.bytes_reduced) << ',' << mem.subspace_dim << ','
       << fmt(mem.effective_ratio) << "\n";
  }
  return os.str();
}

}  // namespace

std::string InstanceRecord::label() const {
  std::string s = family + "_n" + std::to_string(n);
  if (k >= 0) s += "_k" + std::to_string(k);
  return s;
}

std::string default_output_root() {
  if (const char* env = std::getenv("SUBQAOA_OUT"); env && *env) return env;
  return "subqaoa_runs";
}

MemoryRecord memory_report(int n, int m, std::uint64_t subspace_dim) {
  MemoryRecord rec;
  rec.n = n;
  rec.m = m;
  rec.dim_full = 1ULL << n;
  rec.dim_reduced = 1ULL << m;
  rec.bytes_full = 16.0 * static_cast<double>(rec.dim_full);
  rec.bytes_reduced = 16.0 * static_cast<double>(rec.dim_reduced);
  rec.dim_ratio = std::ldexp(1.0, n - m);
  rec.subspace_dim = subspace_dim;
  rec.effective_ratio = compression_ratio(n, subspace_dim);
  return rec;
}

EquivalenceReport corrupted_reduction_certificate(const OperatorSum& hc,
                                                  const OperatorSum& hm,
                                                  const Vec& psi0,
                                                  const Isometry& iso,
                                                  const QaoaParams& params,
                                                  double epsilon) {
  const Isometry bad = corrupt_isometry_column(iso, 0, epsilon);
  const ReducedSystem red = relaxed_induce(hc, hm, bad, psi0);
  const FullEvolver full(hc, hm);
  const ReducedEvolver reduced(red);
  return certify_pair(full, psi0, reduced, bad, params);
}

RunManifest run_experiment(const ExperimentConfig& config) {
  RunManifest manifest;
  fs::path out = config.out_dir.empty()
                     ? fs::path(default_output_root()) /
                           ("run_seed" + std::to_string(config.seed))
                     : fs::path(config.out_dir);
  fs::create_directories(out / "instances");
  manifest.out_dir = out.string();

  const std::vector<InstanceDesc> grid = instance_grid(config);
  manifest.instances.resize(grid.size());

  const int workers = std::max(1, config.workers);
  if (workers == 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      manifest.instances[i] = process_instance(config, grid[i]);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < grid.size(); i = next.fetch_add(1)) {
          manifest.instances[i] = process_instance(config, grid[i]);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  // Standalone checks: projector/unitary commutation at small n,
  // irreducibility of generic QUBOs, and the corrupted-isometry control.
  for (const auto& desc : grid) {
    if (desc.k >= 0 || desc.n > config.lemma1_max_n) continue;
    manifest.checks.lemma1.push_back(lemma1_check(config, desc));
  }
  for (int i = 0; i < 10; ++i) {
    const std::uint64_t seed =
        derive_seed(config.seed, {fnv1a64("irreducibility"), static_cast<std::uint64_t>(i)});
    manifest.checks.irreducibility.push_back(
        irreducibility_check(seed, config.irreducibility_size));
  }
  manifest.checks.negative_control = negative_control_check(config);

  // Per-instance artifacts.
  json instances_meta = json::array();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const InstanceDesc& desc = grid[i];
    const InstanceRecord& rec = manifest.instances[i];
    json meta;
    meta["label"] = rec.label();
    meta["family"] = rec.family;
    meta["n"] = rec.n;
    meta["k"] = rec.k;
    meta["status"] = rec.error.empty() ? "ok" : ("error: " + rec.error);
    json trial_seeds = json::array();
    for (const auto& t : rec.trials) trial_seeds.push_back(t.seed);
    meta["trial_seeds"] = std::move(trial_seeds);

    const std::string inst_rel = "instances/" + rec.label() + ".json";
    try {
      ProblemSpec spec;
      spec.n = rec.n;
      spec.graph = make_graph(desc.family, desc.n, rec.instance_seed);
      if (desc.k >= 0) spec.constraint = {ConstraintKind::HammingWeight, desc.k};
      save_instance((out / inst_rel).string(), spec);
      meta["instance_file"] = inst_rel;
    } catch (const std::exception&) {
      meta["instance_file"] = nullptr;
    }

    meta["subspace_file"] = nullptr;
    if (rec.error.empty()) {
      const std::uint64_t entries = rec.dim_full * static_cast<std::uint64_t>(rec.M);
      if (entries <= config.subspace_artifact_entry_limit && !config.negative_control) {
        try {
          InstancePipeline p =
              build_pipeline(config, desc.family, desc.n, desc.k, rec.instance_seed);
          const std::string sub_rel = "instances/" + rec.label() + "_subspace.json";
          save_subspace((out / sub_rel).string(), p.sub);
          meta["subspace_file"] = sub_rel;
        } catch (const std::exception&) {
          // artifact is best-effort; the CSV row is authoritative
        }
      } else {
        meta["subspace_skipped"] = "artifact exceeds entry limit";
      }
    }
    instances_meta.push_back(std::move(meta));
  }

  // Reports.
  std::map<std::string, std::string> files;
  files["results_csv"] = "results.csv";
  files["summary"] = "summary.json";
  files["checks"] = "checks.json";
  files["fig1_qubit_reduction"] = "fig1_qubit_reduction.csv";
  files["fig2_constraint_sweep"] = "fig2_constraint_sweep.csv";
  files["fig3_equivalence_families"] = "fig3_equivalence_families.csv";
  files["fig4_equivalence_constraint"] = "fig4_equivalence_constraint.csv";
  files["fig5_memory"] = "fig5_memory.csv";

  write_file((out / files["results_csv"]).string(), results_csv(manifest.instances));
  write_file((out / files["summary"]).string(),
             summary_json(config, manifest.instances).dump(2) + "\n");
  write_file((out / files["checks"]).string(), checks_json(manifest.checks).dump(2) + "\n");
  write_file((out / files["fig1_qubit_reduction"]).string(), fig1_csv(manifest.instances));
  write_file((out / files["fig2_constraint_sweep"]).string(), fig2_csv(manifest.instances));
  write_file((out / files["fig3_equivalence_families"]).string(),
             fig34_csv(manifest.instances, false));
  write_file((out / files["fig4_equivalence_constraint"]).string(),
             fig34_csv(manifest.instances, true));
  write_file((out / files["fig5_memory"]).string(), fig5_csv(manifest.instances));

  json jm;
  jm["schema_version"] = kCsvSchemaVersion;
  jm["library_version"] = kVersion;
  jm["created_utc"] = utc_now();
  jm["config"] = config_to_json(config);
  jm["config_checksum"] = fnv1a64(config_to_json(config).dump());
  jm["instances"] = std::move(instances_meta);
  json jfiles;
  json checksums;
  for (const auto& [key, rel] : files) {
    jfiles[key] = rel;
    checksums[rel] = file_checksum((out / rel).string());
  }
  jm["files"] = std::move(jfiles);
  jm["checksums"] = std::move(checksums);

  manifest.manifest_path = (out / "manifest.json").string();
  write_file(manifest.manifest_path, jm.dump(2) + "\n");
  return manifest;
}

// ---------------------------------------------------------------------------
// audit

namespace {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    throw IoError("missing CSV column '" + name + "'");
  }
};

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (first) {
      table.header = std::move(cells);
      first = false;
    } else {
      table.rows.push_back(std::move(cells));
    }
  }
  return table;
}

struct Criterion {
  std::string name;
  bool passed;
  std::string message;
};

}  // namespace

std::string AuditResult::summary() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < names.size(); ++i) {
    os << (verdicts[i] ? "PASS" : "FAIL") << "  " << names[i];
    if (!messages[i].empty()) os << "  (" << messages[i] << ")";
    os << "\n";
  }
  os << (passed ? "audit: all criteria passed" : "audit: FAILURES present") << "\n";
  return os.str();
}

AuditResult audit(const std::string& manifest_path) {
  std::vector<Criterion> criteria;
  auto add = [&](const std::string& name, bool ok, const std::string& msg = "") {
    criteria.push_back({name, ok, msg});
  };

  const fs::path dir = fs::path(manifest_path).parent_path();
  json jm;
  try {
    jm = json::parse(read_file(manifest_path));
  } catch (const std::exception& e) {
    AuditResult res;
    res.passed = false;
    res.names = {"manifest_integrity"};
    res.verdicts = {false};
    res.messages = {e.what()};
    return res;
  }

  // File presence and checksums.
  {
    bool ok = true;
    std::string msg;
    for (const auto& [rel, expected] : jm.at("checksums").items()) {
      const fs::path p = dir / rel;
      if (!fs::exists(p)) {
        ok = false;
        msg = "missing file " + rel;
        break;
      }
      if (file_checksum(p.string()) != expected.get<std::string>()) {
        ok = false;
        msg = "checksum mismatch for " + rel;
        break;
      }
    }
    add("manifest_integrity", ok, msg);
  }

  bool instances_ok = true;
  std::string instances_msg;
  for (const auto& meta : jm.at("instances")) {
    if (meta.at("status").get<std::string>() != "ok") {
      instances_ok = false;
      instances_msg = meta.at("label").get<std::string>() + " " +
                      meta.at("status").get<std::string>();
      break;
    }
  }

  AuditResult result;
  CsvTable table;
  json checks;
  double cert_tol = 1e-10;
  int constraint_size = 12;
  bool config_has_complete = false;
  bool config_has_er = false;
  bool config_has_k12_complete = false;
  bool config_has_sweep = false;
  bool config_has_er_ge6 = false;
  try {
    table = parse_csv(read_file((dir / jm.at("files").at("results_csv").get<std::string>()).string()));
    checks = json::parse(read_file((dir / jm.at("files").at("checks").get<std::string>()).string()));
    const json& cfg = jm.at("config");
    cert_tol = cfg.at("cert_tol").get<double>();
    constraint_size = cfg.at("constraint_size").get<int>();
    bool has_12 = false;
    bool has_ge6 = false;
    for (const auto& n : cfg.at("sizes")) {
      if (n.get<int>() == 12) has_12 = true;
      if (n.get<int>() >= 6) has_ge6 = true;
    }
    for (const auto& f : cfg.at("families")) {
      const std::string name = f.get<std::string>();
      if (name == "complete") config_has_complete = true;
      if (name == "erdos_renyi") config_has_er = true;
    }
    config_has_k12_complete = config_has_complete && has_12;
    config_has_er_ge6 = config_has_er && has_ge6;
    config_has_sweep = !cfg.at("k_grid").empty();
  } catch (const std::exception& e) {
    add("row_integrity", false, e.what());
    for (const auto& c : criteria) {
      result.names.push_back(c.name);
      result.verdicts.push_back(c.passed);
      result.messages.push_back(c.message);
    }
    result.passed = false;
    return result;
  }

  const int c_family = table.column("family");
  const int c_n = table.column("n");
  const int c_k = table.column("k");
  const int c_M = table.column("M");
  const int c_m = table.column("m");
  const int c_dim_full = table.column("dim_full");
  const int c_dim_red = table.column("dim_reduced");
  const int c_fid = table.column("fidelity_offset");
  const int c_de = table.column("delta_e");
  const int c_tvd = table.column("tvd");
  const int c_imax = table.column("intertwine_max_column");
  const int c_vtv = table.column("lemma2_vtv");
  const int c_vvt = table.column("lemma2_vvt");
  const int c_leak = table.column("weight_leak");
  const int c_efull = table.column("energy_full");
  const int c_bfull = table.column("best_energy_full");
  const int c_bred = table.column("best_energy_reduced");
  const int c_brute = table.column("brute_min");
  const int c_diag = table.column("hc_diag_residual");

  auto num = [](const std::string& s) { return std::strtod(s.c_str(), nullptr); };
  auto inum = [](const std::string& s) { return std::atoi(s.c_str()); };

  // Row integrity: every row satisfies m = ceil(log2 M) and M <= 2^n.
  {
    bool ok = instances_ok;
    std::string msg = instances_msg;
    for (const auto& row : table.rows) {
      const int M = inum(row[c_M]);
      const int m = inum(row[c_m]);
      const int n = inum(row[c_n]);
      if (M < 1 || qubit_count(static_cast<std::uint64_t>(M)) != m ||
          static_cast<std::uint64_t>(M) > (1ULL << n)) {
        ok = false;
        msg = "row with inconsistent (M, m, n)";
        break;
      }
    }
    add("row_integrity", ok, msg);
  }

  // 1. Complete graphs: M = n + 1 and m = ceil(log2(n+1)).
  {
    bool ok = true;
    std::string msg;
    int seen = 0;
    for (const auto& row : table.rows) {
      if (row[c_family] != "complete" || inum(row[c_k]) >= 0) continue;
      ++seen;
      const int n = inum(row[c_n]);
      if (inum(row[c_M]) != n + 1 ||
          inum(row[c_m]) != qubit_count(static_cast<std::uint64_t>(n + 1))) {
        ok = false;
        msg = "complete n=" + row[c_n] + " has M=" + row[c_M] + " m=" + row[c_m];
        break;
      }
    }
    if (!config_has_complete) {
      add("1_complete_reduction", true, "not applicable under this config");
    } else {
      add("1_complete_reduction", ok && seen > 0,
          seen > 0 ? msg : "no complete-family rows");
    }
  }

  // 2. Random graphs at benchmark sizes (n >= 6): M >= 2^(n-1), m in {n-1, n}.
  {
    bool ok = true;
    std::string msg;
    int seen = 0;
    for (const auto& row : table.rows) {
      if (row[c_family] != "erdos_renyi" || inum(row[c_k]) >= 0) continue;
      const int n = inum(row[c_n]);
      if (n < 6) continue;
      ++seen;
      const int M = inum(row[c_M]);
      const int m = inum(row[c_m]);
      if (static_cast<std::uint64_t>(M) < (1ULL << (n - 1)) || m < n - 1 || m > n) {
        ok = false;
        msg = "erdos_renyi n=" + row[c_n] + " reduced too far: M=" + row[c_M];
        break;
      }
    }
    if (!config_has_er_ge6) {
      add("2_random_reduction", true, "not applicable under this config");
    } else {
      add("2_random_reduction", ok && seen > 0, seen > 0 ? msg : "no erdos_renyi rows");
    }
  }

  // 3. Constraint sweep: M <= C(n, k), m nondecreasing in k, pinned values at n=12.
  {
    bool ok = true;
    std::string msg;
    std::map<int, std::pair<int, int>> by_k;  // k -> (M, m)
    for (const auto& row : table.rows) {
      const int k = inum(row[c_k]);
      if (k < 0) continue;
      by_k[k] = {inum(row[c_M]), inum(row[c_m])};
    }
    int last_m = -1;
    for (const auto& [k, Mm] : by_k) {
      if (static_cast<std::uint64_t>(Mm.first) > binomial(constraint_size, k)) {
        ok = false;
        msg = "k=" + std::to_string(k) + " exceeds the sector dimension";
        break;
      }
      if (Mm.second < last_m) {
        ok = false;
        msg = "m decreases at k=" + std::to_string(k);
        break;
      }
      last_m = Mm.second;
    }
    if (ok && constraint_size == 12) {
      if (by_k.count(1) && by_k[1].second != 4) {
        ok = false;
        msg = "m(k=1) != 4";
      }
      if (by_k.count(6) && by_k[6].second > 10) {
        ok = false;
        msg = "m(k=6) > 10";
      }
    }
    if (!config_has_sweep) {
      add("3_constraint_sweep", true, "not applicable under this config");
    } else {
      add("3_constraint_sweep", ok && !by_k.empty(),
          !by_k.empty() ? msg : "no constrained rows");
    }
  }

  // 4. Equivalence metrics within tolerance on every trial.
  {
    bool ok = true;
    std::string msg;
    for (const auto& row : table.rows) {
      const double fid = std::abs(num(row[c_fid]));
      const double de = num(row[c_de]);
      const double tv = num(row[c_tvd]);
      const double e = std::abs(num(row[c_efull]));
      if (fid > cert_tol || de > cert_tol * (1.0 + e) || tv > cert_tol) {
        ok = false;
        msg = row[c_family] + " n=" + row[c_n] + " k=" + row[c_k] +
              " metrics exceed " + fmt(cert_tol);
        break;
      }
    }
    add("4_equivalence", ok);
  }

  // 5. Intertwining column residual (computed on at least one trial per instance).
  {
    bool ok = true;
    std::string msg;
    std::map<std::string, int> computed;
    for (const auto& row : table.rows) {
      const std::string key = row[c_family] + row[c_n] + row[c_k];
      const double r = num(row[c_imax]);
      if (r >= 0.0) {
        ++computed[key];
        if (r > cert_tol) {
          ok = false;
          msg = "column residual " + row[c_imax] + " at " + row[c_family] +
                " n=" + row[c_n];
          break;
        }
      } else if (computed.find(key) == computed.end()) {
        computed[key];  // mark as seen with zero computed so far
      }
    }
    if (ok) {
      for (const auto& [key, count] : computed) {
        if (count == 0) {
          ok = false;
          msg = "instance without any intertwining evaluation";
          break;
        }
      }
    }
    add("5_intertwining", ok, msg);
  }

  // 6. Lemma 2 identities for every built isometry.
  {
    bool ok = true;
    std::string msg;
    for (const auto& row : table.rows) {
      if (num(row[c_vtv]) > 1e-12 || num(row[c_vvt]) > 1e-10) {
        ok = false;
        msg = "isometry residuals " + row[c_vtv] + ", " + row[c_vvt];
        break;
      }
    }
    add("6_isometry_identities", ok, msg);
  }

  // 7. Projector/unitary commutation at n <= 10.
  {
    bool ok = true;
    std::string msg;
    int seen = 0;
    for (const auto& l : checks.at("lemma1")) {
      ++seen;
      if (l.at("max_residual").get<double>() > 1e-9) {
        ok = false;
        msg = l.at("instance").get<std::string>() + " residual too large";
        break;
      }
    }
    add("7_projector_commutation", ok && seen > 0, seen > 0 ? msg : "no lemma1 checks");
  }

  // 8. Irreducibility of generic QUBOs: oracle and closure must agree.
  {
    bool ok = true;
    std::string msg;
    int seen = 0;
    for (const auto& i : checks.at("irreducibility")) {
      ++seen;
      if (i.at("n").get<int>() > 5 || !i.at("agree").get<bool>()) {
        ok = false;
        msg = "seed " + std::to_string(i.at("seed").get<std::uint64_t>()) +
              ": commutant_dim=" + std::to_string(i.at("commutant_dim").get<int>()) +
              " closure_dim=" + std::to_string(i.at("closure_dim").get<int>());
        break;
      }
    }
    add("8_irreducibility", ok && seen == 10,
        seen == 10 ? msg : "expected 10 irreducibility checks");
  }

  // 9. Oracle consistency: cost diagonal matches f; energies respect the brute minimum.
  {
    bool ok = true;
    std::string msg;
    for (const auto& row : table.rows) {
      if (num(row[c_diag]) > 1e-10 ||
          num(row[c_bfull]) < num(row[c_brute]) - 1e-9 ||
          num(row[c_bred]) < num(row[c_brute]) - 1e-9) {
        ok = false;
        msg = row[c_family] + " n=" + row[c_n] + " violates the brute-force oracle";
        break;
      }
    }
    add("9_oracle_consistency", ok, msg);
  }

  // 10. Orthogonal exclusion: no probability off the constrained sector.
  {
    bool ok = true;
    std::string msg;
    for (const auto& row : table.rows) {
      if (inum(row[c_k]) < 0) continue;
      if (num(row[c_leak]) > 1e-12) {
        ok = false;
        msg = "weight leak " + row[c_leak] + " at k=" + row[c_k];
        break;
      }
    }
    add("10_orthogonal_exclusion", ok, msg);
  }

  // 11. Negative control: the corrupted reduction must be detected.
  {
    const auto& nc = checks.at("negative_control");
    add("11_negative_control", nc.at("detected").get<bool>(),
        "max metric " + fmt(nc.at("max_metric").get<double>()));
  }

  // 12. Memory accounting for the most symmetric instance at n = 12.
  {
    bool ok = true;
    bool seen = false;
    std::string msg;
    for (const auto& row : table.rows) {
      if (row[c_family] != "complete" || inum(row[c_n]) != 12 || inum(row[c_k]) >= 0) continue;
      seen = true;
      const double dims = num(row[c_dim_full]) / num(row[c_dim_red]);
      const int M = inum(row[c_M]);
      if (dims != 256.0 || M != 13) {
        ok = false;
        msg = "dimension ratio " + fmt(dims) + ", M=" + row[c_M];
      }
      break;
    }
    if (!config_has_k12_complete) {
      add("12_memory_accounting", true, "not applicable under this config");
    } else {
      add("12_memory_accounting", ok && seen, seen ? msg : "no complete n=12 row");
    }
  }

  for (const auto& c : criteria) {
    result.names.push_back(c.name);
    result.verdicts.push_back(c.passed);
    result.messages.push_back(c.message);
  }
  result.passed = std::all_of(result.verdicts.begin(), result.verdicts.end(),
                              [](bool b) { return b; });
  return result;
}

}  // namespace subqaoa
