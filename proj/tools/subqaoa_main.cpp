// Command-line driver: batch experiments (`run`), report auditing (`audit`),
// single-instance reduction (`reduce`) and equivalence certification
// (`certify`).

#include "CLI11.hpp"

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "subqaoa/equivalence.hpp"
#include "subqaoa/experiment.hpp"
#include "subqaoa/io.hpp"
#include "subqaoa/symmetry.hpp"
#include "subqaoa/version.hpp"

namespace {

using namespace subqaoa;

struct ReductionBundle {
  OperatorSum hc;
  OperatorSum hm;
  Vec psi0;
  InvariantSubspace sub;
  Isometry iso;
  ReducedSystem red;
};

ReductionBundle reduce_spec(const ProblemSpec& spec, bool fast_path, int dense_limit) {
  const QuboInstance qubo = problem_qubo(spec);
  ReductionBundle b{cost_hamiltonian(qubo, dense_limit),
                    mixer_hamiltonian(spec.n, spec.constraint),
                    initial_state(spec.n, spec.constraint),
                    {},
                    {},
                    {}};
  ClosureOptions opts;
  opts.allow_dicke_fast_path = fast_path;
  b.sub = krylov_closure(b.hc, b.hm, b.psi0, opts);
  b.iso = build_isometry(b.sub);
  b.red = induce_hamiltonians(b.hc, b.hm, b.iso, b.psi0);
  return b;
}

int cmd_run(const ExperimentConfig& config) {
  const RunManifest manifest = run_experiment(config);
  int failures = 0;
  for (const auto& rec : manifest.instances) {
    if (!rec.error.empty()) {
      ++failures;
      std::printf("%-24s ERROR %s\n", rec.label().c_str(), rec.error.c_str());
      continue;
    }
    std::printf("%-24s M=%-5d m=%-2d dims %llu -> %llu (%s)\n", rec.label().c_str(),
                rec.M, rec.m, static_cast<unsigned long long>(rec.dim_full),
                static_cast<unsigned long long>(rec.dim_reduced),
                rec.reduction_method.c_str());
  }
  std::printf("manifest: %s\n", manifest.manifest_path.c_str());
  std::printf("run `subqaoa audit --manifest %s` to re-check the acceptance gates\n",
              manifest.manifest_path.c_str());
  return failures == 0 ? 0 : 1;
}

int cmd_audit(const std::string& manifest_path) {
  const AuditResult result = audit(manifest_path);
  std::fputs(result.summary().c_str(), stdout);
  return result.passed ? 0 : 1;
}

int cmd_reduce(const std::string& instance_path, bool fast_path, int dense_limit) {
  const ProblemSpec spec = load_instance(instance_path);
  const ReductionBundle b = reduce_spec(spec, fast_path, dense_limit);
  const MemoryRecord mem =
      memory_report(spec.n, b.iso.m, static_cast<std::uint64_t>(b.sub.dimension));
  const ReducibilityVerdict verdict = classify(b.hc, b.hm, spec.constraint);

  std::printf("n                : %d\n", spec.n);
  std::printf("M (subspace dim) : %d\n", b.sub.dimension);
  std::printf("m (qubits)       : %d\n", b.iso.m);
  std::printf("dims             : %llu -> %llu\n",
              static_cast<unsigned long long>(mem.dim_full),
              static_cast<unsigned long long>(mem.dim_reduced));
  std::printf("effective ratio  : %.6g\n", mem.effective_ratio);
  std::printf("method           : %s\n", b.sub.log.method.c_str());
  std::printf("verdict          : %s (%s", verdict.reducible ? "reducible" : "irreducible",
              evidence_name(verdict.evidence));
  if (verdict.commutant_dim >= 0) {
    std::printf(", commutant dim %d", verdict.commutant_dim);
  }
  std::printf(")\n");
  return 0;
}

int cmd_certify(const std::string& instance_path, const std::string& params_path,
                double tol, bool fast_path, int dense_limit) {
  const ProblemSpec spec = load_instance(instance_path);
  const QaoaParams params = load_params(params_path);
  const ReductionBundle b = reduce_spec(spec, fast_path, dense_limit);
  EvolverLimits limits;
  limits.dense_limit = dense_limit;
  const FullEvolver full(b.hc, b.hm, limits);
  const ReducedEvolver reduced(b.red);
  const EquivalenceReport rep = certify_pair(full, b.psi0, reduced, b.iso, params);

  std::printf("n=%d m=%d M=%d\n", rep.n, rep.m, rep.M);
  std::printf("fidelity_offset        : %.3e\n", rep.fidelity_offset);
  std::printf("delta_e                : %.3e\n", rep.delta_e);
  std::printf("tvd                    : %.3e\n", rep.tvd);
  std::printf("intertwine_max_column  : %.3e\n", rep.intertwine_max_column);
  std::printf("lemma2 residuals       : %.3e / %.3e\n", rep.lemma2_vtv, rep.lemma2_vvt);
  const double worst =
      std::max({std::abs(rep.fidelity_offset), rep.delta_e, rep.tvd,
                rep.intertwine_max_column, rep.lemma2_vtv, rep.lemma2_vvt});
  const bool ok = worst <= tol;
  std::printf("certified at tol %.1e : %s\n", tol, ok ? "yes" : "NO");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Invariant-subspace qubit reduction for QAOA"};
  app.set_version_flag("--version", subqaoa::kVersion);
  app.require_subcommand(1);

  ExperimentConfig config;
  std::vector<std::string> family_names{"cycle", "complete", "erdos_renyi"};
  bool no_fast_path = false;

  auto* run = app.add_subcommand("run", "run the full experiment batch");
  run->add_option("--families", family_names, "graph families")->delimiter(',');
  run->add_option("--sizes", config.sizes, "problem sizes n")->delimiter(',');
  run->add_option("--k-grid", config.k_grid, "Hamming-weight sweep values")->delimiter(',');
  run->add_option("--constraint-size", config.constraint_size, "n used for the k sweep");
  run->add_option("--layers", config.layers, "QAOA layers P");
  run->add_option("--restarts", config.restarts, "optimizer restarts");
  run->add_option("--trials", config.trials, "certified parameter sets per instance");
  run->add_option("--seed", config.seed, "master seed");
  run->add_option("--out", config.out_dir, "output directory");
  run->add_option("--workers", config.workers, "parallel instance workers");
  run->add_option("--dense-limit", config.dense_limit, "max n for dense operators");
  run->add_flag("--no-fast-path", no_fast_path, "disable the analytic Dicke basis");
  run->add_flag("--negative-control", config.negative_control,
                "corrupt every reduction so certification must fail");

  std::string manifest_path;
  auto* audit_cmd = app.add_subcommand("audit", "re-check acceptance gates of a stored run");
  audit_cmd->add_option("--manifest", manifest_path, "path to manifest.json")->required();

  std::string instance_path;
  int reduce_dense_limit = kDenseLimit;
  bool reduce_no_fast_path = false;
  auto* reduce_cmd = app.add_subcommand("reduce", "reduce one instance and print M, m, verdict");
  reduce_cmd->add_option("--instance", instance_path, "instance JSON file")->required();
  reduce_cmd->add_option("--dense-limit", reduce_dense_limit, "max n for dense operators");
  reduce_cmd->add_flag("--no-fast-path", reduce_no_fast_path, "disable the analytic Dicke basis");

  std::string certify_instance, certify_params;
  double certify_tol = 1e-10;
  int certify_dense_limit = kDenseLimit;
  bool certify_no_fast_path = false;
  auto* certify_cmd = app.add_subcommand("certify", "certify full/reduced equivalence");
  certify_cmd->add_option("--instance", certify_instance, "instance JSON file")->required();
  certify_cmd->add_option("--params", certify_params, "QAOA parameter JSON file")->required();
  certify_cmd->add_option("--tol", certify_tol, "certification tolerance");
  certify_cmd->add_option("--dense-limit", certify_dense_limit, "max n for dense operators");
  certify_cmd->add_flag("--no-fast-path", certify_no_fast_path, "disable the analytic Dicke basis");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      config.families.clear();
      for (const auto& name : family_names) config.families.push_back(family_from_name(name));
      config.fast_path = !no_fast_path;
      return cmd_run(config);
    }
    if (audit_cmd->parsed()) return cmd_audit(manifest_path);
    if (reduce_cmd->parsed()) {
      return cmd_reduce(instance_path, !reduce_no_fast_path, reduce_dense_limit);
    }
    if (certify_cmd->parsed()) {
      return cmd_certify(certify_instance, certify_params, certify_tol,
                         !certify_no_fast_path, certify_dense_limit);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
