#include "subqaoa/equivalence.hpp"

#include <algorithm>
#include <cmath>

#include "subqaoa/errors.hpp"

namespace subqaoa {

double fidelity(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) {
    throw StructuralError("fidelity: dimension mismatch");
  }
  if (std::abs(a.norm() - 1.0) > 1e-8 || std::abs(b.norm() - 1.0) > 1e-8) {
    throw StructuralError("fidelity: states must be normalized");
  }
  return std::norm(a.dot(b));
}

double tvd(const std::map<std::string, double>& p,
           const std::map<std::string, double>& q) {
  auto total = [](const std::map<std::string, double>& d) {
    double s = 0.0;
    for (const auto& [_, v] : d) s += v;
    return s;
  };
  if (std::abs(total(p) - 1.0) > 1e-8 || std::abs(total(q) - 1.0) > 1e-8) {
    throw StructuralError("tvd: distributions must sum to 1");
  }
  double dist = 0.0;
  auto ip = p.begin();
  auto iq = q.begin();
  while (ip != p.end() || iq != q.end()) {
    if (iq == q.end() || (ip != p.end() && ip->first < iq->first)) {
      dist += std::abs(ip->second);
      ++ip;
    } else if (ip == p.end() || iq->first < ip->first) {
      dist += std::abs(iq->second);
      ++iq;
    } else {
      dist += std::abs(ip->second - iq->second);
      ++ip;
      ++iq;
    }
  }
  return 0.5 * dist;
}

IntertwiningResidual intertwining_residual(const FullEvolver& full,
                                           const ReducedEvolver& reduced,
                                           const Isometry& iso,
                                           const QaoaParams& params) {
  // U V on the full side, V U~ on the reduced side, columns compared
  // directly (identical content to the Frobenius form of the operator
  // identity, without assembling either unitary).
  const Mat uv = full.evolve_block(iso.v, params);
  const Mat ured = reduced.evolve_block(Mat::Identity(iso.M, iso.M), params);
  const Mat vu = iso.v * ured;
  IntertwiningResidual r;
  double frob_sq = 0.0;
  for (int k = 0; k < iso.M; ++k) {
    const double col = (uv.col(k) - vu.col(k)).norm();
    frob_sq += col * col;
    r.max_column = std::max(r.max_column, col);
  }
  r.frobenius_scaled = std::sqrt(frob_sq / iso.M);
  return r;
}

EquivalenceReport certify_pair(const FullEvolver& full, const Vec& psi0,
                               const ReducedEvolver& reduced, const Isometry& iso,
                               const QaoaParams& params,
                               const CertifyOptions& options) {
  EquivalenceReport report;
  report.n = iso.n;
  report.m = iso.m;
  report.M = iso.M;
  report.dim_full = 1ULL << iso.n;
  report.dim_reduced = 1ULL << iso.m;
  report.params = params;
  report.lemma2_vtv = iso.vtv_residual;
  report.lemma2_vvt = iso.vvt_residual;

  const EvolutionResult full_result = full.evolve(psi0, params);
  const EvolutionResult red_result = reduced.evolve(params);

  Vec mapped = iso.v * red_result.final_state.head(iso.M);
  mapped /= mapped.norm();

  const double f = fidelity(full_result.final_state, mapped);
  report.fidelity_offset = std::min(f, 1.0) - 1.0;
  report.delta_e = std::abs(full_result.energy - red_result.energy);
  report.tvd = tvd(full_result.distribution, measure_distribution(mapped));

  if (options.with_intertwining) {
    const IntertwiningResidual r = intertwining_residual(full, reduced, iso, params);
    report.intertwine_residual = r.frobenius_scaled;
    report.intertwine_max_column = r.max_column;
  }
  return report;
}

ExclusionReport certify_orthogonal_exclusion(const InvariantSubspace& sub,
                                             const EvolutionResult& full_result) {
  const std::uint64_t dim = 1ULL << sub.n;
  if (static_cast<std::uint64_t>(full_result.final_state.size()) != dim) {
    throw StructuralError("certify_orthogonal_exclusion: dimension mismatch");
  }
  ExclusionReport report;
  for (std::uint64_t x = 0; x < dim; ++x) {
    // ||Pi_eff |x>|| is the norm of row x of the basis matrix.
    const double overlap = sub.basis.row(static_cast<Eigen::Index>(x)).norm();
    if (overlap > 1e-10) continue;
    ++report.excluded_count;
    const double prob = std::norm(full_result.final_state[x]);
    report.total_excluded_probability += prob;
    if (prob > report.worst_probability) {
      report.worst_probability = prob;
      report.worst_index = x;
    }
  }
  report.passed = report.worst_probability <= 1e-12;
  return report;
}

Isometry corrupt_isometry_column(const Isometry& iso, int column, double epsilon) {
  if (column < 0 || column >= iso.M) {
    throw StructuralError("corrupt_isometry_column: column out of range");
  }
  if (iso.M < 2) {
    throw StructuralError("corrupt_isometry_column: need at least two columns");
  }
  Isometry bad = iso;
  bad.v.col(column) += epsilon * bad.v.col((column + 1) % iso.M);
  const Mat gram = bad.v.adjoint() * bad.v;
  bad.vtv_residual = (gram - Mat::Identity(bad.M, bad.M)).norm();
  bad.vvt_residual = (bad.v * gram - bad.v).norm();
  return bad;
}

Mat assemble_dense_unitary(const FullEvolver& full, const QaoaParams& params) {
  const int n = full.num_qubits();
  if (n > 12) {
    throw ResourceError("assemble_dense_unitary: limited to n <= 12");
  }
  const auto dim = static_cast<Eigen::Index>(1ULL << n);
  return full.evolve_block(Mat::Identity(dim, dim), params);
}

double commutation_residual(const Mat& projector, const Mat& unitary) {
  if (projector.rows() != unitary.rows() || projector.cols() != unitary.cols()) {
    throw StructuralError("commutation_residual: dimension mismatch");
  }
  return (projector * unitary - unitary * projector).norm();
}

Mat subspace_projector(const InvariantSubspace& sub) {
  const std::uint64_t dim = 1ULL << sub.n;
  if (dim > 4096) {
    throw ResourceError("subspace_projector: dense projector limited to n <= 12");
  }
  Mat projector = Mat::Zero(dim, dim);
  for (int k = 0; k < sub.dimension; ++k) {
    projector.noalias() += sub.basis.col(k) * sub.basis.col(k).adjoint();
  }
  return projector;
}

}  // namespace subqaoa
