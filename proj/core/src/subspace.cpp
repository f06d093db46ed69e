#include "subqaoa/subspace.hpp"

#include <bit>
#include <cmath>
#include <deque>

#include "subqaoa/errors.hpp"
#include "subqaoa/problem.hpp"

namespace subqaoa {

namespace {

constexpr double kPsi0Tol = 1e-12;

void check_closure_inputs(const OperatorSum& hc, const OperatorSum& hm, const Vec& psi0) {
  if (hc.num_qubits() != hm.num_qubits()) {
    throw StructuralError("krylov_closure: Hamiltonian qubit counts differ");
  }
  const std::uint64_t dim = 1ULL << hc.num_qubits();
  if (static_cast<std::uint64_t>(psi0.size()) != dim) {
    throw StructuralError("krylov_closure: initial state dimension mismatch");
  }
  if (std::abs(psi0.norm() - 1.0) > 1e-10) {
    throw StructuralError("krylov_closure: initial state is not normalized");
  }
}

// Two-pass modified Gram-Schmidt against the first `m` columns of `basis`.
// Returns the residual norm; on exit v holds the orthogonalized residual.
double orthogonalize(const Mat& basis, int m, Vec& v) {
  if (m > 0) {
    const auto b = basis.leftCols(m);
    Vec coef(m);
    for (int pass = 0; pass < 2; ++pass) {
      coef.noalias() = b.adjoint() * v;
      v.noalias() -= b * coef;
    }
  }
  return v.norm();
}

bool uniform_x_mixer(const OperatorSum& hm) {
  const int n = hm.num_qubits();
  if (static_cast<int>(hm.terms().size()) != n) return false;
  double coeff = 0.0;
  int singles = 0;
  for (const auto& t : hm.terms()) {
    int non_id = 0;
    for (char c : t.word) {
      if (c == 'X') ++non_id;
      else if (c != 'I') return false;
    }
    if (non_id != 1) return false;
    if (std::abs(t.coeff.imag()) > 1e-12) return false;
    if (singles == 0) coeff = t.coeff.real();
    else if (std::abs(t.coeff.real() - coeff) > 1e-12) return false;
    ++singles;
  }
  return singles == n;
}

bool weight_symmetric_diagonal(const OperatorSum& hc) {
  if (!hc.diagonal()) return false;
  const RVec diag = diagonal_of(hc);
  const int n = hc.num_qubits();
  const std::uint64_t dim = 1ULL << n;
  std::vector<double> level(n + 1, 0.0);
  std::vector<bool> seen(n + 1, false);
  double scale = 1.0;
  for (std::uint64_t x = 0; x < dim; ++x) scale = std::max(scale, std::abs(diag[x]));
  for (std::uint64_t x = 0; x < dim; ++x) {
    const int w = std::popcount(x);
    if (!seen[w]) {
      level[w] = diag[x];
      seen[w] = true;
    } else if (std::abs(diag[x] - level[w]) > 1e-12 * scale) {
      return false;
    }
  }
  return true;
}

bool uniform_state(const Vec& psi0) {
  const cxd a = psi0[0];
  for (Eigen::Index i = 1; i < psi0.size(); ++i) {
    if (std::abs(psi0[i] - a) > 1e-12) return false;
  }
  return true;
}

Mat dicke_basis(int n) {
  const std::uint64_t dim = 1ULL << n;
  Mat basis = Mat::Zero(dim, n + 1);
  for (int w = 0; w <= n; ++w) {
    const double amp = 1.0 / std::sqrt(static_cast<double>(binomial(n, w)));
    for (std::uint64_t x = 0; x < dim; ++x) {
      if (std::popcount(x) == w) basis(x, w) = amp;
    }
  }
  return basis;
}

bool verify_closure_invariant(const Mat& basis, const OperatorSum& hc,
                              const OperatorSum& hm, const Vec& psi0,
                              double rank_tol) {
  Vec r = psi0;
  if (orthogonalize(basis, static_cast<int>(basis.cols()), r) > kPsi0Tol) return false;
  for (const OperatorSum* h : {&hc, &hm}) {
    for (Eigen::Index k = 0; k < basis.cols(); ++k) {
      Vec image = apply_operator(*h, basis.col(k));
      if (orthogonalize(basis, static_cast<int>(basis.cols()), image) > rank_tol) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

InvariantSubspace krylov_closure(const OperatorSum& hc, const OperatorSum& hm,
                                 const Vec& psi0, const ClosureOptions& options) {
  check_closure_inputs(hc, hm, psi0);
  const int n = hc.num_qubits();
  const std::uint64_t dim = 1ULL << n;
  const std::uint64_t cap = options.cap == 0 ? dim : options.cap;

  InvariantSubspace sub;
  sub.n = n;

  if (options.allow_dicke_fast_path && uniform_x_mixer(hm) &&
      weight_symmetric_diagonal(hc) && uniform_state(psi0)) {
    Mat basis = dicke_basis(n);
    if (static_cast<std::uint64_t>(basis.cols()) <= cap &&
        verify_closure_invariant(basis, hc, hm, psi0, options.rank_tol)) {
      sub.dimension = static_cast<int>(basis.cols());
      sub.basis = std::move(basis);
      sub.log.method = "dicke";
      sub.log.accepted = sub.dimension;
      return sub;
    }
  }

  Mat basis(dim, std::min<std::uint64_t>(dim, 64));
  int m = 0;
  auto append = [&](const Vec& v) {
    if (m == basis.cols()) {
      basis.conservativeResize(Eigen::NoChange, std::min<std::uint64_t>(dim, 2 * basis.cols()));
    }
    basis.col(m++) = v;
  };

  append(psi0 / psi0.norm());
  std::deque<int> fifo{0};
  ClosureLog& log = sub.log;
  log.method = "krylov";
  log.accepted = 1;

  while (!fifo.empty() && static_cast<std::uint64_t>(m) < dim) {
    const int i = fifo.front();
    fifo.pop_front();
    ++log.sweeps;
    for (const OperatorSum* h : {&hc, &hm}) {  // cost images first
      Vec v = apply_operator(*h, basis.col(i));
      ++log.candidates;
      const double residual = orthogonalize(basis, m, v);
      if (residual > options.rank_tol) {
        if (static_cast<std::uint64_t>(m) + 1 > cap) {
          throw ResourceError("krylov_closure: subspace exceeded the configured cap");
        }
        append(v / residual);
        fifo.push_back(m - 1);
        ++log.accepted;
      } else {
        ++log.rejected;
      }
      if (static_cast<std::uint64_t>(m) == dim) break;
    }
  }
  // m == dim means the span is the whole space; remaining images cannot add
  // directions, so the closure invariant holds without draining the queue.
  log.exhausted_space = (static_cast<std::uint64_t>(m) == dim);

  sub.dimension = m;
  sub.basis = basis.leftCols(m);
  return sub;
}

int qubit_count(std::uint64_t subspace_dim) {
  if (subspace_dim < 1) throw StructuralError("qubit_count: M must be >= 1");
  if (subspace_dim == 1) return 0;
  return std::bit_width(subspace_dim - 1);
}

double compression_ratio(int n, std::uint64_t subspace_dim) {
  if (subspace_dim < 1) throw StructuralError("compression_ratio: M must be >= 1");
  return std::ldexp(1.0, n) / static_cast<double>(subspace_dim);
}

Isometry build_isometry(const InvariantSubspace& sub) {
  if (sub.dimension < 1 || sub.basis.cols() != sub.dimension) {
    throw StructuralError("build_isometry: invalid subspace");
  }
  Isometry iso;
  iso.n = sub.n;
  iso.M = sub.dimension;
  iso.m = qubit_count(static_cast<std::uint64_t>(sub.dimension));
  iso.v = sub.basis;

  const Mat gram = iso.v.adjoint() * iso.v;
  iso.vtv_residual = (gram - Mat::Identity(iso.M, iso.M)).norm();
  if (iso.vtv_residual > 1e-12) {
    throw NumericalIntegrityError("build_isometry: columns are not orthonormal");
  }

  const std::uint64_t dim = 1ULL << iso.n;
  if (dim <= 2048) {
    // Independent accumulation of the projector (rank-one sums) against the
    // product form V V^dagger.
    Mat projector = Mat::Zero(dim, dim);
    for (int k = 0; k < iso.M; ++k) {
      projector.noalias() += iso.v.col(k) * iso.v.col(k).adjoint();
    }
    iso.vvt_residual = (iso.v * iso.v.adjoint() - projector).norm();
  } else {
    // Action form at large dimension: V V^dagger must reproduce the basis.
    iso.vvt_residual = (iso.v * gram - iso.v).norm();
  }
  if (iso.vvt_residual > 1e-10) {
    throw NumericalIntegrityError("build_isometry: V V^dagger does not match the projector");
  }
  return iso;
}

Vec isometry_apply(const Isometry& iso, const Vec& reduced) {
  const std::uint64_t red_dim = 1ULL << iso.m;
  if (static_cast<std::uint64_t>(reduced.size()) != red_dim) {
    throw StructuralError("isometry_apply: reduced dimension mismatch");
  }
  if (red_dim > static_cast<std::uint64_t>(iso.M)) {
    const double leak = reduced.tail(red_dim - iso.M).norm();
    if (leak > 1e-10) {
      throw NumericalIntegrityError("isometry_apply: padding amplitudes are populated");
    }
  }
  return iso.v * reduced.head(iso.M);
}

Vec isometry_adjoint_apply(const Isometry& iso, const Vec& full) {
  if (full.size() != iso.v.rows()) {
    throw StructuralError("isometry_adjoint_apply: dimension mismatch");
  }
  Vec reduced = Vec::Zero(1LL << iso.m);
  reduced.head(iso.M).noalias() = iso.v.adjoint() * full;
  return reduced;
}

ReducedSystem induce_hamiltonians(const OperatorSum& hc, const OperatorSum& hm,
                                  const Isometry& iso, const Vec& psi0) {
  if (hc.num_qubits() != iso.n || hm.num_qubits() != iso.n) {
    throw StructuralError("induce_hamiltonians: qubit count mismatch");
  }
  ReducedSystem sys;
  sys.n = iso.n;
  sys.m = iso.m;
  sys.M = iso.M;

  for (auto [h, target] : {std::pair{&hc, &sys.hc_red}, std::pair{&hm, &sys.hm_red}}) {
    const Mat image = apply_columns(*h, iso.v);
    Mat reduced = iso.v.adjoint() * image;
    const double asym = (reduced - reduced.adjoint()).norm();
    if (asym > 1e-11) {
      throw NumericalIntegrityError("induce_hamiltonians: induced block is not Hermitian");
    }
    *target = 0.5 * (reduced + reduced.adjoint().eval());
  }

  sys.psi0_red = isometry_adjoint_apply(iso, psi0);
  const Vec roundtrip = iso.v * sys.psi0_red.head(iso.M);
  if ((roundtrip - psi0).norm() > 1e-12) {
    throw NumericalIntegrityError(
        "induce_hamiltonians: initial state is not inside the subspace");
  }
  return sys;
}

}  // namespace subqaoa
