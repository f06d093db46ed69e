#include "subqaoa/qaoa.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "subqaoa/errors.hpp"

namespace subqaoa {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

constexpr cxd kMinusI{0.0, -1.0};

void check_normalized(const Vec& state, const char* who) {
  if (std::abs(state.norm() - 1.0) > 1e-8) {
    throw StructuralError(std::string(who) + ": state is not normalized");
  }
}

}  // namespace

void QaoaParams::validate() const {
  if (gammas.empty() || gammas.size() != betas.size()) {
    throw StructuralError("QaoaParams: gammas/betas must be non-empty and equal length");
  }
}

std::map<std::string, double> measure_distribution(const Vec& state) {
  const auto dim = static_cast<std::uint64_t>(state.size());
  if (dim == 0 || (dim & (dim - 1)) != 0) {
    throw StructuralError("measure_distribution: dimension is not a power of two");
  }
  const int n = std::bit_width(dim) - 1;
  check_normalized(state, "measure_distribution");
  std::map<std::string, double> dist;
  for (std::uint64_t x = 0; x < dim; ++x) {
    const double p = std::norm(state[x]);
    if (p >= 1e-15) dist[bitstring(x, n)] = p;
  }
  return dist;
}

FullEvolver::FullEvolver(OperatorSum hc, OperatorSum hm, EvolverLimits limits)
    : n_(hc.num_qubits()) {
  if (hm.num_qubits() != n_) {
    throw StructuralError("FullEvolver: Hamiltonian qubit counts differ");
  }
  if (n_ > limits.statevector_limit) {
    throw ResourceError("FullEvolver: " + std::to_string(n_) +
                        " qubits exceeds the statevector limit");
  }
  if (!hc.diagonal()) {
    throw StructuralError("FullEvolver: cost Hamiltonian must be diagonal");
  }
  if (!hm.real_coefficients()) {
    throw StructuralError("FullEvolver: mixer must have real coefficients");
  }
  cost_diag_ = diagonal_of(hc);

  // Mixer plan: exact product form if all terms are single-qubit X.
  x_coeffs_.assign(n_, 0.0);
  bool product_x = true;
  for (const auto& t : hm.terms()) {
    int xq = -1;
    for (int q = 0; q < n_ && product_x; ++q) {
      if (t.word[q] == 'I') continue;
      if (t.word[q] != 'X' || xq >= 0) product_x = false;
      xq = q;
    }
    if (!product_x) break;
    if (xq < 0) product_x = false;  // identity term would be a global phase; unexpected
    else x_coeffs_[xq] = t.coeff.real();
  }
  if (product_x) {
    plan_ = MixerPlan::ProductX;
    return;
  }

  if (n_ > limits.dense_limit) {
    throw ResourceError("FullEvolver: mixer needs dense exponentials, n exceeds dense limit");
  }

  std::vector<PauliTerm> z_terms;
  for (int q = 0; q < n_; ++q) {
    std::string word = identity_word(n_);
    word[q] = 'Z';
    z_terms.push_back({1.0, std::move(word)});
  }
  const OperatorSum total_z(n_, std::move(z_terms));
  if (commutator(hm, total_z).empty()) {
    // Weight-preserving mixer: eigendecompose each Hamming sector separately.
    plan_ = MixerPlan::WeightBlocked;
    const std::uint64_t dim = 1ULL << n_;
    blocks_.resize(n_ + 1);
    for (std::uint64_t x = 0; x < dim; ++x) {
      blocks_[std::popcount(x)].states.push_back(x);
    }
    for (int w = 0; w <= n_; ++w) {
      auto& block = blocks_[w];
      const auto size = static_cast<Eigen::Index>(block.states.size());
      Mat h = Mat::Zero(size, size);
      for (Eigen::Index col = 0; col < size; ++col) {
        const std::uint64_t x = block.states[col];
        const Vec e = Vec::Unit(dim, static_cast<Eigen::Index>(x));
        const Vec image = apply_operator(hm, e);
        for (Eigen::Index row = 0; row < size; ++row) {
          h(row, col) = image[block.states[row]];
        }
      }
      block.eig = eigh(h);
    }
    return;
  }

  plan_ = MixerPlan::DenseEig;
  dense_eig_ = eigh(to_dense(hm, limits.dense_limit));
}

const char* FullEvolver::mixer_plan_name() const {
  switch (plan_) {
    case MixerPlan::ProductX: return "product_x";
    case MixerPlan::WeightBlocked: return "weight_blocked";
    case MixerPlan::DenseEig: return "dense_eig";
  }
  return "?";
}

void FullEvolver::apply_mixer(Vec& state, double beta) const {
  const std::uint64_t dim = 1ULL << n_;
  switch (plan_) {
    case MixerPlan::ProductX: {
      for (int q = 0; q < n_; ++q) {
        if (x_coeffs_[q] == 0.0) continue;
        const double theta = beta * x_coeffs_[q];
        const double c = std::cos(theta);
        const cxd s = kMinusI * std::sin(theta);
        const std::uint64_t bit = 1ULL << (n_ - 1 - q);
        for (std::uint64_t x = 0; x < dim; ++x) {
          if (x & bit) continue;
          const cxd a = state[x];
          const cxd b = state[x | bit];
          state[x] = c * a + s * b;
          state[x | bit] = s * a + c * b;
        }
      }
      break;
    }
    case MixerPlan::WeightBlocked: {
      for (const auto& block : blocks_) {
        const auto size = static_cast<Eigen::Index>(block.states.size());
        Vec sub(size);
        for (Eigen::Index i = 0; i < size; ++i) sub[i] = state[block.states[i]];
        Vec coords = block.eig.vectors.adjoint() * sub;
        for (Eigen::Index k = 0; k < size; ++k) {
          coords[k] *= std::exp(kMinusI * beta * block.eig.values[k]);
        }
        sub.noalias() = block.eig.vectors * coords;
        for (Eigen::Index i = 0; i < size; ++i) state[block.states[i]] = sub[i];
      }
      break;
    }
    case MixerPlan::DenseEig: {
      Vec coords = dense_eig_.vectors.adjoint() * state;
      for (Eigen::Index k = 0; k < coords.size(); ++k) {
        coords[k] *= std::exp(kMinusI * beta * dense_eig_.values[k]);
      }
      state.noalias() = dense_eig_.vectors * coords;
      break;
    }
  }
}

Vec FullEvolver::evolve_state(const Vec& psi0, const QaoaParams& params) const {
  params.validate();
  const std::uint64_t dim = 1ULL << n_;
  if (static_cast<std::uint64_t>(psi0.size()) != dim) {
    throw StructuralError("evolve_state: dimension mismatch");
  }
  check_normalized(psi0, "evolve_state");
  Vec state = psi0;
  for (int p = 0; p < params.layers(); ++p) {
    const double gamma = params.gammas[p];
    for (std::uint64_t x = 0; x < dim; ++x) {
      state[x] *= std::exp(kMinusI * gamma * cost_diag_[x]);
    }
    apply_mixer(state, params.betas[p]);
    const double drift = std::abs(state.norm() - 1.0);
    if (drift > 1e-8) {
      throw NumericalIntegrityError("evolve_state: norm drift above 1e-8");
    }
    state /= state.norm();
  }
  return state;
}

Mat FullEvolver::evolve_block(const Mat& columns, const QaoaParams& params) const {
  params.validate();
  const std::uint64_t dim = 1ULL << n_;
  if (static_cast<std::uint64_t>(columns.rows()) != dim) {
    throw StructuralError("evolve_block: dimension mismatch");
  }
  Mat block = columns;
  for (int p = 0; p < params.layers(); ++p) {
    const double gamma = params.gammas[p];
    Vec phases(dim);
    for (std::uint64_t x = 0; x < dim; ++x) {
      phases[x] = std::exp(kMinusI * gamma * cost_diag_[x]);
    }
    block.array().colwise() *= phases.array();
    switch (plan_) {
      case MixerPlan::ProductX: {
        Vec col(dim);
        for (Eigen::Index j = 0; j < block.cols(); ++j) {
          col = block.col(j);
          apply_mixer(col, params.betas[p]);
          block.col(j) = col;
        }
        break;
      }
      case MixerPlan::WeightBlocked: {
        for (const auto& wb : blocks_) {
          const auto size = static_cast<Eigen::Index>(wb.states.size());
          Mat sub(size, block.cols());
          for (Eigen::Index i = 0; i < size; ++i) {
            sub.row(i) = block.row(static_cast<Eigen::Index>(wb.states[i]));
          }
          Mat coords = wb.eig.vectors.adjoint() * sub;
          for (Eigen::Index k = 0; k < size; ++k) {
            coords.row(k) *= std::exp(kMinusI * params.betas[p] * wb.eig.values[k]);
          }
          sub.noalias() = wb.eig.vectors * coords;
          for (Eigen::Index i = 0; i < size; ++i) {
            block.row(static_cast<Eigen::Index>(wb.states[i])) = sub.row(i);
          }
        }
        break;
      }
      case MixerPlan::DenseEig: {
        block = evolve_columns(dense_eig_, params.betas[p], block);
        break;
      }
    }
  }
  return block;
}

double FullEvolver::energy(const Vec& state) const {
  if (state.size() != cost_diag_.size()) {
    throw StructuralError("energy: dimension mismatch");
  }
  double e = 0.0;
  for (Eigen::Index x = 0; x < state.size(); ++x) {
    e += cost_diag_[x] * std::norm(state[x]);
  }
  return e;
}

EvolutionResult FullEvolver::evolve(const Vec& psi0, const QaoaParams& params) const {
  const auto start = Clock::now();
  EvolutionResult result;
  result.final_state = evolve_state(psi0, params);
  result.energy = energy(result.final_state);
  const double lo = cost_diag_.minCoeff();
  const double hi = cost_diag_.maxCoeff();
  if (result.energy < lo - 1e-9 || result.energy > hi + 1e-9) {
    throw NumericalIntegrityError("evolve: energy escaped the spectral range");
  }
  result.distribution = measure_distribution(result.final_state);
  result.wall_seconds = elapsed(start);
  return result;
}

ReducedEvolver::ReducedEvolver(ReducedSystem sys) : sys_(std::move(sys)) {
  if (sys_.hc_red.rows() != sys_.M || sys_.hm_red.rows() != sys_.M) {
    throw StructuralError("ReducedEvolver: active block size mismatch");
  }
  if (!is_hermitian(sys_.hc_red) || !is_hermitian(sys_.hm_red)) {
    throw NumericalIntegrityError("ReducedEvolver: induced Hamiltonians are not Hermitian");
  }
  hc_eig_ = eigh(sys_.hc_red);
  hm_eig_ = eigh(sys_.hm_red);
}

Mat ReducedEvolver::evolve_block(const Mat& active_columns, const QaoaParams& params) const {
  params.validate();
  if (active_columns.rows() != sys_.M) {
    throw StructuralError("evolve_block: active dimension mismatch");
  }
  Mat block = active_columns;
  for (int p = 0; p < params.layers(); ++p) {
    block = evolve_columns(hc_eig_, params.gammas[p], block);
    block = evolve_columns(hm_eig_, params.betas[p], block);
  }
  return block;
}

Vec ReducedEvolver::evolve_state(const Vec& reduced, const QaoaParams& params) const {
  const std::uint64_t dim = 1ULL << sys_.m;
  if (static_cast<std::uint64_t>(reduced.size()) != dim) {
    throw StructuralError("evolve_state: reduced dimension mismatch");
  }
  if (dim > static_cast<std::uint64_t>(sys_.M)) {
    const double leak = reduced.tail(dim - sys_.M).norm();
    if (leak > 1e-10) {
      throw NumericalIntegrityError("evolve_state: padding amplitudes are populated");
    }
  }
  check_normalized(reduced, "evolve_state(reduced)");
  Vec state = reduced;
  const Mat active = evolve_block(state.head(sys_.M), params);
  state.head(sys_.M) = active.col(0);
  const double drift = std::abs(state.norm() - 1.0);
  if (drift > 1e-8) {
    throw NumericalIntegrityError("evolve_state(reduced): norm drift above 1e-8");
  }
  state /= state.norm();
  return state;
}

double ReducedEvolver::energy(const Vec& reduced) const {
  const std::uint64_t dim = 1ULL << sys_.m;
  if (static_cast<std::uint64_t>(reduced.size()) != dim) {
    throw StructuralError("energy: reduced dimension mismatch");
  }
  const Vec active = reduced.head(sys_.M);
  return (active.adjoint() * sys_.hc_red * active)(0, 0).real();
}

EvolutionResult ReducedEvolver::evolve(const QaoaParams& params) const {
  const auto start = Clock::now();
  EvolutionResult result;
  result.final_state = evolve_state(sys_.psi0_red, params);
  const std::uint64_t dim = 1ULL << sys_.m;
  if (dim > static_cast<std::uint64_t>(sys_.M)) {
    const double leak = result.final_state.tail(dim - sys_.M).norm();
    if (leak > 1e-12) {
      throw NumericalIntegrityError("evolve(reduced): padding leakage");
    }
  }
  result.energy = energy(result.final_state);
  result.distribution = measure_distribution(result.final_state);
  result.wall_seconds = elapsed(start);
  return result;
}

EvolutionResult evolve_full(const OperatorSum& hc, const OperatorSum& hm,
                            const Vec& psi0, const QaoaParams& params) {
  return FullEvolver(hc, hm).evolve(psi0, params);
}

EvolutionResult evolve_reduced(const ReducedSystem& sys, const QaoaParams& params) {
  return ReducedEvolver(sys).evolve(params);
}

QaoaParams draw_params(int layers, SplitMix64& rng) {
  QaoaParams params;
  params.gammas.resize(layers);
  params.betas.resize(layers);
  for (int p = 0; p < layers; ++p) params.gammas[p] = rng.next_uniform(0.0, M_PI);
  for (int p = 0; p < layers; ++p) params.betas[p] = rng.next_uniform(0.0, M_PI);
  return params;
}

namespace {

QaoaParams params_from_point(const RVec& x, int layers) {
  QaoaParams params;
  params.gammas.assign(x.data(), x.data() + layers);
  params.betas.assign(x.data() + layers, x.data() + 2 * layers);
  return params;
}

}  // namespace

OptimizationRun optimize(const EnergyFn& energy, int layers, int restarts,
                         std::uint64_t seed) {
  if (layers < 1) throw StructuralError("optimize: layers must be >= 1");
  if (restarts < 1) throw StructuralError("optimize: restarts must be >= 1");

  const int dim = 2 * layers;
  const int budget = 200 * layers;
  constexpr double kSpreadTol = 1e-8;
  constexpr double kInitStep = 0.25;

  OptimizationRun run;
  run.restarts = restarts;
  run.seed = seed;
  run.best_energy = std::numeric_limits<double>::infinity();

  for (int r = 0; r < restarts; ++r) {
    SplitMix64 rng(derive_seed(seed, {static_cast<std::uint64_t>(r)}));
    const QaoaParams start_params = draw_params(layers, rng);

    std::vector<RVec> simplex(dim + 1);
    std::vector<double> value(dim + 1);
    simplex[0].resize(dim);
    for (int i = 0; i < layers; ++i) simplex[0][i] = start_params.gammas[i];
    for (int i = 0; i < layers; ++i) simplex[0][layers + i] = start_params.betas[i];
    for (int i = 1; i <= dim; ++i) {
      simplex[i] = simplex[0];
      simplex[i][i - 1] += kInitStep;
    }

    int evals = 0;
    bool exhausted = false;
    auto eval = [&](const RVec& x) {
      ++evals;
      return energy(params_from_point(x, layers));
    };
    for (int i = 0; i <= dim; ++i) value[i] = eval(simplex[i]);

    std::vector<int> order(dim + 1);
    while (true) {
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](int a, int b) { return value[a] < value[b]; });
      const int best = order.front();
      const int worst = order.back();
      const int second_worst = order[dim - 1];
      run.trace.push_back(value[best]);
      if (value[worst] - value[best] < kSpreadTol) break;
      if (evals >= budget) {
        exhausted = true;
        break;
      }

      RVec centroid = RVec::Zero(dim);
      for (int i = 0; i <= dim; ++i) {
        if (i != worst) centroid += simplex[i];
      }
      centroid /= dim;

      const RVec reflected = centroid + (centroid - simplex[worst]);
      const double fr = eval(reflected);
      if (fr < value[best]) {
        const RVec expanded = centroid + 2.0 * (centroid - simplex[worst]);
        const double fe = eval(expanded);
        if (fe < fr) {
          simplex[worst] = expanded;
          value[worst] = fe;
        } else {
          simplex[worst] = reflected;
          value[worst] = fr;
        }
      } else if (fr < value[second_worst]) {
        simplex[worst] = reflected;
        value[worst] = fr;
      } else {
        const bool outside = fr < value[worst];
        const RVec contracted =
            outside ? centroid + 0.5 * (reflected - centroid)
                    : centroid + 0.5 * (simplex[worst] - centroid);
        const double fc = eval(contracted);
        if ((outside && fc <= fr) || (!outside && fc < value[worst])) {
          simplex[worst] = contracted;
          value[worst] = fc;
        } else {
          for (int i = 0; i <= dim; ++i) {
            if (i == best) continue;
            simplex[i] = simplex[best] + 0.5 * (simplex[i] - simplex[best]);
            value[i] = eval(simplex[i]);
          }
        }
      }
    }

    const auto best_it = std::min_element(value.begin(), value.end());
    const int best_idx = static_cast<int>(best_it - value.begin());
    if (value[best_idx] < run.best_energy) {
      run.best_energy = value[best_idx];
      run.best_params = params_from_point(simplex[best_idx], layers);
    }
    run.budget_exhausted = run.budget_exhausted || exhausted;
  }
  return run;
}

}  // namespace subqaoa
