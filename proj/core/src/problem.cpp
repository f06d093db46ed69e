#include "subqaoa/problem.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "subqaoa/errors.hpp"
#include "subqaoa/rng.hpp"

namespace subqaoa {

std::string family_name(GraphFamily family) {
  switch (family) {
    case GraphFamily::Cycle: return "cycle";
    case GraphFamily::Complete: return "complete";
    case GraphFamily::ErdosRenyi: return "erdos_renyi";
    case GraphFamily::Custom: return "custom";
  }
  throw StructuralError("unknown graph family");
}

GraphFamily family_from_name(const std::string& name) {
  if (name == "cycle") return GraphFamily::Cycle;
  if (name == "complete") return GraphFamily::Complete;
  if (name == "erdos_renyi") return GraphFamily::ErdosRenyi;
  if (name == "custom") return GraphFamily::Custom;
  throw StructuralError("unknown graph family '" + name + "'");
}

void validate_graph(const GraphInstance& g) {
  if (g.n < 2) throw StructuralError("graph needs at least two vertices");
  std::set<std::pair<int, int>> seen;
  for (const auto& e : g.edges) {
    if (e.u < 0 || e.v < 0 || e.u >= g.n || e.v >= g.n) {
      throw StructuralError("edge endpoint out of range");
    }
    if (e.u == e.v) throw StructuralError("self-loops are not allowed");
    if (e.u > e.v) throw StructuralError("edges must satisfy u < v");
    if (!seen.insert({e.u, e.v}).second) {
      throw StructuralError("duplicate edge");
    }
  }
}

GraphInstance make_graph(GraphFamily family, int n, std::uint64_t seed) {
  if (n < 2) throw StructuralError("graph needs at least two vertices");
  GraphInstance g;
  g.n = n;
  g.family = family;
  switch (family) {
    case GraphFamily::Cycle:
      for (int i = 0; i + 1 < n; ++i) g.edges.push_back({i, i + 1, 1.0});
      if (n > 2) g.edges.push_back({0, n - 1, 1.0});
      break;
    case GraphFamily::Complete:
      for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) g.edges.push_back({u, v, 1.0});
      }
      break;
    case GraphFamily::ErdosRenyi: {
      SplitMix64 rng(seed);
      for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
          if (rng.next_double() < 0.5) g.edges.push_back({u, v, 1.0});
        }
      }
      break;
    }
    case GraphFamily::Custom:
      throw StructuralError("custom graphs are loaded from files, not generated");
  }
  std::sort(g.edges.begin(), g.edges.end(), [](const GraphEdge& a, const GraphEdge& b) {
    return std::pair{a.u, a.v} < std::pair{b.u, b.v};
  });
  validate_graph(g);
  return g;
}

QuboInstance make_qubo(int n, RMat w, RVec c, double c0, std::vector<Penalty> penalties) {
  if (n < 1) throw StructuralError("QUBO needs at least one variable");
  if (w.rows() != n || w.cols() != n || c.size() != n) {
    throw StructuralError("QUBO matrix/vector dimensions do not match n");
  }
  QuboInstance q;
  q.n = n;
  q.w = 0.5 * (w + w.transpose());
  q.c = std::move(c);
  q.c0 = c0;
  q.penalties = std::move(penalties);
  for (auto& p : q.penalties) {
    if (p.w.rows() != n || p.w.cols() != n || p.c.size() != n) {
      throw StructuralError("penalty dimensions do not match n");
    }
    p.w = 0.5 * (p.w + p.w.transpose());
  }
  return q;
}

namespace {

int bit_of(std::uint64_t x, int q, int n) {
  return static_cast<int>((x >> (n - 1 - q)) & 1ULL);
}

double quadratic_value(const RMat& w, const RVec& c, double c0, std::uint64_t x, int n) {
  double f = c0;
  for (int i = 0; i < n; ++i) {
    if (!bit_of(x, i, n)) continue;
    f += c[i] + w(i, i);
    for (int j = i + 1; j < n; ++j) {
      if (bit_of(x, j, n)) f += 2.0 * w(i, j);
    }
  }
  return f;
}

}  // namespace

double objective_value(const QuboInstance& q, std::uint64_t x) {
  double f = quadratic_value(q.w, q.c, q.c0, x, q.n);
  for (const auto& p : q.penalties) {
    f += p.lambda * quadratic_value(p.w, p.c, p.c0, x, q.n);
  }
  return f;
}

RVec objective_table(const QuboInstance& q) {
  if (q.n > 24) throw ResourceError("objective_table: n > 24");
  const std::uint64_t dim = 1ULL << q.n;
  RVec table(dim);
  for (std::uint64_t x = 0; x < dim; ++x) table[x] = objective_value(q, x);
  return table;
}

double brute_force_minimum(const QuboInstance& q) {
  if (q.n > 24) throw ResourceError("brute_force_minimum: n > 24");
  const std::uint64_t dim = 1ULL << q.n;
  double best = objective_value(q, 0);
  for (std::uint64_t x = 1; x < dim; ++x) {
    best = std::min(best, objective_value(q, x));
  }
  return best;
}

QuboInstance maxcut_to_qubo(const GraphInstance& g) {
  validate_graph(g);
  RMat w = RMat::Zero(g.n, g.n);
  RVec c = RVec::Zero(g.n);
  for (const auto& e : g.edges) {
    // -w_uv (x_u + x_v - 2 x_u x_v): split the quadratic part across the
    // symmetric pair so that x^T W x reproduces the 2 x_u x_v coefficient.
    c[e.u] -= e.weight;
    c[e.v] -= e.weight;
    w(e.u, e.v) += e.weight;
    w(e.v, e.u) += e.weight;
  }
  return make_qubo(g.n, std::move(w), std::move(c), 0.0);
}

namespace {

// Accumulates the {I,Z} expansion of a quadratic form under x_i = (I - Z_i)/2.
void expand_quadratic(const RMat& w, const RVec& c, double c0, double lambda,
                      int n, std::vector<PauliTerm>& terms) {
  auto z_word = [n](std::initializer_list<int> qubits) {
    std::string word = identity_word(n);
    for (int q : qubits) word[q] = 'Z';
    return word;
  };
  double id_coeff = c0;
  RVec z_coeff = RVec::Zero(n);
  for (int i = 0; i < n; ++i) {
    // (c_i + w_ii) x_i -> (c_i + w_ii)(I - Z_i)/2
    const double lin = c[i] + w(i, i);
    id_coeff += 0.5 * lin;
    z_coeff[i] -= 0.5 * lin;
    for (int j = i + 1; j < n; ++j) {
      // 2 w_ij x_i x_j -> (w_ij/2)(I - Z_i - Z_j + Z_i Z_j)
      const double quad = 2.0 * w(i, j);
      id_coeff += 0.25 * quad;
      z_coeff[i] -= 0.25 * quad;
      z_coeff[j] -= 0.25 * quad;
      terms.push_back({lambda * 0.25 * quad, z_word({i, j})});
    }
  }
  terms.push_back({lambda * id_coeff, identity_word(n)});
  for (int i = 0; i < n; ++i) {
    terms.push_back({lambda * z_coeff[i], z_word({i})});
  }
}

}  // namespace

OperatorSum cost_hamiltonian(const QuboInstance& q, int dense_limit) {
  std::vector<PauliTerm> terms;
  expand_quadratic(q.w, q.c, q.c0, 1.0, q.n, terms);
  for (const auto& p : q.penalties) {
    expand_quadratic(p.w, p.c, p.c0, p.lambda, q.n, terms);
  }
  OperatorSum hc(q.n, std::move(terms));
  if (q.n <= dense_limit) {
    // Spectral correspondence check: the diagonal must reproduce f exactly.
    const RVec diag = diagonal_of(hc);
    const std::uint64_t dim = 1ULL << q.n;
    double scale = 1.0;
    for (std::uint64_t x = 0; x < dim; ++x) scale = std::max(scale, std::abs(diag[x]));
    for (std::uint64_t x = 0; x < dim; ++x) {
      if (std::abs(diag[x] - objective_value(q, x)) > 1e-10 * scale) {
        throw NumericalIntegrityError("cost_hamiltonian: diagonal does not match f");
      }
    }
  }
  return hc;
}

OperatorSum mixer_hamiltonian(int n, const ConstraintSpec& constraint) {
  if (n < 1) throw StructuralError("mixer needs at least one qubit");
  std::vector<PauliTerm> terms;
  switch (constraint.kind) {
    case ConstraintKind::None:
      for (int q = 0; q < n; ++q) {
        std::string word = identity_word(n);
        word[q] = 'X';
        terms.push_back({1.0, std::move(word)});
      }
      break;
    case ConstraintKind::HammingWeight: {
      if (constraint.k < 0 || constraint.k > n) {
        throw ConstraintError("Hamming weight k out of range");
      }
      // Ring topology; on two qubits the ring collapses to a single pair.
      const int pairs = (n == 2) ? 1 : n;
      for (int q = 0; q < pairs; ++q) {
        const int r = (q + 1) % n;
        std::string xx = identity_word(n), yy = identity_word(n);
        xx[q] = 'X'; xx[r] = 'X';
        yy[q] = 'Y'; yy[r] = 'Y';
        terms.push_back({0.5, std::move(xx)});
        terms.push_back({0.5, std::move(yy)});
      }
      break;
    }
  }
  return OperatorSum(n, std::move(terms));
}

Vec initial_state(int n, const ConstraintSpec& constraint) {
  if (n < 1) throw StructuralError("state needs at least one qubit");
  const std::uint64_t dim = 1ULL << n;
  Vec psi = Vec::Zero(dim);
  switch (constraint.kind) {
    case ConstraintKind::None:
      psi.setConstant(1.0 / std::sqrt(static_cast<double>(dim)));
      break;
    case ConstraintKind::HammingWeight: {
      if (constraint.k < 0 || constraint.k > n) {
        throw ConstraintError("Hamming weight k out of range");
      }
      const double amp = 1.0 / std::sqrt(static_cast<double>(binomial(n, constraint.k)));
      for (std::uint64_t x = 0; x < dim; ++x) {
        if (std::popcount(x) == constraint.k) psi[x] = amp;
      }
      break;
    }
  }
  return psi;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return r;
}

}  // namespace subqaoa
