#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "subqaoa/pauli.hpp"

namespace subqaoa {

// Classical problem encodings: QUBO instances, Max-Cut graphs and the
// constraint-aware mapping onto cost/mixer Hamiltonians and initial states.

struct GraphEdge {
  int u = 0;
  int v = 0;
  double weight = 1.0;
};

enum class GraphFamily { Cycle, Complete, ErdosRenyi, Custom };

std::string family_name(GraphFamily family);
GraphFamily family_from_name(const std::string& name);

/// Simple undirected weighted graph; edges carry u < v, no self-loops, no
/// duplicates (validated on construction).
struct GraphInstance {
  int n = 0;
  std::vector<GraphEdge> edges;
  GraphFamily family = GraphFamily::Custom;
};

void validate_graph(const GraphInstance& g);

/// Deterministic generator for the benchmark families.  Erdos-Renyi draws
/// each pair independently with p = 0.5 from splitmix64 seeded with `seed`,
/// visiting pairs (u, v) with u < v in row-major order; unit weights.
GraphInstance make_graph(GraphFamily family, int n, std::uint64_t seed);

/// Quadratic penalty g(x) = x^T w x + c^T x + c0 with weight lambda.
struct Penalty {
  double lambda = 0.0;
  RMat w;
  RVec c;
  double c0 = 0.0;
};

/// min f(x) = x^T W x + c^T x + c0 + sum_k lambda_k g_k(x) over x in {0,1}^n.
/// W is symmetrized on construction.
struct QuboInstance {
  int n = 0;
  RMat w;
  RVec c;
  double c0 = 0.0;
  std::vector<Penalty> penalties;
};

QuboInstance make_qubo(int n, RMat w, RVec c, double c0,
                       std::vector<Penalty> penalties = {});

double objective_value(const QuboInstance& q, std::uint64_t x);

/// f(x) for every bitstring, indexed by basis index.  Guarded for n <= 24.
RVec objective_table(const QuboInstance& q);

double brute_force_minimum(const QuboInstance& q);

/// Max-Cut as minimization: f(x) = -sum_{(u,v) in E} w_uv (x_u + x_v - 2 x_u x_v),
/// so min f equals minus the maximum cut weight.
QuboInstance maxcut_to_qubo(const GraphInstance& g);

enum class ConstraintKind { None, HammingWeight };

struct ConstraintSpec {
  ConstraintKind kind = ConstraintKind::None;
  int k = 0;
};

/// Diagonal {I,Z} operator with H_C |x> = f(x) |x>.  For n <= dense_limit the
/// diagonal is checked against direct evaluation of f and a mismatch throws.
OperatorSum cost_hamiltonian(const QuboInstance& q, int dense_limit = kDenseLimit);

/// Unconstrained: transverse field sum_q X_q.  Hamming-weight: ring XY mixer
/// sum_q (X_q X_{q+1} + Y_q Y_{q+1})/2 with cyclic wrap-around, which
/// commutes with sum_q Z_q and therefore preserves the weight sector.
OperatorSum mixer_hamiltonian(int n, const ConstraintSpec& constraint);

/// Unconstrained: uniform superposition.  Hamming-weight: the Dicke state,
/// equal amplitudes on the C(n, k) weight-k basis states.
Vec initial_state(int n, const ConstraintSpec& constraint);

std::uint64_t binomial(int n, int k);

}  // namespace subqaoa
