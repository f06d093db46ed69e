#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "subqaoa/problem.hpp"
#include "subqaoa/qaoa.hpp"
#include "subqaoa/subspace.hpp"

namespace subqaoa {

// JSON file formats: problem instances (graph or QUBO form), QAOA parameter
// files and the subspace/isometry reproducibility artifact.

/// A problem loaded from disk: either a graph (Max-Cut) or a raw QUBO,
/// plus an optional Hamming-weight constraint.
struct ProblemSpec {
  int n = 0;
  std::optional<GraphInstance> graph;
  std::optional<QuboInstance> qubo;
  ConstraintSpec constraint;
};

/// The QUBO backing a spec: direct, or derived from the Max-Cut graph.
QuboInstance problem_qubo(const ProblemSpec& spec);

ProblemSpec load_instance(const std::string& path);
void save_instance(const std::string& path, const ProblemSpec& spec);

QaoaParams load_params(const std::string& path);
void save_params(const std::string& path, const QaoaParams& params);

/// Basis vectors stored as interleaved [re, im, re, im, ...] arrays.
void save_subspace(const std::string& path, const InvariantSubspace& sub);
InvariantSubspace load_subspace(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// FNV-1a checksum of a file's bytes, rendered as 16 hex digits.
std::string file_checksum(const std::string& path);

}  // namespace subqaoa
