#include "subqaoa/io.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <iomanip>
#include <sstream>

#include "subqaoa/errors.hpp"
#include "subqaoa/rng.hpp"

namespace subqaoa {

using nlohmann::json;

namespace {

json parse_file(const std::string& path) {
  const std::string text = read_file(path);
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    throw IoError("failed to parse JSON in " + path);
  }
  return j;
}

ConstraintSpec constraint_from_json(const json& j) {
  ConstraintSpec c;
  if (!j.contains("constraint")) return c;
  const auto& jc = j.at("constraint");
  const std::string kind = jc.value("kind", "none");
  if (kind == "none") {
    c.kind = ConstraintKind::None;
  } else if (kind == "hamming_weight") {
    c.kind = ConstraintKind::HammingWeight;
    c.k = jc.at("k").get<int>();
  } else {
    throw IoError("unknown constraint kind '" + kind + "'");
  }
  return c;
}

json constraint_to_json(const ConstraintSpec& c) {
  json j;
  j["kind"] = c.kind == ConstraintKind::None ? "none" : "hamming_weight";
  if (c.kind == ConstraintKind::HammingWeight) j["k"] = c.k;
  return j;
}

}  // namespace

QuboInstance problem_qubo(const ProblemSpec& spec) {
  if (spec.qubo) return *spec.qubo;
  if (spec.graph) return maxcut_to_qubo(*spec.graph);
  throw StructuralError("problem spec holds neither a graph nor a QUBO");
}

ProblemSpec load_instance(const std::string& path) {
  const json j = parse_file(path);
  ProblemSpec spec;
  spec.n = j.at("n").get<int>();
  spec.constraint = constraint_from_json(j);
  if (j.contains("edges")) {
    GraphInstance g;
    g.n = spec.n;
    g.family = family_from_name(j.value("family", "custom"));
    for (const auto& e : j.at("edges")) {
      GraphEdge edge;
      edge.u = e.at(0).get<int>();
      edge.v = e.at(1).get<int>();
      edge.weight = e.size() > 2 ? e.at(2).get<double>() : 1.0;
      g.edges.push_back(edge);
    }
    validate_graph(g);
    spec.graph = std::move(g);
  } else if (j.contains("W")) {
    const auto& w_rows = j.at("W");
    RMat w(spec.n, spec.n);
    for (int r = 0; r < spec.n; ++r) {
      for (int c = 0; c < spec.n; ++c) {
        w(r, c) = w_rows.at(r).at(c).get<double>();
      }
    }
    RVec c = RVec::Zero(spec.n);
    if (j.contains("c")) {
      for (int i = 0; i < spec.n; ++i) c[i] = j.at("c").at(i).get<double>();
    }
    spec.qubo = make_qubo(spec.n, std::move(w), std::move(c), j.value("c0", 0.0));
  } else {
    throw IoError("instance file needs either 'edges' or 'W': " + path);
  }
  return spec;
}

void save_instance(const std::string& path, const ProblemSpec& spec) {
  json j;
  j["n"] = spec.n;
  if (spec.constraint.kind != ConstraintKind::None) {
    j["constraint"] = constraint_to_json(spec.constraint);
  }
  if (spec.graph) {
    j["family"] = family_name(spec.graph->family);
    json edges = json::array();
    for (const auto& e : spec.graph->edges) {
      edges.push_back(json::array({e.u, e.v, e.weight}));
    }
    j["edges"] = std::move(edges);
  } else if (spec.qubo) {
    json w = json::array();
    for (int r = 0; r < spec.n; ++r) {
      json row = json::array();
      for (int c = 0; c < spec.n; ++c) row.push_back(spec.qubo->w(r, c));
      w.push_back(std::move(row));
    }
    j["W"] = std::move(w);
    json c = json::array();
    for (int i = 0; i < spec.n; ++i) c.push_back(spec.qubo->c[i]);
    j["c"] = std::move(c);
    j["c0"] = spec.qubo->c0;
  } else {
    throw StructuralError("problem spec holds neither a graph nor a QUBO");
  }
  write_file(path, j.dump(2) + "\n");
}

QaoaParams load_params(const std::string& path) {
  const json j = parse_file(path);
  QaoaParams params;
  for (const auto& g : j.at("gammas")) params.gammas.push_back(g.get<double>());
  for (const auto& b : j.at("betas")) params.betas.push_back(b.get<double>());
  params.validate();
  return params;
}

void save_params(const std::string& path, const QaoaParams& params) {
  json j;
  j["gammas"] = params.gammas;
  j["betas"] = params.betas;
  write_file(path, j.dump(2) + "\n");
}

void save_subspace(const std::string& path, const InvariantSubspace& sub) {
  json j;
  j["n"] = sub.n;
  j["M"] = sub.dimension;
  j["method"] = sub.log.method;
  json basis = json::array();
  for (int k = 0; k < sub.dimension; ++k) {
    json column = json::array();
    for (Eigen::Index i = 0; i < sub.basis.rows(); ++i) {
      column.push_back(sub.basis(i, k).real());
      column.push_back(sub.basis(i, k).imag());
    }
    basis.push_back(std::move(column));
  }
  j["basis"] = std::move(basis);
  write_file(path, j.dump() + "\n");
}

InvariantSubspace load_subspace(const std::string& path) {
  const json j = parse_file(path);
  InvariantSubspace sub;
  sub.n = j.at("n").get<int>();
  sub.dimension = j.at("M").get<int>();
  sub.log.method = j.value("method", "krylov");
  const std::uint64_t dim = 1ULL << sub.n;
  sub.basis.resize(dim, sub.dimension);
  const auto& basis = j.at("basis");
  if (static_cast<int>(basis.size()) != sub.dimension) {
    throw IoError("subspace artifact column count mismatch");
  }
  for (int k = 0; k < sub.dimension; ++k) {
    const auto& column = basis.at(k);
    if (column.size() != 2 * dim) {
      throw IoError("subspace artifact row count mismatch");
    }
    for (std::uint64_t i = 0; i < dim; ++i) {
      sub.basis(i, k) = cxd(column.at(2 * i).get<double>(),
                            column.at(2 * i + 1).get<double>());
    }
  }
  return sub;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("write failed for " + path);
}

std::string file_checksum(const std::string& path) {
  const std::uint64_t h = fnv1a64(read_file(path));
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

}  // namespace subqaoa
