#include "grace/entanglement.hpp"

#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "grace/eigen.hpp"
#include "grace/kernels.hpp"

namespace grace {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) {
    int ra = find(a), rb = find(b);
    if (ra != rb) parent[ra] = rb;
  }
  int components() {
    int c = 0;
    for (int i = 0; i < static_cast<int>(parent.size()); ++i)
      if (find(i) == i) ++c;
    return c;
  }
};

}  // namespace

Matrix EntangledGraph::normalized_laplacian() const {
  return grace::sub(Matrix::identity(propagator.rows()), propagator);
}

Matrix entangle(const Matrix& x) { return matmul_nt(x, x); }

double threshold_cutoff(const Matrix& affinity, double q) {
  return q * mean(affinity);
}

Matrix threshold_affinity(const Matrix& affinity, double q) {
  if (affinity.rows() != affinity.cols())
    throw std::invalid_argument("threshold_affinity: matrix must be square, got " +
                                affinity.shape_str());
  if (!(q > 0.0))
    throw std::invalid_argument("threshold_affinity: q must be > 0");
  Matrix out(affinity.rows(), affinity.cols());
  kernels::threshold_keep(out.data(), affinity.data(),
                          threshold_cutoff(affinity, q), affinity.size());
  return out;
}

EntangledGraph build_propagator(const Matrix& adjacency) {
  const int d = adjacency.rows();
  if (d != adjacency.cols())
    throw std::invalid_argument("build_propagator: adjacency must be square, got " +
                                adjacency.shape_str());

  EntangledGraph g;
  g.affinity = adjacency;
  g.adjacency = adjacency;
  g.adjacency_loops = add(adjacency, Matrix::identity(d));
  g.degrees.resize(d);
  g.propagator = Matrix(d, d);

  int nnz = 0;
  for (std::size_t i = 0; i < adjacency.size(); ++i)
    if (adjacency.data()[i] != 0.0) ++nnz;
  g.nonzero_edges = nnz;

  std::vector<double> inv_sqrt(d);
  for (int i = 0; i < d; ++i) {
    g.degrees[i] = kernels::sum(g.adjacency_loops.row(i),
                                static_cast<std::size_t>(d));
    // the self-loop makes every degree at least 1 for nonnegative adjacency
    assert(g.degrees[i] > 0.0);
    inv_sqrt[i] = 1.0 / std::sqrt(g.degrees[i]);
  }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      g.propagator(i, j) =
          inv_sqrt[i] * inv_sqrt[j] * g.adjacency_loops(i, j);
  return g;
}

EntangledGraph build_graph(const Matrix& x, double q) {
  Matrix affinity = entangle(x);
  EntangledGraph g = build_propagator(threshold_affinity(affinity, q));
  g.affinity = std::move(affinity);
  g.q = q;
  return g;
}

LaplacianDiagnostics diagnostics(const EntangledGraph& g) {
  LaplacianDiagnostics d;
  EigenResult eig = sym_eigen(g.normalized_laplacian());
  d.eigenvalues = eig.eigenvalues;
  for (double v : d.eigenvalues)
    if (v <= 1e-8) ++d.zero_multiplicity;

  const int n = g.node_count();
  UnionFind uf(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (g.adjacency(i, j) != 0.0) uf.unite(i, j);
  d.component_count = uf.components();
  return d;
}

std::vector<std::pair<double, double>> spectral_response(
    const EntangledGraph& g) {
  EigenResult eig = sym_eigen(g.normalized_laplacian());
  const int n = g.node_count();
  std::vector<std::pair<double, double>> response;
  response.reserve(n);
  Matrix u(n, 1);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) u(k, 0) = eig.eigenvectors(k, i);
    Matrix mu = matmul(g.propagator, u);
    double gain = frobenius_norm(mu) / frobenius_norm(u);
    response.emplace_back(eig.eigenvalues[i], gain);
  }
  return response;
}

nlohmann::json spectral_certificate(const EntangledGraph& g) {
  LaplacianDiagnostics d = diagnostics(g);
  auto gains = spectral_response(g);
  nlohmann::json gain_table = nlohmann::json::array();
  for (auto& [lambda, gain] : gains)
    gain_table.push_back({{"eigenvalue", lambda}, {"gain", gain}});
  return nlohmann::json{
      {"d", g.node_count()},
      {"q", g.q},
      {"nnz", g.nonzero_edges},
      {"eigenvalue_min", d.eigenvalues.front()},
      {"eigenvalue_max", d.eigenvalues.back()},
      {"zero_multiplicity", d.zero_multiplicity},
      {"component_count", d.component_count},
      {"gain_table", gain_table},
  };
}

GraphVars build_graph_on_tape(Tape& tape, Var x, double q) {
  GraphVars g;
  g.affinity = tape.matmul_nt(x, x);
  g.cutoff = threshold_cutoff(tape.value(g.affinity), q);
  g.adjacency = tape.threshold_keep(g.affinity, g.cutoff);
  const int d = tape.value(g.adjacency).rows();
  g.adjacency_loops =
      tape.add(g.adjacency, tape.constant(Matrix::identity(d)));
  Var degrees = tape.sum_rows(g.adjacency_loops);
  Var inv_sqrt = tape.rsqrt(degrees);
  Var outer = tape.matmul_nt(inv_sqrt, inv_sqrt);
  g.propagator = tape.hadamard(outer, g.adjacency_loops);
  return g;
}

}  // namespace grace
