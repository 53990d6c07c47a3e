#pragma once

#include <utility>
#include <vector>

#include "json.hpp"

#include "grace/matrix.hpp"
#include "grace/tape.hpp"

namespace grace {

/// Entangled affinity graph of one sample: the Gram affinity X X^T, its
/// thresholded adjacency, the self-looped form, degrees, and the symmetric
/// degree-normalized propagator M = D^-1/2 (A + I) D^-1/2.
struct EntangledGraph {
  Matrix affinity;          // X_FE, d x d (equals adjacency when built from A)
  Matrix adjacency;         // A, thresholded
  Matrix adjacency_loops;   // A + I
  std::vector<double> degrees;
  Matrix propagator;        // M
  double q = 0.0;
  int nonzero_edges = 0;    // nnz of A

  int node_count() const { return adjacency.rows(); }
  Matrix normalized_laplacian() const;  // I - M
};

/// X X^T; exactly symmetric by construction.
Matrix entangle(const Matrix& x);

double threshold_cutoff(const Matrix& affinity, double q);

/// Keeps entries strictly above q * mean(affinity), zeroes the rest. The mean
/// runs over all d^2 entries, diagonal included.
Matrix threshold_affinity(const Matrix& affinity, double q);

/// Builds the self-looped, degree-normalized propagator from a symmetric
/// nonnegative adjacency.
EntangledGraph build_propagator(const Matrix& adjacency);

/// entangle -> threshold -> build_propagator, with affinity and q recorded.
EntangledGraph build_graph(const Matrix& x, double q);

struct LaplacianDiagnostics {
  std::vector<double> eigenvalues;  // of I - M, ascending
  int zero_multiplicity = 0;        // eigenvalues <= 1e-8
  int component_count = 0;          // union-find over nonzeros of A
};

LaplacianDiagnostics diagnostics(const EntangledGraph& g);

/// Per eigenpair (lambda_i, u_i) of I - M: gain ||M u_i|| / ||u_i||, which
/// must equal |1 - lambda_i|.
std::vector<std::pair<double, double>> spectral_response(
    const EntangledGraph& g);

/// Spectral certificate for the audit export.
nlohmann::json spectral_certificate(const EntangledGraph& g);

/// Differentiable graph construction on a tape. The threshold mask is fixed
/// from the forward value; gradients flow through kept entries and through
/// the degree normalization.
struct GraphVars {
  Var affinity;
  Var adjacency;
  Var adjacency_loops;
  Var propagator;
  double cutoff = 0.0;
};

GraphVars build_graph_on_tape(Tape& tape, Var x, double q);

}  // namespace grace
