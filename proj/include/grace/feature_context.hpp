#pragma once

#include "grace/matrix.hpp"
#include "grace/sample.hpp"
#include "grace/tape.hpp"

namespace grace {

/// Row index of frame n, spatial location (i, j) in the stacked feature
/// context: all locations of frame 0 first, then frame 1, and so on.
inline int node_index(int frame, int i, int j, int height, int width) {
  return frame * height * width + i * width + j;
}

/// Stacks the raw per-location feature vectors of every frame into a
/// d x c_in matrix (d = N*h*w) in node_index order.
Matrix stack_locations(const SequenceSample& s);

/// Feature context: every location vector mapped through
/// x -> max(0, P^T x + bias) and placed at its node row.
Matrix assemble_features(const SequenceSample& s, const Matrix& projector,
                         const Matrix& bias);

/// Tape variant; `projector` (c_in x c) and `bias` (1 x c) are tape vars so
/// the sparsity constraint reaches the feature extractor.
Var assemble_features(Tape& tape, const SequenceSample& s, Var projector,
                      Var bias);

}  // namespace grace
