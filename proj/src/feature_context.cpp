#include "grace/feature_context.hpp"

#include <cstring>
#include <stdexcept>

namespace grace {

Matrix stack_locations(const SequenceSample& s) {
  if (s.frames.empty())
    throw std::invalid_argument("stack_locations: sample has no frames");
  const int hw = s.height * s.width;
  const int c = s.channels;
  Matrix out(s.frame_count() * hw, c);
  for (int n = 0; n < s.frame_count(); ++n) {
    const Matrix& f = s.frames[n];
    if (f.rows() != hw || f.cols() != c)
      throw std::invalid_argument("stack_locations: frame " +
                                  std::to_string(n) + " has shape " +
                                  f.shape_str());
    std::memcpy(out.row(n * hw), f.data(), f.size() * sizeof(double));
  }
  return out;
}

Matrix assemble_features(const SequenceSample& s, const Matrix& projector,
                         const Matrix& bias) {
  Matrix raw = stack_locations(s);
  if (projector.rows() != raw.cols())
    throw std::invalid_argument("assemble_features: projector shape " +
                                projector.shape_str() +
                                " does not accept c_in=" +
                                std::to_string(raw.cols()));
  if (bias.rows() != 1 || bias.cols() != projector.cols())
    throw std::invalid_argument("assemble_features: bias shape " +
                                bias.shape_str());
  Matrix pre = matmul(raw, projector);
  for (int i = 0; i < pre.rows(); ++i)
    for (int j = 0; j < pre.cols(); ++j) pre(i, j) += bias(0, j);
  return relu(pre);
}

Var assemble_features(Tape& tape, const SequenceSample& s, Var projector,
                      Var bias) {
  Var raw = tape.constant(stack_locations(s));
  Var pre = tape.add_row_broadcast(tape.matmul(raw, projector), bias);
  return tape.relu(pre);
}

}  // namespace grace
