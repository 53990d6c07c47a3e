#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "grace/matrix.hpp"

namespace grace {

enum class MaskMode { background, black };

const char* mask_mode_name(MaskMode m);
MaskMode mask_mode_from_name(const std::string& name);

/// Configuration of the synthetic video generator. Frames evolve as a
/// stationary AR(1) process over a Gaussian base field; fake samples add a
/// fixed class template (scaled by signal_amplitude) to every valid frame.
struct GeneratorConfig {
  int frames = 16;
  int height = 4;
  int width = 4;
  int channels_in = 8;
  double signal_amplitude = 0.8;
  double temporal_coherence = 0.6;  // AR(1) coefficient, < 1
  // background replacements are coherent content, not pixel noise: each one
  // carries a frame-wide per-channel offset with this standard deviation
  double background_shift = 2.0;
  MaskMode mask_mode = MaskMode::background;
  std::uint64_t template_seed = 0x7E3A11;

  void validate() const;
  int locations() const { return height * width; }
  int node_count() const { return frames * height * width; }

  /// The class template: a fixed (h*w) x c_in pattern, unit RMS, zero mean.
  /// Deterministic in template_seed.
  Matrix class_template() const;
};

/// One synthetic video: per-frame feature maps stored as (h*w) x c_in
/// matrices with location index i*w + j.
struct SequenceSample {
  std::vector<Matrix> frames;
  int label = 0;  // 0 = real, 1 = fake
  std::vector<bool> validity;
  std::uint64_t seed = 0;
  int height = 0;
  int width = 0;
  int channels = 0;
  double background_shift = 0.0;  // carried from the generator config

  int frame_count() const { return static_cast<int>(frames.size()); }
};

SequenceSample generate_sample(const GeneratorConfig& cfg, int label,
                               std::uint64_t seed);

// Replaces floor(mask_ratio * N) uniformly chosen frames with class-free
// content: in background mode a fresh Gaussian field plus a frame-wide
// per-channel offset (the sample's background_shift), in black mode zeros.
// The replaced frames are marked invalid.
SequenceSample apply_mask(const SequenceSample& s, double mask_ratio,
                          MaskMode mode, std::uint64_t seed);

}  // namespace grace
