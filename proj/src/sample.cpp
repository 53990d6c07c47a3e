#include "grace/sample.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "grace/rng.hpp"

namespace grace {

namespace {

constexpr std::uint64_t kFrameStream = 0xF5A3ED01;
constexpr std::uint64_t kMaskStream = 0x3A5CED02;

Matrix gaussian_field(Rng& rng, int rows, int cols) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return m;
}

}  // namespace

const char* mask_mode_name(MaskMode m) {
  return m == MaskMode::background ? "background" : "black";
}

MaskMode mask_mode_from_name(const std::string& name) {
  if (name == "background") return MaskMode::background;
  if (name == "black") return MaskMode::black;
  throw std::invalid_argument("unknown mask mode: " + name);
}

void GeneratorConfig::validate() const {
  if (frames < 1 || height < 1 || width < 1 || channels_in < 1)
    throw std::invalid_argument("GeneratorConfig: dimensions must be >= 1");
  if (!(signal_amplitude > 0.0))
    throw std::invalid_argument("GeneratorConfig: signal_amplitude must be > 0");
  if (!(temporal_coherence >= 0.0 && temporal_coherence < 1.0))
    throw std::invalid_argument(
        "GeneratorConfig: temporal_coherence must lie in [0, 1)");
}

Matrix GeneratorConfig::class_template() const {
  Rng rng(mix_seed(template_seed, 0x7E4471));
  Matrix t = gaussian_field(rng, locations(), channels_in);
  // zero-mean so the template is invisible to a plain location average
  double m = mean(t);
  for (std::size_t i = 0; i < t.size(); ++i) t.data()[i] -= m;
  double rms = frobenius_norm(t) / std::sqrt(static_cast<double>(t.size()));
  if (rms > 0.0)
    for (std::size_t i = 0; i < t.size(); ++i) t.data()[i] /= rms;
  return t;
}

SequenceSample generate_sample(const GeneratorConfig& cfg, int label,
                               std::uint64_t seed) {
  cfg.validate();
  if (label != 0 && label != 1)
    throw std::invalid_argument("generate_sample: label must be 0 or 1");

  Rng rng(mix_seed(seed, kFrameStream));
  const int hw = cfg.locations();
  const double phi = cfg.temporal_coherence;
  const double innovation = std::sqrt(1.0 - phi * phi);

  SequenceSample s;
  s.label = label;
  s.seed = seed;
  s.height = cfg.height;
  s.width = cfg.width;
  s.channels = cfg.channels_in;
  s.validity.assign(cfg.frames, true);
  s.frames.reserve(cfg.frames);

  Matrix field = gaussian_field(rng, hw, cfg.channels_in);
  s.frames.push_back(field);
  for (int n = 1; n < cfg.frames; ++n) {
    Matrix eps = gaussian_field(rng, hw, cfg.channels_in);
    Matrix next(hw, cfg.channels_in);
    for (std::size_t i = 0; i < next.size(); ++i)
      next.data()[i] = phi * field.data()[i] + innovation * eps.data()[i];
    s.frames.push_back(next);
    field = std::move(next);
  }

  if (label == 1) {
    Matrix tpl = cfg.class_template();
    for (Matrix& frame : s.frames)
      for (std::size_t i = 0; i < frame.size(); ++i)
        frame.data()[i] += cfg.signal_amplitude * tpl.data()[i];
  }
  return s;
}

SequenceSample apply_mask(const SequenceSample& s, double mask_ratio,
                          MaskMode mode, std::uint64_t seed) {
  if (!(mask_ratio >= 0.0 && mask_ratio <= 1.0))
    throw std::invalid_argument("apply_mask: mask_ratio must lie in [0, 1]");
  const int n = s.frame_count();
  const int k = static_cast<int>(std::floor(mask_ratio * n));
  if (k == 0) return s;

  Rng rng(mix_seed(seed, kMaskStream));
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  // partial Fisher-Yates: the first k entries are the masked frames
  for (int i = 0; i < k; ++i) {
    int j = i + rng.uniform_int(n - i);
    std::swap(order[i], order[j]);
  }
  std::vector<int> chosen(order.begin(), order.begin() + k);
  std::sort(chosen.begin(), chosen.end());

  SequenceSample out = s;
  const int hw = s.height * s.width;
  for (int idx : chosen) {
    out.frames[idx] = mode == MaskMode::black
                          ? Matrix(hw, s.channels)
                          : gaussian_field(rng, hw, s.channels);
    out.validity[idx] = false;
  }
  return out;
}

}  // namespace grace
