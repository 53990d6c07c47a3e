#include "grace/harness/manifest.hpp"

#include <stdexcept>

#include "grace/rng.hpp"

namespace grace::harness {

namespace {

constexpr std::uint64_t kSampleSeedStream = 0xDA7A5EED;

std::string split_for(int index_in_class, int class_size) {
  const int train_n = class_size * 8 / 10;
  const int val_n = class_size / 10;
  if (index_in_class < train_n) return "train";
  if (index_in_class < train_n + val_n) return "val";
  return "test";
}

}  // namespace

nlohmann::json make_manifest(const ExperimentConfig& cfg) {
  cfg.validate();
  nlohmann::json samples = nlohmann::json::array();
  int seen[2] = {0, 0};
  for (int i = 0; i < cfg.num_samples; ++i) {
    const int label = i % 2;
    const int class_size = cfg.num_samples / 2 + (label == 0 ? cfg.num_samples % 2 : 0);
    samples.push_back({
        {"id", i},
        {"seed", mix_seed(mix_seed(cfg.seed, kSampleSeedStream),
                          static_cast<std::uint64_t>(i))},
        {"label", label},
        {"split", split_for(seen[label]++, class_size)},
        {"m_r", cfg.train.train_mask_ratio},
        {"mode", mask_mode_name(cfg.train.train_mask_mode)},
    });
  }
  return nlohmann::json{
      {"schema", "grace.manifest.v1"},
      {"seed", cfg.seed},
      {"config_fingerprint", config_fingerprint(cfg)},
      {"generator",
       {{"frames", cfg.generator.frames},
        {"height", cfg.generator.height},
        {"width", cfg.generator.width},
        {"channels_in", cfg.generator.channels_in},
        {"signal_amplitude", cfg.generator.signal_amplitude},
        {"temporal_coherence", cfg.generator.temporal_coherence},
        {"mask_mode", mask_mode_name(cfg.generator.mask_mode)},
        {"template_seed", cfg.generator.template_seed}}},
      {"samples", samples},
  };
}

GeneratorConfig generator_from_manifest(const nlohmann::json& manifest) {
  const auto& g = manifest.at("generator");
  GeneratorConfig cfg;
  cfg.frames = g.at("frames").get<int>();
  cfg.height = g.at("height").get<int>();
  cfg.width = g.at("width").get<int>();
  cfg.channels_in = g.at("channels_in").get<int>();
  cfg.signal_amplitude = g.at("signal_amplitude").get<double>();
  cfg.temporal_coherence = g.at("temporal_coherence").get<double>();
  cfg.mask_mode = mask_mode_from_name(g.at("mask_mode").get<std::string>());
  cfg.template_seed = g.at("template_seed").get<std::uint64_t>();
  return cfg;
}

std::vector<SequenceSample> materialize_split(const nlohmann::json& manifest,
                                              const std::string& split) {
  GeneratorConfig gen = generator_from_manifest(manifest);
  std::vector<SequenceSample> out;
  for (const auto& row : manifest.at("samples")) {
    if (row.at("split").get<std::string>() != split) continue;
    out.push_back(generate_sample(gen, row.at("label").get<int>(),
                                  row.at("seed").get<std::uint64_t>()));
  }
  if (out.empty())
    throw std::runtime_error("manifest: split '" + split + "' is empty");
  return out;
}

}  // namespace grace::harness
