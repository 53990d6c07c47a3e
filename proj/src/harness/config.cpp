#include "grace/harness/config.hpp"

#include <fstream>
#include <stdexcept>

namespace grace::harness {

namespace {

template <typename T>
void read_if(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

ExperimentConfig ExperimentConfig::desk_default() {
  ExperimentConfig cfg;
  cfg.generator = GeneratorConfig{};
  cfg.model = ModelHyper{};
  cfg.train.learning_rate = 2e-3;
  cfg.train.epochs = 30;
  cfg.train.batch_size = 8;
  cfg.train.seed = cfg.seed;
  cfg.num_samples = 500;
  return cfg;
}

void ExperimentConfig::validate() const {
  generator.validate();
  model.validate();
  train.validate();
  if (model.channels_in != generator.channels_in)
    throw std::invalid_argument(
        "config: model.channels_in must match generator.channels_in");
  if (num_samples < 2)
    throw std::invalid_argument("config: num_samples must be >= 2");
  for (double r : eval.mask_ratios)
    if (!(r >= 0.0 && r <= 1.0))
      throw std::invalid_argument("config: eval mask ratios must lie in [0,1]");
  if (eval.mask_ratios.empty() || eval.mask_modes.empty())
    throw std::invalid_argument("config: evaluation grid is empty");
}

void ExperimentConfig::set_master_seed(std::uint64_t s) {
  seed = s;
  train.seed = s;
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  nlohmann::json modes = nlohmann::json::array();
  for (MaskMode m : cfg.eval.mask_modes) modes.push_back(mask_mode_name(m));
  return nlohmann::json{
      {"seed", cfg.seed},
      {"num_samples", cfg.num_samples},
      {"generator",
       {{"frames", cfg.generator.frames},
        {"height", cfg.generator.height},
        {"width", cfg.generator.width},
        {"channels_in", cfg.generator.channels_in},
        {"signal_amplitude", cfg.generator.signal_amplitude},
        {"temporal_coherence", cfg.generator.temporal_coherence},
        {"mask_mode", mask_mode_name(cfg.generator.mask_mode)},
        {"template_seed", cfg.generator.template_seed}}},
      {"model",
       {{"channels_in", cfg.model.channels_in},
        {"channels", cfg.model.channels},
        {"gcn_layers", cfg.model.gcn_layers},
        {"gcn_dim", cfg.model.gcn_dim},
        {"readout_dim", cfg.model.readout_dim},
        {"classes", cfg.model.classes},
        {"threshold_q", cfg.model.threshold_q},
        {"sparsity_alpha", cfg.model.sparsity_alpha},
        {"glspr", cfg.model.glspr},
        {"sparsity_constraint", cfg.model.sparsity_constraint}}},
      {"train",
       {{"learning_rate", cfg.train.learning_rate},
        {"epochs", cfg.train.epochs},
        {"decay_factor", cfg.train.decay_factor},
        {"decay_every", cfg.train.decay_every},
        {"batch_size", cfg.train.batch_size},
        {"seed", cfg.train.seed},
        {"train_mask_ratio", cfg.train.train_mask_ratio},
        {"train_mask_mode", mask_mode_name(cfg.train.train_mask_mode)}}},
      {"eval", {{"mask_ratios", cfg.eval.mask_ratios}, {"mask_modes", modes}}},
  };
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg = ExperimentConfig::desk_default();
  read_if(j, "seed", cfg.seed);
  read_if(j, "num_samples", cfg.num_samples);
  bool train_seed_given = false;

  if (j.contains("generator")) {
    const auto& g = j.at("generator");
    read_if(g, "frames", cfg.generator.frames);
    read_if(g, "height", cfg.generator.height);
    read_if(g, "width", cfg.generator.width);
    read_if(g, "channels_in", cfg.generator.channels_in);
    read_if(g, "signal_amplitude", cfg.generator.signal_amplitude);
    read_if(g, "temporal_coherence", cfg.generator.temporal_coherence);
    read_if(g, "template_seed", cfg.generator.template_seed);
    if (g.contains("mask_mode"))
      cfg.generator.mask_mode =
          mask_mode_from_name(g.at("mask_mode").get<std::string>());
  }
  if (j.contains("model")) {
    const auto& m = j.at("model");
    read_if(m, "channels_in", cfg.model.channels_in);
    read_if(m, "channels", cfg.model.channels);
    read_if(m, "gcn_layers", cfg.model.gcn_layers);
    read_if(m, "gcn_dim", cfg.model.gcn_dim);
    read_if(m, "readout_dim", cfg.model.readout_dim);
    read_if(m, "classes", cfg.model.classes);
    read_if(m, "threshold_q", cfg.model.threshold_q);
    read_if(m, "sparsity_alpha", cfg.model.sparsity_alpha);
    read_if(m, "glspr", cfg.model.glspr);
    read_if(m, "sparsity_constraint", cfg.model.sparsity_constraint);
  }
  if (j.contains("train")) {
    const auto& t = j.at("train");
    read_if(t, "learning_rate", cfg.train.learning_rate);
    read_if(t, "epochs", cfg.train.epochs);
    read_if(t, "decay_factor", cfg.train.decay_factor);
    read_if(t, "decay_every", cfg.train.decay_every);
    read_if(t, "batch_size", cfg.train.batch_size);
    read_if(t, "train_mask_ratio", cfg.train.train_mask_ratio);
    if (t.contains("train_mask_mode"))
      cfg.train.train_mask_mode =
          mask_mode_from_name(t.at("train_mask_mode").get<std::string>());
    if (t.contains("seed")) {
      cfg.train.seed = t.at("seed").get<std::uint64_t>();
      train_seed_given = true;
    }
  }
  if (!train_seed_given) cfg.train.seed = cfg.seed;

  if (j.contains("eval")) {
    const auto& e = j.at("eval");
    if (e.contains("mask_ratios"))
      cfg.eval.mask_ratios = e.at("mask_ratios").get<std::vector<double>>();
    if (e.contains("mask_modes")) {
      cfg.eval.mask_modes.clear();
      for (const auto& name : e.at("mask_modes"))
        cfg.eval.mask_modes.push_back(
            mask_mode_from_name(name.get<std::string>()));
    }
  }
  cfg.model.channels_in = cfg.generator.channels_in;
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  in >> j;
  return config_from_json(j);
}

std::string config_fingerprint(const ExperimentConfig& cfg) {
  const std::string canonical = to_json(cfg).dump();
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  char buf[17];
  static const char* hex = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = hex[h & 0xF];
    h >>= 4;
  }
  buf[16] = '\0';
  return std::string(buf);
}

}  // namespace grace::harness
