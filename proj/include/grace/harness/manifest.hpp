#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "grace/harness/config.hpp"
#include "grace/sample.hpp"

namespace grace::harness {

// Dataset manifest: per-sample {id, seed, label, split, m_r, mode} plus the
// generator settings, so every sample is regenerable from the manifest alone.
// Splits are stratified 8:1:1 per class, labels balanced within one sample.
nlohmann::json make_manifest(const ExperimentConfig& cfg);

std::vector<SequenceSample> materialize_split(const nlohmann::json& manifest,
                                              const std::string& split);

GeneratorConfig generator_from_manifest(const nlohmann::json& manifest);

}  // namespace grace::harness
