// Copyright 2026 The ripu Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tensor_io.hpp"

namespace ripu::synth {

enum class Domain { kSource, kTarget };

struct SceneConfig {
  int height = 64;
  int width = 64;
  int classes = 6;
  int dims = 8;
  // Geometric class prior p_c ~ ratio^c, unless `priors` is given.
  double prior_ratio = 0.5;
  std::vector<double> priors;
  // Classes [0, head_classes) come from thresholded smooth noise; the rest
  // are painted as small objects.
  int head_classes = 3;
  int smoothness = 6;  // box-blur radius of the head-class noise field
  int objects_min = 1;
  int objects_max = 24;
  int object_size_min = 3;
  int object_size_max = 9;
  double mean_scale = 2.0;    // norm of the class-mean feature vectors
  double boundary_mix = 0.4;  // weight of the 3x3 neighborhood mean in the clean feature
  double noise = 0.5;         // sigma of the additive Gaussian feature noise
  double shift = 1.0;         // strength of the target affine transform on the means
  double tail_boost = 1.5;    // target-domain multiplier on tail-class priors
  std::uint64_t seed = 1;

  // Priors after defaulting, with the target re-weighting applied.
  std::vector<double> DomainPriors(Domain domain) const;
  // Throws kValidation for infeasible configurations.
  void Validate() const;
};

// Class means per domain: source means are scaled orthonormal directions
// (when dims >= classes); target means are A * mu + b.
std::vector<std::vector<double>> ClassMeans(const SceneConfig& config, Domain domain);

// Deterministic in (config, domain, first_index + i) for image i.
std::vector<io::Sample> GenerateDomain(const SceneConfig& config, Domain domain, int count,
                                       int first_index = 0);

struct Preset {
  std::string name;
  SceneConfig scene;
  int source_train = 100;
  int target_train = 100;
  int target_val = 20;
  std::vector<std::string> class_names;
};

std::vector<std::string> PresetNames();
Preset GetPreset(std::string_view name);

// Applies a JSON object of scene fields (plus source_train, target_train,
// target_val); unknown keys are usage errors.
void ApplyOverrides(Preset& preset, std::string_view json);
std::string PresetJson(const Preset& preset);

// Builds an in-memory dataset for `preset` (with its seed replaced by `seed`).
io::Dataset BuildBenchmark(const Preset& preset);

// Writes RPTF files plus manifest.json under `out_dir` and returns the manifest.
io::DatasetManifest EmitBenchmark(const std::filesystem::path& out_dir, const Preset& preset);

}  // namespace ripu::synth
