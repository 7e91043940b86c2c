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

#include "synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "json.hpp"
#include "scoring.hpp"
#include "seeds.hpp"

namespace ripu::synth {

namespace {

constexpr std::uint64_t kMeansStream = 11;
constexpr std::uint64_t kShiftStream = 12;
constexpr std::uint64_t kImageStream = 13;

using Vec = std::vector<double>;

Vec GeometricPriors(int classes, double ratio) {
  Vec p(classes);
  double w = 1.0;
  for (int c = 0; c < classes; ++c, w *= ratio) p[c] = w;
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& v : p) v /= total;
  return p;
}

// Scaled orthonormal directions when dims >= classes, Gaussian otherwise.
std::vector<Vec> SourceMeans(const SceneConfig& cfg) {
  std::mt19937_64 rng(DeriveSeed({cfg.seed, kMeansStream}));
  std::normal_distribution<double> normal;
  std::vector<Vec> means;
  for (int c = 0; c < cfg.classes; ++c) {
    Vec v(cfg.dims);
    for (double& x : v) x = normal(rng);
    if (cfg.dims >= cfg.classes) {
      for (const Vec& u : means) {
        const double dot = std::inner_product(v.begin(), v.end(), u.begin(), 0.0);
        for (int d = 0; d < cfg.dims; ++d) v[d] -= dot * u[d];
      }
    }
    const double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    for (double& x : v) x /= norm;
    means.push_back(v);
  }
  for (Vec& v : means) {
    for (double& x : v) x *= cfg.mean_scale;
  }
  return means;
}

void BlurInPlace(RealGrid& field, int radius) {
  if (radius > 0) field = WindowMean(WindowMean(field, radius), radius);
}

LabelMap MakeLabels(const SceneConfig& cfg, const Vec& priors, std::mt19937_64& rng) {
  const int h = cfg.height;
  const int w = cfg.width;
  std::normal_distribution<double> normal;

  // Head classes: rank pixels of a smooth noise field and cut at the head
  // prior quantiles, so the fractions are exact per image.
  RealGrid field(h, w);
  for (auto& v : field.values()) v = normal(rng);
  BlurInPlace(field, cfg.smoothness);
  std::vector<std::size_t> order(field.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return field[a] < field[b]; });
  const double head_mass = std::accumulate(priors.begin(), priors.begin() + cfg.head_classes, 0.0);
  LabelMap labels(h, w, ClassId{0});
  double cumulative = 0.0;
  std::size_t start = 0;
  for (int c = 0; c < cfg.head_classes; ++c) {
    cumulative += priors[c] / head_mass;
    const std::size_t end = c + 1 == cfg.head_classes
                                ? order.size()
                                : static_cast<std::size_t>(std::llround(cumulative * order.size()));
    for (std::size_t r = start; r < end; ++r) labels[order[r]] = static_cast<ClassId>(c);
    start = end;
  }

  // Tail classes: objects painted over head pixels until the class reaches
  // its prior area. The last object is shrunk to the area still missing.
  std::uniform_int_distribution<int> size_dist(cfg.object_size_min, cfg.object_size_max);
  std::uniform_int_distribution<int> row_dist(0, h - 1);
  std::uniform_int_distribution<int> col_dist(0, w - 1);
  std::bernoulli_distribution ellipse(0.5);
  for (int c = cfg.classes - 1; c >= cfg.head_classes; --c) {
    const long target = std::lround(priors[c] * h * w);
    long painted = 0;
    int objects = 0;
    for (int attempt = 0; attempt < 400 && objects < cfg.objects_max &&
                          (painted < target || objects < cfg.objects_min);
         ++attempt) {
      int oh = size_dist(rng);
      int ow = size_dist(rng);
      const long missing = std::max(1L, target - painted);
      if (static_cast<long>(oh) * ow > missing) {
        oh = std::clamp(static_cast<int>(std::lround(std::sqrt(static_cast<double>(missing)))), 1,
                        cfg.object_size_max);
        ow = std::clamp(static_cast<int>((missing + oh - 1) / oh), 1, cfg.object_size_max);
      }
      const bool round = ellipse(rng) && oh >= 3 && ow >= 3;
      const int top = row_dist(rng) - oh / 2;
      const int left = col_dist(rng) - ow / 2;
      long added = 0;
      for (int u = 0; u < oh; ++u) {
        for (int v = 0; v < ow; ++v) {
          if (round) {
            const double dy = (u + 0.5) / oh - 0.5;
            const double dx = (v + 0.5) / ow - 0.5;
            if (dx * dx + dy * dy > 0.25) continue;
          }
          const int i = top + u;
          const int j = left + v;
          if (!labels.Contains(i, j) || labels(i, j) >= cfg.head_classes) continue;
          labels(i, j) = static_cast<ClassId>(c);
          ++added;
        }
      }
      if (added == 0) continue;
      painted += added;
      ++objects;
    }
  }
  return labels;
}

FeatureMap MakeFeatures(const SceneConfig& cfg, const LabelMap& labels,
                        const std::vector<Vec>& means, std::mt19937_64& rng) {
  const int h = cfg.height;
  const int w = cfg.width;
  const int dims = cfg.dims;
  std::normal_distribution<double> normal;
  std::vector<float> feats(static_cast<std::size_t>(h) * w * dims);
  Vec clean(dims);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      const auto win = Window::Around(h, w, i, j, 1);
      std::fill(clean.begin(), clean.end(), 0.0);
      for (int u = win.top; u <= win.bottom; ++u) {
        for (int v = win.left; v <= win.right; ++v) {
          const Vec& m = means[labels(u, v)];
          for (int d = 0; d < dims; ++d) clean[d] += m[d];
        }
      }
      const Vec& own = means[labels(i, j)];
      const double inv_area = 1.0 / win.Area();
      float* out = &feats[(static_cast<std::size_t>(i) * w + j) * dims];
      for (int d = 0; d < dims; ++d) {
        const double mixed =
            (1.0 - cfg.boundary_mix) * own[d] + cfg.boundary_mix * clean[d] * inv_area;
        out[d] = static_cast<float>(mixed + cfg.noise * normal(rng));
      }
    }
  }
  return FeatureMap(h, w, dims, std::move(feats));
}

}  // namespace

std::vector<double> SceneConfig::DomainPriors(Domain domain) const {
  Vec p = priors.empty() ? GeometricPriors(classes, prior_ratio) : priors;
  if (domain == Domain::kTarget && tail_boost != 1.0) {
    for (int c = head_classes; c < classes; ++c) p[c] *= tail_boost;
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    for (double& v : p) v /= total;
  }
  return p;
}

void SceneConfig::Validate() const {
  Require(height >= 1 && width >= 1, "scene: height >= 1 and width >= 1");
  Require(classes >= 2 && classes <= kMaxClasses, "scene: 2 <= classes <= 65535");
  Require(dims >= 1, "scene: dims >= 1");
  Require(head_classes >= 1 && head_classes <= classes, "scene: 1 <= head_classes <= classes");
  Require(prior_ratio > 0.0 && prior_ratio < 1.0, "scene: prior ratio in (0, 1)");
  Require(smoothness >= 0, "scene: smoothness >= 0");
  Require(objects_min >= 0 && objects_max >= objects_min, "scene: 0 <= objects_min <= objects_max");
  Require(object_size_min >= 1 && object_size_max >= object_size_min,
          "scene: 1 <= object_size_min <= object_size_max");
  Require(4 * object_size_max < std::min(height, width),
          "scene: rare-object sizes < min(H, W) / 4");
  Require(noise >= 0.0 && std::isfinite(noise), "scene: noise >= 0");
  Require(boundary_mix >= 0.0 && boundary_mix < 1.0, "scene: boundary mix in [0, 1)");
  Require(mean_scale > 0.0, "scene: mean scale > 0");
  Require(tail_boost > 0.0, "scene: tail boost > 0");
  if (!priors.empty()) {
    Require(static_cast<int>(priors.size()) == classes, "scene: one prior per class");
    const double total = std::accumulate(priors.begin(), priors.end(), 0.0);
    Require(std::abs(total - 1.0) < 1e-9, "scene: priors sum to 1");
  }
  for (Domain d : {Domain::kSource, Domain::kTarget}) {
    const Vec p = DomainPriors(d);
    for (int c = 0; c < classes; ++c) {
      Require(p[c] > 0.0, "scene: priors positive");
      if (c > 0) Require(p[c] < p[c - 1], "scene: priors strictly decreasing");
    }
  }
}

std::vector<std::vector<double>> ClassMeans(const SceneConfig& cfg, Domain domain) {
  auto means = SourceMeans(cfg);
  if (domain == Domain::kSource || cfg.shift == 0.0) return means;
  std::mt19937_64 rng(DeriveSeed({cfg.seed, kShiftStream}));
  std::normal_distribution<double> normal;
  const int dims = cfg.dims;
  const double scale = cfg.shift / std::sqrt(static_cast<double>(dims));
  std::vector<Vec> a(dims, Vec(dims));
  for (int r = 0; r < dims; ++r) {
    for (int c = 0; c < dims; ++c) a[r][c] = (r == c ? 1.0 : 0.0) + 0.5 * scale * normal(rng);
  }
  Vec b(dims);
  for (double& x : b) x = 0.5 * scale * cfg.mean_scale * normal(rng);
  for (Vec& m : means) {
    Vec out(b);
    for (int r = 0; r < dims; ++r) {
      for (int c = 0; c < dims; ++c) out[r] += a[r][c] * m[c];
    }
    m = std::move(out);
  }
  return means;
}

std::vector<io::Sample> GenerateDomain(const SceneConfig& config, Domain domain, int count,
                                       int first_index) {
  config.Validate();
  Require(count >= 1, "generate: count >= 1");
  const auto means = ClassMeans(config, domain);
  const auto priors = config.DomainPriors(domain);
  std::vector<io::Sample> out;
  out.reserve(count);
  for (int n = 0; n < count; ++n) {
    std::mt19937_64 rng(DeriveSeed({config.seed, kImageStream, static_cast<std::uint64_t>(domain),
                                    static_cast<std::uint64_t>(first_index + n)}));
    LabelMap labels = MakeLabels(config, priors, rng);
    FeatureMap feats = MakeFeatures(config, labels, means, rng);
    out.push_back({std::move(feats), std::move(labels)});
  }
  return out;
}

std::vector<std::string> PresetNames() { return {"desk-v1", "desk-mini"}; }

Preset GetPreset(std::string_view name) {
  Preset p;
  p.name = std::string(name);
  p.class_names = {"road", "building", "vegetation", "car", "person", "rider"};
  if (name == "desk-v1") return p;
  if (name == "desk-mini") {
    p.scene.height = 32;
    p.scene.width = 32;
    p.scene.object_size_max = 7;
    p.scene.smoothness = 4;
    p.source_train = 16;
    p.target_train = 16;
    p.target_val = 6;
    return p;
  }
  std::string list;
  for (const auto& n : PresetNames()) list += (list.empty() ? "" : ", ") + n;
  Fail(ErrorKind::kUsage, "unknown preset \"" + std::string(name) + "\" (available: " + list + ")");
}

namespace {

constexpr int kValIndexOffset = 1000000;

template <typename T>
void Assign(const nlohmann::json& v, const std::string& key, T& out) {
  try {
    out = v.get<T>();
  } catch (const nlohmann::json::exception&) {
    Fail(ErrorKind::kValidation, "override \"" + key + "\" has the wrong type");
  }
}

}  // namespace

void ApplyOverrides(Preset& preset, std::string_view json) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorKind::kParse, std::string("overrides: ") + e.what());
  }
  if (!j.is_object()) Fail(ErrorKind::kValidation, "overrides must be a JSON object");
  SceneConfig& s = preset.scene;
  for (const auto& [key, v] : j.items()) {
    if (key == "height") Assign(v, key, s.height);
    else if (key == "width") Assign(v, key, s.width);
    else if (key == "classes") Assign(v, key, s.classes);
    else if (key == "dims") Assign(v, key, s.dims);
    else if (key == "prior_ratio") Assign(v, key, s.prior_ratio);
    else if (key == "priors") Assign(v, key, s.priors);
    else if (key == "head_classes") Assign(v, key, s.head_classes);
    else if (key == "smoothness") Assign(v, key, s.smoothness);
    else if (key == "objects_min") Assign(v, key, s.objects_min);
    else if (key == "objects_max") Assign(v, key, s.objects_max);
    else if (key == "object_size_min") Assign(v, key, s.object_size_min);
    else if (key == "object_size_max") Assign(v, key, s.object_size_max);
    else if (key == "mean_scale") Assign(v, key, s.mean_scale);
    else if (key == "boundary_mix") Assign(v, key, s.boundary_mix);
    else if (key == "noise") Assign(v, key, s.noise);
    else if (key == "shift") Assign(v, key, s.shift);
    else if (key == "tail_boost") Assign(v, key, s.tail_boost);
    else if (key == "seed") Assign(v, key, s.seed);
    else if (key == "source_train") Assign(v, key, preset.source_train);
    else if (key == "target_train") Assign(v, key, preset.target_train);
    else if (key == "target_val") Assign(v, key, preset.target_val);
    else Fail(ErrorKind::kUsage, "unknown scene field \"" + key + "\"");
  }
  s.Validate();
  Require(preset.source_train >= 1 && preset.target_train >= 1 && preset.target_val >= 1,
          "preset: every split has at least one image");
}

std::string PresetJson(const Preset& p) {
  const SceneConfig& s = p.scene;
  nlohmann::json j = {
      {"preset", p.name},
      {"height", s.height},
      {"width", s.width},
      {"classes", s.classes},
      {"dims", s.dims},
      {"prior_ratio", s.prior_ratio},
      {"priors", s.DomainPriors(Domain::kSource)},
      {"target_priors", s.DomainPriors(Domain::kTarget)},
      {"head_classes", s.head_classes},
      {"smoothness", s.smoothness},
      {"objects_min", s.objects_min},
      {"objects_max", s.objects_max},
      {"object_size_min", s.object_size_min},
      {"object_size_max", s.object_size_max},
      {"mean_scale", s.mean_scale},
      {"boundary_mix", s.boundary_mix},
      {"noise", s.noise},
      {"shift", s.shift},
      {"tail_boost", s.tail_boost},
      {"seed", s.seed},
      {"source_train", p.source_train},
      {"target_train", p.target_train},
      {"target_val", p.target_val},
  };
  return j.dump(2);
}

io::Dataset BuildBenchmark(const Preset& preset) {
  io::Dataset data;
  data.classes = preset.scene.classes;
  data.class_names = preset.class_names;
  data.class_names.resize(data.classes);
  for (int c = 0; c < data.classes; ++c) {
    if (data.class_names[c].empty()) data.class_names[c] = "class" + std::to_string(c);
  }
  data.source_train = GenerateDomain(preset.scene, Domain::kSource, preset.source_train);
  data.target_train = GenerateDomain(preset.scene, Domain::kTarget, preset.target_train);
  data.target_val =
      GenerateDomain(preset.scene, Domain::kTarget, preset.target_val, kValIndexOffset);
  return data;
}

io::DatasetManifest EmitBenchmark(const std::filesystem::path& out_dir, const Preset& preset) {
  const io::Dataset data = BuildBenchmark(preset);
  std::error_code ec;
  std::filesystem::create_directories(out_dir / "source", ec);
  std::filesystem::create_directories(out_dir / "target", ec);
  if (ec) Fail(ErrorKind::kIo, "cannot create output directory " + out_dir.string());

  io::DatasetManifest manifest;
  manifest.classes = data.classes;
  manifest.class_names = data.class_names;
  auto emit = [&](const std::vector<io::Sample>& samples, const char* domain, const char* split,
                  io::Split tag, std::vector<io::ManifestEntry>& entries) {
    for (std::size_t n = 0; n < samples.size(); ++n) {
      char stem[64];
      std::snprintf(stem, sizeof stem, "%s_%04zu", split, n);
      io::ManifestEntry e;
      e.features = out_dir / domain / (std::string(stem) + ".features.rptf");
      e.labels = out_dir / domain / (std::string(stem) + ".labels.rptf");
      e.split = tag;
      io::WriteTensor(e.features, samples[n].features);
      io::WriteTensor(e.labels, samples[n].labels);
      entries.push_back(std::move(e));
    }
  };
  emit(data.source_train, "source", "train", io::Split::kTrain, manifest.source);
  emit(data.target_train, "target", "train", io::Split::kTrain, manifest.target);
  emit(data.target_val, "target", "val", io::Split::kVal, manifest.target);
  io::SaveManifest(out_dir / "manifest.json", manifest);
  return manifest;
}

}  // namespace ripu::synth
