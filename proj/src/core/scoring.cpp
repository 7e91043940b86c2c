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

#include "scoring.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ripu {

const char* AnnotationModeName(AnnotationMode mode) {
  return mode == AnnotationMode::kRegion ? "ra" : "pa";
}

AnnotationMode ParseAnnotationMode(std::string_view name) {
  if (name == "ra") return AnnotationMode::kRegion;
  if (name == "pa") return AnnotationMode::kPixel;
  Fail(ErrorKind::kUsage, "unknown annotation mode \"" + std::string(name) + "\" (expected ra or pa)");
}

Window Window::Around(int height, int width, int i, int j, int k) {
  return Window{std::max(0, i - k), std::max(0, j - k), std::min(height - 1, i + k),
                std::min(width - 1, j + k)};
}

namespace {

// Channel-last (H+1) x (W+1) x C inclusive prefix counts of each class.
class ClassSat {
 public:
  ClassSat(const LabelMap& labels, int classes)
      : height_(labels.height()), width_(labels.width()), classes_(classes) {
    const std::size_t row = static_cast<std::size_t>(width_ + 1) * classes_;
    table_.assign(static_cast<std::size_t>(height_ + 1) * row, 0);
    std::vector<std::uint32_t> running(classes_);
    for (int i = 0; i < height_; ++i) {
      std::fill(running.begin(), running.end(), 0);
      const std::uint32_t* above = &table_[static_cast<std::size_t>(i) * row];
      std::uint32_t* here = &table_[static_cast<std::size_t>(i + 1) * row];
      for (int j = 0; j < width_; ++j) {
        const ClassId label = labels(i, j);
        if (label == kUnlabeled) {
          Fail(ErrorKind::kValidation, "class histogram: labels must be dense (UNLABELED at " +
                                           std::to_string(i) + "," + std::to_string(j) + ")");
        }
        if (label >= classes_) {
          Fail(ErrorKind::kValidation, "class histogram: label " + std::to_string(label) +
                                           " out of range for " + std::to_string(classes_) +
                                           " classes");
        }
        ++running[label];
        const std::size_t off = static_cast<std::size_t>(j + 1) * classes_;
        for (int c = 0; c < classes_; ++c) here[off + c] = above[off + c] + running[c];
      }
    }
  }

  // Writes the per-class counts of `w` into `out` (length C).
  void Counts(const Window& w, std::uint32_t* out) const {
    const std::size_t row = static_cast<std::size_t>(width_ + 1) * classes_;
    const std::uint32_t* a = &table_[static_cast<std::size_t>(w.bottom + 1) * row +
                                     static_cast<std::size_t>(w.right + 1) * classes_];
    const std::uint32_t* b = &table_[static_cast<std::size_t>(w.top) * row +
                                     static_cast<std::size_t>(w.right + 1) * classes_];
    const std::uint32_t* c = &table_[static_cast<std::size_t>(w.bottom + 1) * row +
                                     static_cast<std::size_t>(w.left) * classes_];
    const std::uint32_t* d = &table_[static_cast<std::size_t>(w.top) * row +
                                     static_cast<std::size_t>(w.left) * classes_];
    for (int k = 0; k < classes_; ++k) out[k] = a[k] - b[k] - c[k] + d[k];
  }

 private:
  int height_;
  int width_;
  int classes_;
  std::vector<std::uint32_t> table_;
};

// n * ln(n) for n in [0, max_n], with 0 ln 0 = 0.
std::vector<double> NLogNTable(int max_n) {
  std::vector<double> table(static_cast<std::size_t>(max_n) + 1, 0.0);
  for (int n = 2; n <= max_n; ++n) table[n] = n * std::log(static_cast<double>(n));
  return table;
}

// Entropy of counts/total: ln N - (1/N) sum n ln n.
double CountEntropy(const std::uint32_t* counts, int classes, std::uint32_t total,
                    const std::vector<double>& nlogn) {
  double acc = 0.0;
  for (int c = 0; c < classes; ++c) acc += nlogn[counts[c]];
  const double h = std::log(static_cast<double>(total)) - acc / total;
  return h > 0.0 ? h : 0.0;
}

int MaxArea(int height, int width, int k) {
  const long long side_h = std::min<long long>(height, 2LL * k + 1);
  const long long side_w = std::min<long long>(width, 2LL * k + 1);
  return static_cast<int>(side_h * side_w);
}

void RequireSquare(const RegionSpec& spec, const char* who) {
  if (spec.kind != RegionSpec::Kind::kSquareNeighbors) {
    Fail(ErrorKind::kValidation, std::string(who) + ": requires a square-neighbors region");
  }
  Require(spec.k >= 0, "region: k >= 0");
}

}  // namespace

LabelMap PseudoLabels(const PredictionMap& pred) {
  LabelMap out(pred.height(), pred.width(), ClassId{0});
  for (std::size_t p = 0; p < pred.pixels(); ++p) {
    const auto probs = pred.pixel(p);
    out[p] = static_cast<ClassId>(std::max_element(probs.begin(), probs.end()) - probs.begin());
  }
  return out;
}

ClassHistogramField ClassHistograms(const LabelMap& labels, int classes,
                                    const RegionSpec& spec) {
  RequireSquare(spec, "class histogram");
  Require(classes >= 1 && classes <= kMaxClasses, "class histogram: 1 <= classes <= 65535");
  const ClassSat sat(labels, classes);
  ClassHistogramField field;
  field.height = labels.height();
  field.width = labels.width();
  field.classes = classes;
  field.counts.resize(labels.size() * classes);
  field.region_size = Grid2D<std::uint32_t>(labels.height(), labels.width());
  for (int i = 0; i < labels.height(); ++i) {
    for (int j = 0; j < labels.width(); ++j) {
      const auto w = Window::Around(labels.height(), labels.width(), i, j, spec.k);
      sat.Counts(w, &field.counts[labels.Index(i, j) * classes]);
      field.region_size(i, j) = static_cast<std::uint32_t>(w.Area());
    }
  }
  return field;
}

RealGrid RegionImpurity(const ClassHistogramField& hist) {
  std::uint32_t max_size = 1;
  for (auto s : hist.region_size.values()) max_size = std::max(max_size, s);
  const auto nlogn = NLogNTable(static_cast<int>(max_size));
  RealGrid out(hist.height, hist.width);
  for (std::size_t p = 0; p < out.size(); ++p) {
    out[p] = CountEntropy(&hist.counts[p * hist.classes], hist.classes,
                          hist.region_size[p], nlogn);
  }
  return out;
}

RealGrid PixelEntropy(const PredictionMap& pred) {
  RealGrid out(pred.height(), pred.width());
  for (std::size_t p = 0; p < pred.pixels(); ++p) {
    double h = 0.0;
    for (float v : pred.pixel(p)) {
      if (v > 0.0f) {
        const double q = v;
        h -= q * std::log(q);
      }
    }
    out[p] = h > 0.0 ? h : 0.0;
  }
  return out;
}

RealGrid WindowMean(const RealGrid& values, int k) {
  Require(k >= 0, "window mean: k >= 0");
  const int h = values.height();
  const int w = values.width();
  const std::size_t stride = static_cast<std::size_t>(w) + 1;
  std::vector<double> sat(static_cast<std::size_t>(h + 1) * stride, 0.0);
  for (int i = 0; i < h; ++i) {
    double running = 0.0;
    for (int j = 0; j < w; ++j) {
      running += values(i, j);
      sat[(i + 1) * stride + j + 1] = sat[i * stride + j + 1] + running;
    }
  }
  RealGrid out(h, w);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      const auto win = Window::Around(h, w, i, j, k);
      const double sum = sat[(win.bottom + 1) * stride + win.right + 1] -
                         sat[win.top * stride + win.right + 1] -
                         sat[(win.bottom + 1) * stride + win.left] +
                         sat[win.top * stride + win.left];
      out(i, j) = std::max(0.0, sum / win.Area());
    }
  }
  return out;
}

RealGrid RegionUncertainty(const RealGrid& entropy, const RegionSpec& spec,
                           AnnotationMode mode) {
  if (mode == AnnotationMode::kPixel) return entropy;
  RequireSquare(spec, "region uncertainty");
  return WindowMean(entropy, spec.k);
}

AcquisitionMaps ComputeAcquisition(const PredictionMap& pred, const RegionSpec& spec,
                                   AnnotationMode mode) {
  RequireSquare(spec, "acquisition map");
  const int h = pred.height();
  const int w = pred.width();
  const int classes = pred.classes();

  AcquisitionMaps maps;
  {
    // Histograms are consumed window by window; the full count field is
    // never materialized.
    const ClassSat sat(PseudoLabels(pred), classes);
    const auto nlogn = NLogNTable(MaxArea(h, w, spec.k));
    std::vector<std::uint32_t> counts(classes);
    maps.impurity = RealGrid(h, w);
    for (int i = 0; i < h; ++i) {
      for (int j = 0; j < w; ++j) {
        const auto win = Window::Around(h, w, i, j, spec.k);
        sat.Counts(win, counts.data());
        maps.impurity(i, j) =
            CountEntropy(counts.data(), classes, static_cast<std::uint32_t>(win.Area()), nlogn);
      }
    }
  }
  maps.entropy = PixelEntropy(pred);
  maps.uncertainty = RegionUncertainty(maps.entropy, spec, mode);
  maps.score = RealGrid(h, w);
  for (std::size_t p = 0; p < maps.score.size(); ++p) {
    maps.score[p] = maps.uncertainty[p] * maps.impurity[p];
  }
  return maps;
}

RealGrid SoftmaxUncertainty(const PredictionMap& pred) {
  RealGrid out(pred.height(), pred.width());
  for (std::size_t p = 0; p < pred.pixels(); ++p) {
    const auto probs = pred.pixel(p);
    out[p] = 1.0 - static_cast<double>(*std::max_element(probs.begin(), probs.end()));
  }
  return out;
}

}  // namespace ripu
