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

// RPTF binary tensor files and JSON dataset manifests.
//
// RPTF layout (all integers little-endian):
//   0..3   magic "RPTF"
//   4      format version (1)
//   5      dtype code: 0=f32, 1=u8, 2=u16, 3=u32
//   6      rank (2 or 3)
//   7      reserved, 0
//   8..    rank x u32 dims, order H, W[, C or D]
//   ...    payload, row-major, channel-last, exactly prod(dims) elements

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tensor.hpp"

namespace ripu::io {

inline constexpr std::uint8_t kFormatVersion = 1;
inline constexpr std::size_t kHeaderBytes = 8;

enum class DType : std::uint8_t { kF32 = 0, kU8 = 1, kU16 = 2, kU32 = 3 };

std::size_t DTypeSize(DType dtype);
const char* DTypeName(DType dtype);

struct RawTensor {
  DType dtype = DType::kF32;
  std::vector<std::uint32_t> dims;
  std::vector<std::uint8_t> payload;  // little-endian element bytes

  std::size_t ElementCount() const;
};

std::vector<std::uint8_t> Encode(const RawTensor& tensor);
// Throws kParse errors that name the offending byte offset.
RawTensor Decode(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> ReadBytes(const std::filesystem::path& path);
void WriteBytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

// What the caller expects a file to hold; decides how rank-3 f32 is typed.
enum class TensorKind { kPrediction, kFeatures, kLabels, kPlane };

using AnyTensor = std::variant<PredictionMap, FeatureMap, LabelMap, Grid2D<float>>;

RawTensor ToRaw(const PredictionMap& pred);
RawTensor ToRaw(const FeatureMap& feats);
RawTensor ToRaw(const LabelMap& labels);
RawTensor ToRaw(const Grid2D<float>& plane);
RawTensor ToRaw(const RealGrid& plane);  // narrowed to f32

AnyTensor FromRaw(const RawTensor& raw, TensorKind expect);

template <typename T>
void WriteTensor(const std::filesystem::path& path, const T& tensor) {
  WriteBytes(path, Encode(ToRaw(tensor)));
}

AnyTensor ReadTensor(const std::filesystem::path& path, TensorKind expect);
PredictionMap ReadPrediction(const std::filesystem::path& path);
FeatureMap ReadFeatures(const std::filesystem::path& path);
LabelMap ReadLabels(const std::filesystem::path& path);
Grid2D<float> ReadPlane(const std::filesystem::path& path);

enum class Split { kTrain, kVal };

struct ManifestEntry {
  std::filesystem::path features;  // resolved against the manifest directory
  std::filesystem::path labels;
  Split split = Split::kTrain;
};

struct DatasetManifest {
  int classes = 0;
  std::vector<std::string> class_names;
  std::vector<ManifestEntry> source;
  std::vector<ManifestEntry> target;

  std::size_t EntryCount() const { return source.size() + target.size(); }
};

// Parses and validates every referenced tensor.
DatasetManifest LoadManifest(const std::filesystem::path& path);
// Paths are written relative to the manifest's directory when possible.
void SaveManifest(const std::filesystem::path& path, const DatasetManifest& manifest);

struct Sample {
  FeatureMap features;
  LabelMap labels;
};

struct Dataset {
  int classes = 0;
  std::vector<std::string> class_names;
  std::vector<Sample> source_train;
  std::vector<Sample> source_val;
  std::vector<Sample> target_train;
  std::vector<Sample> target_val;

  int FeatureDims() const;
};

Dataset LoadDataset(const DatasetManifest& manifest);

}  // namespace ripu::io
