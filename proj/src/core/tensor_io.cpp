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

#include "tensor_io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <set>

#include "json.hpp"

namespace ripu::io {

namespace {

constexpr char kMagic[4] = {'R', 'P', 'T', 'F'};

template <typename U>
void PutLE(std::vector<std::uint8_t>& out, U value) {
  for (std::size_t b = 0; b < sizeof(U); ++b) {
    out.push_back(static_cast<std::uint8_t>(value >> (8 * b)));
  }
}

template <typename U>
U GetLE(const std::uint8_t* p) {
  U value = 0;
  for (std::size_t b = 0; b < sizeof(U); ++b) {
    value |= static_cast<U>(static_cast<U>(p[b]) << (8 * b));
  }
  return value;
}

[[noreturn]] void ParseFail(std::size_t offset, const std::string& what) {
  Fail(ErrorKind::kParse, "RPTF parse error at byte offset " +
                              std::to_string(offset) + ": " + what);
}

std::string DimsString(const std::vector<std::uint32_t>& dims) {
  std::string s;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(dims[i]);
  }
  return s;
}

RawTensor MakeF32(std::vector<std::uint32_t> dims, std::span<const float> values) {
  RawTensor raw{DType::kF32, std::move(dims), {}};
  raw.payload.reserve(values.size() * 4);
  for (float v : values) PutLE(raw.payload, std::bit_cast<std::uint32_t>(v));
  return raw;
}

std::vector<float> F32Values(const RawTensor& raw) {
  std::vector<float> out(raw.ElementCount());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::bit_cast<float>(GetLE<std::uint32_t>(raw.payload.data() + 4 * i));
  }
  return out;
}

void ExpectLayout(const RawTensor& raw, DType dtype, std::size_t rank,
                  const char* what) {
  if (raw.dtype != dtype || raw.dims.size() != rank) {
    Fail(ErrorKind::kValidation,
         std::string("expected ") + what + " (" + DTypeName(dtype) + ", rank " +
             std::to_string(rank) + "), found " + DTypeName(raw.dtype) +
             " rank " + std::to_string(raw.dims.size()));
  }
}

int Dim(std::uint32_t d) {
  if (d > static_cast<std::uint32_t>(std::numeric_limits<int>::max())) {
    Fail(ErrorKind::kValidation, "dimension too large: " + std::to_string(d));
  }
  return static_cast<int>(d);
}

}  // namespace

std::size_t DTypeSize(DType dtype) {
  switch (dtype) {
    case DType::kF32: return 4;
    case DType::kU8: return 1;
    case DType::kU16: return 2;
    case DType::kU32: return 4;
  }
  return 0;
}

const char* DTypeName(DType dtype) {
  switch (dtype) {
    case DType::kF32: return "f32";
    case DType::kU8: return "u8";
    case DType::kU16: return "u16";
    case DType::kU32: return "u32";
  }
  return "?";
}

std::size_t RawTensor::ElementCount() const {
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

std::vector<std::uint8_t> Encode(const RawTensor& tensor) {
  Require(tensor.dims.size() == 2 || tensor.dims.size() == 3, "RPTF: rank is 2 or 3");
  Require(tensor.payload.size() == tensor.ElementCount() * DTypeSize(tensor.dtype),
          "RPTF: payload holds exactly prod(dims) elements");
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + 4 * tensor.dims.size() + tensor.payload.size());
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  out.push_back(kFormatVersion);
  out.push_back(static_cast<std::uint8_t>(tensor.dtype));
  out.push_back(static_cast<std::uint8_t>(tensor.dims.size()));
  out.push_back(0);
  for (auto d : tensor.dims) PutLE(out, d);
  out.insert(out.end(), tensor.payload.begin(), tensor.payload.end());
  return out;
}

RawTensor Decode(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderBytes) {
    ParseFail(bytes.size(), "truncated header (" + std::to_string(bytes.size()) +
                                " of 8 bytes)");
  }
  if (!std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin(),
                  [](char a, std::uint8_t b) { return static_cast<std::uint8_t>(a) == b; })) {
    ParseFail(0, "bad magic, expected \"RPTF\"");
  }
  if (bytes[4] != kFormatVersion) {
    ParseFail(4, "unsupported format version " + std::to_string(bytes[4]));
  }
  if (bytes[5] > static_cast<std::uint8_t>(DType::kU32)) {
    ParseFail(5, "unknown dtype code " + std::to_string(bytes[5]));
  }
  const std::size_t rank = bytes[6];
  if (rank != 2 && rank != 3) ParseFail(6, "rank must be 2 or 3, found " + std::to_string(rank));
  if (bytes[7] != 0) ParseFail(7, "reserved byte must be 0");

  RawTensor raw;
  raw.dtype = static_cast<DType>(bytes[5]);
  std::size_t offset = kHeaderBytes;
  if (bytes.size() < offset + 4 * rank) {
    ParseFail(bytes.size(), "truncated dimension block");
  }
  for (std::size_t r = 0; r < rank; ++r, offset += 4) {
    const auto d = GetLE<std::uint32_t>(bytes.data() + offset);
    if (d == 0) ParseFail(offset, "dimension " + std::to_string(r) + " is zero");
    raw.dims.push_back(d);
  }
  const std::size_t expected = raw.ElementCount() * DTypeSize(raw.dtype);
  const std::size_t available = bytes.size() - offset;
  if (available < expected) {
    ParseFail(bytes.size(), "truncated payload: dims " + DimsString(raw.dims) +
                                " need " + std::to_string(expected) + " bytes, found " +
                                std::to_string(available));
  }
  if (available > expected) {
    ParseFail(offset + expected, "trailing data after payload");
  }
  raw.payload.assign(bytes.begin() + static_cast<std::ptrdiff_t>(offset), bytes.end());
  return raw;
}

std::vector<std::uint8_t> ReadBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot open for reading: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) Fail(ErrorKind::kIo, "read failed: " + path.string());
  return bytes;
}

void WriteBytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  const auto parent = path.parent_path();
  if (!parent.empty() && !std::filesystem::is_directory(parent)) {
    Fail(ErrorKind::kIo, "parent directory does not exist: " + parent.string());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorKind::kIo, "cannot open for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) Fail(ErrorKind::kIo, "write failed: " + path.string());
}

RawTensor ToRaw(const PredictionMap& pred) {
  return MakeF32({static_cast<std::uint32_t>(pred.height()),
                  static_cast<std::uint32_t>(pred.width()),
                  static_cast<std::uint32_t>(pred.classes())},
                 pred.values());
}

RawTensor ToRaw(const FeatureMap& feats) {
  return MakeF32({static_cast<std::uint32_t>(feats.height()),
                  static_cast<std::uint32_t>(feats.width()),
                  static_cast<std::uint32_t>(feats.dims())},
                 feats.values());
}

RawTensor ToRaw(const LabelMap& labels) {
  RawTensor raw{DType::kU16,
                {static_cast<std::uint32_t>(labels.height()),
                 static_cast<std::uint32_t>(labels.width())},
                {}};
  raw.payload.reserve(labels.size() * 2);
  for (ClassId c : labels.values()) PutLE(raw.payload, c);
  return raw;
}

RawTensor ToRaw(const Grid2D<float>& plane) {
  return MakeF32({static_cast<std::uint32_t>(plane.height()),
                  static_cast<std::uint32_t>(plane.width())},
                 plane.values());
}

RawTensor ToRaw(const RealGrid& plane) {
  std::vector<float> narrowed(plane.values().begin(), plane.values().end());
  return MakeF32({static_cast<std::uint32_t>(plane.height()),
                  static_cast<std::uint32_t>(plane.width())},
                 narrowed);
}

AnyTensor FromRaw(const RawTensor& raw, TensorKind expect) {
  switch (expect) {
    case TensorKind::kPrediction:
      ExpectLayout(raw, DType::kF32, 3, "prediction map");
      return PredictionMap(Dim(raw.dims[0]), Dim(raw.dims[1]), Dim(raw.dims[2]),
                           F32Values(raw));
    case TensorKind::kFeatures:
      ExpectLayout(raw, DType::kF32, 3, "feature map");
      return FeatureMap(Dim(raw.dims[0]), Dim(raw.dims[1]), Dim(raw.dims[2]),
                        F32Values(raw));
    case TensorKind::kPlane:
      ExpectLayout(raw, DType::kF32, 2, "real plane");
      return Grid2D<float>(Dim(raw.dims[0]), Dim(raw.dims[1]), F32Values(raw));
    case TensorKind::kLabels: {
      ExpectLayout(raw, DType::kU16, 2, "label map");
      std::vector<ClassId> labels(raw.ElementCount());
      for (std::size_t i = 0; i < labels.size(); ++i) {
        labels[i] = GetLE<std::uint16_t>(raw.payload.data() + 2 * i);
      }
      return LabelMap(Dim(raw.dims[0]), Dim(raw.dims[1]), std::move(labels));
    }
  }
  Fail(ErrorKind::kUsage, "unknown tensor kind");
}

AnyTensor ReadTensor(const std::filesystem::path& path, TensorKind expect) {
  const auto bytes = ReadBytes(path);
  try {
    return FromRaw(Decode(bytes), expect);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

PredictionMap ReadPrediction(const std::filesystem::path& path) {
  return std::get<PredictionMap>(ReadTensor(path, TensorKind::kPrediction));
}

FeatureMap ReadFeatures(const std::filesystem::path& path) {
  return std::get<FeatureMap>(ReadTensor(path, TensorKind::kFeatures));
}

LabelMap ReadLabels(const std::filesystem::path& path) {
  return std::get<LabelMap>(ReadTensor(path, TensorKind::kLabels));
}

Grid2D<float> ReadPlane(const std::filesystem::path& path) {
  return std::get<Grid2D<float>>(ReadTensor(path, TensorKind::kPlane));
}

// ---------------------------------------------------------------------------
// Manifest

namespace {

using nlohmann::json;

Split ParseSplit(const std::string& s) {
  if (s == "train") return Split::kTrain;
  if (s == "val") return Split::kVal;
  Fail(ErrorKind::kValidation, "manifest: split must be \"train\" or \"val\", found \"" + s + "\"");
}

const char* SplitName(Split s) { return s == Split::kTrain ? "train" : "val"; }

std::vector<ManifestEntry> ParseEntries(const json& doc, const char* key,
                                        const std::filesystem::path& base) {
  std::vector<ManifestEntry> entries;
  if (!doc.contains(key)) return entries;
  const auto& list = doc.at(key);
  if (!list.is_array()) Fail(ErrorKind::kValidation, std::string("manifest: \"") + key + "\" must be an array");
  for (const auto& item : list) {
    ManifestEntry e;
    e.features = base / item.at("features").get<std::string>();
    e.labels = base / item.at("labels").get<std::string>();
    e.split = ParseSplit(item.value("split", std::string("train")));
    entries.push_back(std::move(e));
  }
  return entries;
}

json EntriesJson(const std::vector<ManifestEntry>& entries,
                 const std::filesystem::path& base) {
  json list = json::array();
  for (const auto& e : entries) {
    auto rel = [&](const std::filesystem::path& p) {
      return base.empty() ? p.generic_string() : p.lexically_proximate(base).generic_string();
    };
    list.push_back({{"features", rel(e.features)},
                    {"labels", rel(e.labels)},
                    {"split", SplitName(e.split)}});
  }
  return list;
}

}  // namespace

DatasetManifest LoadManifest(const std::filesystem::path& path) {
  json doc;
  {
    std::ifstream in(path);
    if (!in) Fail(ErrorKind::kIo, "manifest: missing file " + path.string());
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      Fail(ErrorKind::kParse, "manifest: " + path.string() + ": " + e.what());
    }
  }
  const auto base = path.parent_path();
  DatasetManifest m;
  try {
    m.source = ParseEntries(doc, "source", base);
    m.target = ParseEntries(doc, "target", base);
    if (doc.contains("class_names")) {
      m.class_names = doc.at("class_names").get<std::vector<std::string>>();
    }
    if (doc.contains("classes")) m.classes = doc.at("classes").get<int>();
  } catch (const json::exception& e) {
    Fail(ErrorKind::kValidation, "manifest: " + std::string(e.what()));
  }

  std::set<std::filesystem::path> seen;
  int inferred = 0;
  int dims = -1;
  auto check = [&](const ManifestEntry& e) {
    for (const auto& p : {e.features, e.labels}) {
      const auto key = p.lexically_normal();
      if (!seen.insert(key).second) {
        Fail(ErrorKind::kValidation, "manifest: duplicate entry " + p.string());
      }
      if (!std::filesystem::exists(p)) {
        Fail(ErrorKind::kIo, "manifest: missing file " + p.string());
      }
    }
    const auto feats = ReadFeatures(e.features);
    const auto labels = ReadLabels(e.labels);
    if (!labels.SameShape(feats.height(), feats.width())) {
      Fail(ErrorKind::kValidation, "manifest: feature/label shape mismatch for " + e.labels.string());
    }
    if (dims >= 0 && feats.dims() != dims) {
      Fail(ErrorKind::kValidation, "manifest: inconsistent feature dims in " + e.features.string());
    }
    dims = feats.dims();
    const int bound = labels.ClassUpperBound();
    if (m.classes > 0 && bound > m.classes) {
      Fail(ErrorKind::kValidation,
           "manifest: inconsistent class count: " + e.labels.string() + " uses class " +
               std::to_string(bound - 1) + " but classes = " + std::to_string(m.classes));
    }
    inferred = std::max(inferred, bound);
  };
  for (const auto& e : m.source) check(e);
  for (const auto& e : m.target) check(e);

  if (m.classes <= 0) m.classes = inferred;
  if (m.classes <= 0) Fail(ErrorKind::kValidation, "manifest: cannot infer class count");
  if (m.class_names.empty()) {
    for (int c = 0; c < m.classes; ++c) m.class_names.push_back("class" + std::to_string(c));
  }
  if (static_cast<int>(m.class_names.size()) != m.classes) {
    Fail(ErrorKind::kValidation, "manifest: inconsistent class count: " +
                                     std::to_string(m.class_names.size()) +
                                     " class names for " + std::to_string(m.classes) + " classes");
  }
  return m;
}

void SaveManifest(const std::filesystem::path& path, const DatasetManifest& manifest) {
  const auto base = path.parent_path();
  json doc = {{"classes", manifest.classes},
              {"class_names", manifest.class_names},
              {"source", EntriesJson(manifest.source, base)},
              {"target", EntriesJson(manifest.target, base)}};
  const auto text = doc.dump(2) + "\n";
  WriteBytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

int Dataset::FeatureDims() const {
  for (const auto* split : {&source_train, &target_train, &target_val, &source_val}) {
    if (!split->empty()) return split->front().features.dims();
  }
  return 0;
}

Dataset LoadDataset(const DatasetManifest& manifest) {
  Dataset data;
  data.classes = manifest.classes;
  data.class_names = manifest.class_names;
  auto load = [](const ManifestEntry& e) {
    return Sample{ReadFeatures(e.features), ReadLabels(e.labels)};
  };
  for (const auto& e : manifest.source) {
    (e.split == Split::kTrain ? data.source_train : data.source_val).push_back(load(e));
  }
  for (const auto& e : manifest.target) {
    (e.split == Split::kTrain ? data.target_train : data.target_val).push_back(load(e));
  }
  return data;
}

}  // namespace ripu::io
