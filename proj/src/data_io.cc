/*
 * Copyright 2026 The LDP Audit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "ldp_audit/data_io.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>

#include "ldp_audit/ldp_mechanism.h"
#include "ldp_audit/rng.h"

namespace ldp_audit {

void Dataset::Validate() const {
  if (examples.empty()) throw std::invalid_argument("dataset is empty");
  for (const auto& ex : examples) {
    if (ex.label < 0 || ex.label >= num_classes) {
      throw std::invalid_argument("dataset label out of range");
    }
    if (ex.features.size() != static_cast<std::size_t>(input_dim)) {
      throw std::invalid_argument("dataset feature length mismatch");
    }
  }
}

std::vector<std::vector<double>> BlobCenters(const SyntheticSpec& spec) {
  if (spec.num_classes < 1 || spec.input_dim < 1) {
    throw std::invalid_argument("synthetic spec sizes must be positive");
  }
  Rng rng = Rng::ForStream(spec.seed, {0});
  std::vector<std::vector<double>> dirs;
  dirs.reserve(spec.num_classes);
  for (int c = 0; c < spec.num_classes; ++c) {
    std::vector<double> u = SampleUnitSphere(spec.input_dim, rng);
    if (c < spec.input_dim) {
      // Gram-Schmidt against earlier directions.
      for (const auto& prev : dirs) {
        const double proj = Dot(u, prev);
        for (int i = 0; i < spec.input_dim; ++i) u[i] -= proj * prev[i];
      }
      const double norm = L2Norm(u);
      for (double& x : u) x /= norm;
    }
    dirs.push_back(std::move(u));
  }
  for (auto& u : dirs) {
    for (double& x : u) x *= spec.class_separation;
  }
  return dirs;
}

Dataset GenerateBlobs(const SyntheticSpec& spec) {
  if (spec.examples_per_class < 1) {
    throw std::invalid_argument("examples_per_class must be positive");
  }
  const auto centers = BlobCenters(spec);
  Rng rng = Rng::ForStream(spec.seed, {1});
  Dataset ds;
  ds.num_classes = spec.num_classes;
  ds.input_dim = spec.input_dim;
  ds.examples.reserve(static_cast<std::size_t>(spec.num_classes) *
                      spec.examples_per_class);
  for (int c = 0; c < spec.num_classes; ++c) {
    for (int k = 0; k < spec.examples_per_class; ++k) {
      Example ex{centers[c], c};
      for (double& x : ex.features) x += spec.noise_sigma * rng.Normal();
      ds.examples.push_back(std::move(ex));
    }
  }
  return ds;
}

namespace {

uint32_t ReadBigEndian32(std::span<const uint8_t> bytes, std::size_t offset) {
  if (bytes.size() < offset + 4) {
    throw std::runtime_error("truncated IDX header");
  }
  return (uint32_t{bytes[offset]} << 24) | (uint32_t{bytes[offset + 1]} << 16) |
         (uint32_t{bytes[offset + 2]} << 8) | uint32_t{bytes[offset + 3]};
}

void AppendBigEndian32(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v >> 24));
  out.push_back(static_cast<uint8_t>(v >> 16));
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v));
}

std::vector<uint8_t> ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return std::vector<uint8_t>(std::istreambuf_iterator<char>(in),
                              std::istreambuf_iterator<char>());
}

}  // namespace

IdxImages ParseIdxImages(std::span<const uint8_t> bytes) {
  if (ReadBigEndian32(bytes, 0) != kIdxImageMagic) {
    throw std::runtime_error("bad magic in IDX image file");
  }
  IdxImages out;
  out.count = ReadBigEndian32(bytes, 4);
  out.rows = ReadBigEndian32(bytes, 8);
  out.cols = ReadBigEndian32(bytes, 12);
  const std::size_t image_size = std::size_t{out.rows} * out.cols;
  if (bytes.size() < 16 + image_size * out.count) {
    throw std::runtime_error("truncated IDX image data");
  }
  out.pixels.resize(out.count);
  const uint8_t* p = bytes.data() + 16;
  for (auto& image : out.pixels) {
    image.resize(image_size);
    for (std::size_t i = 0; i < image_size; ++i) image[i] = *p++ / 255.0;
  }
  return out;
}

std::vector<int> ParseIdxLabels(std::span<const uint8_t> bytes) {
  if (ReadBigEndian32(bytes, 0) != kIdxLabelMagic) {
    throw std::runtime_error("bad magic in IDX label file");
  }
  const uint32_t count = ReadBigEndian32(bytes, 4);
  if (bytes.size() < 8 + std::size_t{count}) {
    throw std::runtime_error("truncated IDX label data");
  }
  return std::vector<int>(bytes.begin() + 8, bytes.begin() + 8 + count);
}

IdxImages LoadIdxImages(const std::filesystem::path& path) {
  return ParseIdxImages(ReadFile(path));
}

std::vector<int> LoadIdxLabels(const std::filesystem::path& path) {
  return ParseIdxLabels(ReadFile(path));
}

std::vector<uint8_t> EncodeIdxImages(uint32_t rows, uint32_t cols,
                                     std::span<const uint8_t> raw_pixels) {
  const std::size_t image_size = std::size_t{rows} * cols;
  if (image_size == 0 || raw_pixels.size() % image_size != 0) {
    throw std::invalid_argument("pixel buffer is not a whole number of images");
  }
  std::vector<uint8_t> out;
  AppendBigEndian32(out, kIdxImageMagic);
  AppendBigEndian32(out, static_cast<uint32_t>(raw_pixels.size() / image_size));
  AppendBigEndian32(out, rows);
  AppendBigEndian32(out, cols);
  out.insert(out.end(), raw_pixels.begin(), raw_pixels.end());
  return out;
}

std::vector<uint8_t> EncodeIdxLabels(std::span<const uint8_t> labels) {
  std::vector<uint8_t> out;
  AppendBigEndian32(out, kIdxLabelMagic);
  AppendBigEndian32(out, static_cast<uint32_t>(labels.size()));
  out.insert(out.end(), labels.begin(), labels.end());
  return out;
}

Dataset MakeImageDataset(const IdxImages& images, std::span<const int> labels,
                         int num_classes) {
  if (images.pixels.size() != labels.size()) {
    throw std::runtime_error("image count " + std::to_string(images.count) +
                             " != label count " +
                             std::to_string(labels.size()));
  }
  Dataset ds;
  ds.num_classes = num_classes;
  ds.input_dim = static_cast<int>(images.rows * images.cols);
  ds.examples.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    ds.examples.push_back(Example{images.pixels[i], labels[i]});
  }
  ds.Validate();
  return ds;
}

Dataset FilterByLabel(const Dataset& ds, int label) {
  if (label < 0 || label >= ds.num_classes) {
    throw std::invalid_argument("label out of range");
  }
  Dataset out{{}, ds.num_classes, ds.input_dim};
  std::copy_if(ds.examples.begin(), ds.examples.end(),
               std::back_inserter(out.examples),
               [label](const Example& ex) { return ex.label == label; });
  if (out.examples.empty()) {
    throw std::invalid_argument("no examples with label " +
                                std::to_string(label));
  }
  return out;
}

}  // namespace ldp_audit
