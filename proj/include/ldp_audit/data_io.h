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

#ifndef LDP_AUDIT_DATA_IO_H_
#define LDP_AUDIT_DATA_IO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "ldp_audit/nn.h"

namespace ldp_audit {

struct Dataset {
  std::vector<Example> examples;
  int num_classes = 0;
  int input_dim = 0;

  void Validate() const;
};

struct SyntheticSpec {
  int num_classes = 10;
  int input_dim = 20;
  int examples_per_class = 100;
  double class_separation = 3.0;
  double noise_sigma = 0.5;
  uint64_t seed = 0;
};

// Gaussian blobs: class c is centered at class_separation * u_c where the
// u_c are random unit directions (orthonormalized when num_classes <=
// input_dim). Examples are emitted class by class.
Dataset GenerateBlobs(const SyntheticSpec& spec);

// Class centers used by GenerateBlobs for the same spec.
std::vector<std::vector<double>> BlobCenters(const SyntheticSpec& spec);

inline constexpr uint32_t kIdxImageMagic = 0x00000803;
inline constexpr uint32_t kIdxLabelMagic = 0x00000801;

struct IdxImages {
  uint32_t count = 0;
  uint32_t rows = 0;
  uint32_t cols = 0;
  // count vectors of rows * cols pixels scaled to [0, 1].
  std::vector<std::vector<double>> pixels;
};

// Parsers throw std::runtime_error on bad magic or truncated data.
IdxImages ParseIdxImages(std::span<const uint8_t> bytes);
std::vector<int> ParseIdxLabels(std::span<const uint8_t> bytes);
IdxImages LoadIdxImages(const std::filesystem::path& path);
std::vector<int> LoadIdxLabels(const std::filesystem::path& path);

// Encoders producing the same layout; used to build fixtures.
std::vector<uint8_t> EncodeIdxImages(uint32_t rows, uint32_t cols,
                                     std::span<const uint8_t> raw_pixels);
std::vector<uint8_t> EncodeIdxLabels(std::span<const uint8_t> labels);

// Pairs images with labels; throws if the counts differ.
Dataset MakeImageDataset(const IdxImages& images, std::span<const int> labels,
                         int num_classes = 10);

// Throws std::invalid_argument if no example carries `label`.
Dataset FilterByLabel(const Dataset& ds, int label);

}  // namespace ldp_audit

#endif  // LDP_AUDIT_DATA_IO_H_
