// Copyright 2026 The Keyprompt Authors.
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

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace keyprompt::keyterms {

// Text -> fixed-dimension vector. Implementations must return the same
// vector for the same text and must be safe to call concurrently.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::size_t dimension() const = 0;
  virtual std::vector<float> Embed(std::string_view text) const = 0;
};

// Sum of seeded pseudo-random token vectors (components uniform in
// [-1, 1)), one per token occurrence. Offline stand-in for a sentence
// encoder: texts sharing tokens point in similar directions.
class HashedBagOfWordsProvider final : public EmbeddingProvider {
 public:
  explicit HashedBagOfWordsProvider(std::size_t dimension = 256, std::uint64_t seed = 0);

  std::size_t dimension() const override { return dimension_; }
  std::vector<float> Embed(std::string_view text) const override;

  // The vector contributed by one token.
  std::vector<float> TokenVector(std::string_view token) const;

 private:
  std::size_t dimension_;
  std::uint64_t seed_;
};

// Exact-text lookup into precomputed embeddings, one JSON object per line:
// {"text": "...", "vector": [...]}. Texts without an entry raise
// Error(kProviderFailure).
class FileEmbeddingProvider final : public EmbeddingProvider {
 public:
  static FileEmbeddingProvider Parse(std::istream& in);
  static FileEmbeddingProvider Load(const std::string& path);

  std::size_t dimension() const override { return dimension_; }
  std::vector<float> Embed(std::string_view text) const override;
  std::size_t size() const { return table_.size(); }

 private:
  std::size_t dimension_ = 0;
  std::map<std::string, std::vector<float>, std::less<>> table_;
};

// "hash", "hash:<dim>", "hash:<dim>:<seed>" or "file:<path>".
std::unique_ptr<EmbeddingProvider> MakeEmbeddingProvider(std::string_view spec);

}  // namespace keyprompt::keyterms
