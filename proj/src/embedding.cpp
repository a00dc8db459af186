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

#include "keyprompt/embedding.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "json.hpp"
#include "keyprompt/error.hpp"
#include "keyprompt/random.hpp"
#include "keyprompt/simd/kernels.hpp"
#include "keyprompt/textproc.hpp"

namespace keyprompt::keyterms {

HashedBagOfWordsProvider::HashedBagOfWordsProvider(std::size_t dimension, std::uint64_t seed)
    : dimension_(dimension), seed_(seed) {
  if (dimension == 0) throw Error(ErrorCode::kInvalidArgument, "embedding dimension must be > 0");
}

std::vector<float> HashedBagOfWordsProvider::TokenVector(std::string_view token) const {
  std::vector<float> v(dimension_);
  std::uint64_t state = Fnv1a(token) ^ SplitMix64(seed_);
  for (auto& x : v) {
    state = SplitMix64(state);
    // Top 24 bits -> [0, 1) exactly representable in float, then to [-1, 1).
    x = static_cast<float>(state >> 40) * (1.0f / 16777216.0f) * 2.0f - 1.0f;
  }
  return v;
}

std::vector<float> HashedBagOfWordsProvider::Embed(std::string_view text) const {
  std::vector<float> acc(dimension_, 0.0f);
  for (const auto& token : textproc::Tokenize(text)) {
    simd::Axpy(1.0f, TokenVector(token), acc);
  }
  return acc;
}

FileEmbeddingProvider FileEmbeddingProvider::Parse(std::istream& in) {
  FileEmbeddingProvider provider;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::kMalformedRecord,
                "embedding file line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (textproc::TrimWhitespace(line).empty()) continue;
    const auto obj = nlohmann::json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) fail("not a JSON object");
    const auto text = obj.find("text");
    const auto vec = obj.find("vector");
    if (text == obj.end() || !text->is_string()) fail("missing string \"text\"");
    if (vec == obj.end() || !vec->is_array() || vec->empty()) fail("missing non-empty \"vector\"");
    std::vector<float> values;
    values.reserve(vec->size());
    for (const auto& x : *vec) {
      if (!x.is_number()) fail("vector entries must be numbers");
      values.push_back(x.get<float>());
    }
    if (provider.dimension_ == 0) provider.dimension_ = values.size();
    if (values.size() != provider.dimension_) fail("vector dimension differs from earlier lines");
    provider.table_[text->get<std::string>()] = std::move(values);
  }
  if (provider.table_.empty()) {
    throw Error(ErrorCode::kMalformedRecord, "embedding file has no entries");
  }
  return provider;
}

FileEmbeddingProvider FileEmbeddingProvider::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open embedding file " + path);
  return Parse(in);
}

std::vector<float> FileEmbeddingProvider::Embed(std::string_view text) const {
  const auto it = table_.find(text);
  if (it == table_.end()) {
    throw Error(ErrorCode::kProviderFailure, "no precomputed embedding for \"" + std::string(text) + "\"");
  }
  return it->second;
}

std::unique_ptr<EmbeddingProvider> MakeEmbeddingProvider(std::string_view spec) {
  if (spec.rfind("file:", 0) == 0) {
    return std::make_unique<FileEmbeddingProvider>(
        FileEmbeddingProvider::Load(std::string(spec.substr(5))));
  }
  if (spec == "hash" || spec.rfind("hash:", 0) == 0) {
    std::size_t dim = 256;
    std::uint64_t seed = 0;
    if (spec.size() > 4) {
      std::string_view rest = spec.substr(5);
      const auto colon = rest.find(':');
      const std::string_view dim_text = rest.substr(0, colon);
      auto r = std::from_chars(dim_text.data(), dim_text.data() + dim_text.size(), dim);
      if (r.ec != std::errc() || r.ptr != dim_text.data() + dim_text.size() || dim == 0) {
        throw Error(ErrorCode::kInvalidArgument, "bad embedder dimension in \"" + std::string(spec) + "\"");
      }
      if (colon != std::string_view::npos) {
        const std::string_view seed_text = rest.substr(colon + 1);
        r = std::from_chars(seed_text.data(), seed_text.data() + seed_text.size(), seed);
        if (r.ec != std::errc() || r.ptr != seed_text.data() + seed_text.size()) {
          throw Error(ErrorCode::kInvalidArgument, "bad embedder seed in \"" + std::string(spec) + "\"");
        }
      }
    }
    return std::make_unique<HashedBagOfWordsProvider>(dim, seed);
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown embedder \"" + std::string(spec) + "\" (expected hash or file:<path>)");
}

}  // namespace keyprompt::keyterms
