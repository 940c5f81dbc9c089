// Copyright 2026 The asreval Authors
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

// Embedding exchange format, shared by cache files and the provider
// subprocess protocol.
//
// Payload:
//   header   one line of UTF-8 JSON terminated by '\n':
//            {"utterance_id":"u1","tokens":["a","b"],"dim":32,
//             "dtype":"f32","byte_order":"little"}
//   body     T x D IEEE-754 binary32 values, little-endian, row-major
//   trailer  uint64 little-endian: byte length of header line + body
//
// An error reply is a header {"utterance_id":..., "error":"message"}
// with no body, followed by the trailer.
//
// Request (provider stdin):
//   uint32 little-endian byte length N, then N bytes of UTF-8 JSON
//   {"id":"u1","tokens":["a","b"]}

#ifndef ASREVAL_EXCHANGE_FORMAT_HPP_
#define ASREVAL_EXCHANGE_FORMAT_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "asreval/semantic_score.hpp"

namespace asreval {

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kMaxHeaderBytes = 64u << 20;
inline constexpr std::uint64_t kMaxDim = 65536;

struct EmbeddingRequest {
  std::string id;
  std::vector<std::string> tokens;
};

std::string encode_payload(const EmbeddingMatrix<float>& m);
std::string encode_error_payload(std::string_view utterance_id, std::string_view message);

// Byte source: returns exactly n bytes or throws. Lets the same decoder read
// from files, strings and child process pipes.
using ReadExact = std::function<std::string(std::size_t)>;
using ReadLine = std::function<std::string(std::size_t max_bytes)>;

// Throws ProtocolError on malformed payloads and on error replies.
EmbeddingMatrix<float> decode_payload(const ReadLine& read_line, const ReadExact& read_exact);
EmbeddingMatrix<float> decode_payload(std::istream& in);
EmbeddingMatrix<float> decode_payload(std::string_view bytes);

std::string encode_request(const EmbeddingRequest& request);
EmbeddingRequest decode_request(std::string_view json_body);

void put_u32_le(std::string& out, std::uint32_t v);
void put_u64_le(std::string& out, std::uint64_t v);
std::uint32_t get_u32_le(std::string_view bytes);
std::uint64_t get_u64_le(std::string_view bytes);

}  // namespace asreval

#endif  // ASREVAL_EXCHANGE_FORMAT_HPP_
