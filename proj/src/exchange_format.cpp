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

#include "asreval/exchange_format.hpp"

#include <bit>
#include <cstring>
#include <istream>

#include "json.hpp"

namespace asreval {

namespace {

using json = nlohmann::ordered_json;

void put_f32_le(std::string& out, float f) { put_u32_le(out, std::bit_cast<std::uint32_t>(f)); }

}  // namespace

void put_u32_le(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64_le(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32_le(std::string_view b) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<std::uint8_t>(b[static_cast<std::size_t>(i)]);
  return v;
}

std::uint64_t get_u64_le(std::string_view b) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<std::uint8_t>(b[static_cast<std::size_t>(i)]);
  return v;
}

std::string encode_payload(const EmbeddingMatrix<float>& m) {
  json header;
  header["utterance_id"] = m.utterance_id;
  header["tokens"] = m.tokens;
  header["dim"] = m.dim();
  header["dtype"] = "f32";
  header["byte_order"] = "little";
  std::string out = header.dump();
  out.push_back('\n');
  out.reserve(out.size() + static_cast<std::size_t>(m.vectors.size()) * 4 + 8);
  for (Eigen::Index i = 0; i < m.vectors.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.vectors.cols(); ++j) put_f32_le(out, m.vectors(i, j));
  }
  put_u64_le(out, out.size());
  return out;
}

std::string encode_error_payload(std::string_view utterance_id, std::string_view message) {
  json header;
  header["utterance_id"] = utterance_id;
  header["error"] = message;
  std::string out = header.dump();
  out.push_back('\n');
  put_u64_le(out, out.size());
  return out;
}

EmbeddingMatrix<float> decode_payload(const ReadLine& read_line, const ReadExact& read_exact) {
  const std::string line = read_line(kMaxHeaderBytes);
  json header;
  try {
    header = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ProtocolError(std::string("malformed exchange header: ") + e.what());
  }
  if (!header.is_object()) throw ProtocolError("exchange header is not a JSON object");

  EmbeddingMatrix<float> m;
  if (auto it = header.find("utterance_id"); it != header.end() && it->is_string()) {
    m.utterance_id = it->get<std::string>();
  } else {
    throw ProtocolError("exchange header lacks utterance_id");
  }

  const std::uint64_t header_bytes = line.size() + 1;
  if (auto it = header.find("error"); it != header.end()) {
    const std::uint64_t trailer = get_u64_le(read_exact(8));
    if (trailer != header_bytes) throw ProtocolError("exchange trailer length mismatch");
    throw ProtocolError("provider error for '" + m.utterance_id + "': " + it->dump());
  }

  auto tokens = header.find("tokens");
  auto dim = header.find("dim");
  if (tokens == header.end() || !tokens->is_array()) throw ProtocolError("exchange header lacks tokens");
  if (dim == header.end() || !dim->is_number_unsigned()) throw ProtocolError("exchange header lacks dim");
  if (dim->get<std::uint64_t>() > kMaxDim) throw ProtocolError("exchange dim exceeds limit");
  if (header.value("dtype", "") != "f32") throw ProtocolError("unsupported dtype (expected f32)");
  if (header.value("byte_order", "") != "little") throw ProtocolError("unsupported byte_order (expected little)");
  for (const auto& t : *tokens) {
    if (!t.is_string()) throw ProtocolError("exchange tokens must be strings");
    m.tokens.push_back(t.get<std::string>());
  }

  const auto rows = static_cast<Eigen::Index>(m.tokens.size());
  const auto cols = static_cast<Eigen::Index>(dim->get<std::uint64_t>());
  const std::size_t body_bytes = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) * 4;
  const std::string body = read_exact(body_bytes);
  const std::uint64_t trailer = get_u64_le(read_exact(8));
  if (trailer != header_bytes + body_bytes) {
    throw ProtocolError("exchange trailer length mismatch for '" + m.utterance_id + "': expected " +
                        std::to_string(header_bytes + body_bytes) + ", got " + std::to_string(trailer));
  }

  m.vectors.resize(rows, cols);
  std::size_t off = 0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j, off += 4) {
      m.vectors(i, j) = std::bit_cast<float>(get_u32_le(std::string_view(body).substr(off, 4)));
    }
  }
  return m;
}

EmbeddingMatrix<float> decode_payload(std::istream& in) {
  auto read_line = [&in](std::size_t max_bytes) {
    std::string line;
    char c;
    while (in.get(c)) {
      if (c == '\n') return line;
      line.push_back(c);
      if (line.size() > max_bytes) throw ProtocolError("exchange header exceeds limit");
    }
    throw ProtocolError("truncated exchange header");
  };
  auto read_exact = [&in](std::size_t n) {
    std::string buf(n, '\0');
    if (n > 0 && !in.read(buf.data(), static_cast<std::streamsize>(n))) {
      throw ProtocolError("truncated exchange payload");
    }
    return buf;
  };
  return decode_payload(read_line, read_exact);
}

EmbeddingMatrix<float> decode_payload(std::string_view bytes) {
  std::size_t pos = 0;
  auto read_line = [&](std::size_t max_bytes) {
    auto nl = bytes.find('\n', pos);
    if (nl == std::string_view::npos || nl - pos > max_bytes) throw ProtocolError("truncated exchange header");
    std::string line(bytes.substr(pos, nl - pos));
    pos = nl + 1;
    return line;
  };
  auto read_exact = [&](std::size_t n) {
    if (bytes.size() - pos < n) throw ProtocolError("truncated exchange payload");
    std::string out(bytes.substr(pos, n));
    pos += n;
    return out;
  };
  auto m = decode_payload(read_line, read_exact);
  if (pos != bytes.size()) throw ProtocolError("trailing bytes after exchange payload");
  return m;
}

std::string encode_request(const EmbeddingRequest& request) {
  json body;
  body["id"] = request.id;
  body["tokens"] = request.tokens;
  const std::string text = body.dump();
  std::string out;
  put_u32_le(out, static_cast<std::uint32_t>(text.size()));
  out += text;
  return out;
}

EmbeddingRequest decode_request(std::string_view json_body) {
  json body;
  try {
    body = json::parse(json_body);
  } catch (const json::parse_error& e) {
    throw ProtocolError(std::string("malformed request: ") + e.what());
  }
  EmbeddingRequest r;
  if (!body.is_object() || !body.contains("id") || !body["id"].is_string() || !body.contains("tokens") ||
      !body["tokens"].is_array()) {
    throw ProtocolError("request must be {id, tokens}");
  }
  r.id = body["id"].get<std::string>();
  for (const auto& t : body["tokens"]) {
    if (!t.is_string()) throw ProtocolError("request tokens must be strings");
    r.tokens.push_back(t.get<std::string>());
  }
  return r;
}

}  // namespace asreval
