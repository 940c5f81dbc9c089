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


// Embedding provider speaking the exchange protocol on stdin/stdout, backed
// by the deterministic provider. Misbehaviours for tests:
//
//   --drop-row           reply with one row fewer than requested tokens
//   --error-on TOKEN     error reply when TOKEN is requested
//   --crash-after N      exit(1) on request N+1
//   --hang               never answer
//   --count FILE         append one line per request to FILE
//   --seed N, --dim D    deterministic provider parameters

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include "asreval/embedding_provider.hpp"
#include "asreval/exchange_format.hpp"

int main(int argc, char** argv) {
  bool drop_row = false;
  bool hang = false;
  long crash_after = -1;
  std::string error_on;
  std::string count_file;
  std::uint64_t seed = 0;
  int dim = 32;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    auto value = [&]() -> std::string { return i + 1 < argc ? argv[++i] : ""; };
    if (a == "--drop-row") drop_row = true;
    else if (a == "--hang") hang = true;
    else if (a == "--crash-after") crash_after = std::stol(value());
    else if (a == "--error-on") error_on = value();
    else if (a == "--count") count_file = value();
    else if (a == "--seed") seed = std::stoull(value());
    else if (a == "--dim") dim = std::stoi(value());
  }

  asreval::DeterministicProvider provider(seed, dim);
  long served = 0;
  for (;;) {
    char len_bytes[4];
    if (!std::cin.read(len_bytes, 4)) return 0;
    const std::uint32_t len = asreval::get_u32_le(std::string_view(len_bytes, 4));
    std::string body(len, '\0');
    if (!std::cin.read(body.data(), len)) return 1;
    const asreval::EmbeddingRequest req = asreval::decode_request(body);

    if (!count_file.empty()) std::ofstream(count_file, std::ios::app) << req.id << '\n';
    if (crash_after >= 0 && served >= crash_after) std::_Exit(1);
    if (hang) std::this_thread::sleep_for(std::chrono::hours(1));
    ++served;

    std::string reply;
    bool wants_error = false;
    for (const auto& t : req.tokens) wants_error = wants_error || (!error_on.empty() && t == error_on);
    if (wants_error) {
      reply = asreval::encode_error_payload(req.id, "refusing token " + error_on);
    } else {
      auto m = provider.embed(req);
      if (drop_row && m.vectors.rows() > 0) {
        m.vectors.conservativeResize(m.vectors.rows() - 1, Eigen::NoChange);
        m.tokens.pop_back();
      }
      reply = asreval::encode_payload(m);
    }
    std::cout.write(reply.data(), static_cast<std::streamsize>(reply.size()));
    std::cout.flush();
  }
}
