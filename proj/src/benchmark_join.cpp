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

#include "asreval/benchmark_join.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace asreval {

using json = nlohmann::ordered_json;

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else if (c != '\r') {
      out.back() += c;
    }
  }
  return out;
}

// Ranks of `values` (ascending), keyed like the input.
std::map<std::string, double> rank_map(const std::map<std::string, double>& values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (const auto& [_, x] : values) v(i++) = x;
  const Eigen::VectorXd r = average_ranks(v);
  std::map<std::string, double> out;
  i = 0;
  for (const auto& [k, _] : values) out[k] = r(i++);
  return out;
}

}  // namespace

std::vector<ExternalResult> load_external_results(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path.string());
  std::string line;
  std::size_t lineno = 0;
  std::vector<ExternalResult> out;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto f = split_csv_line(line);
    if (lineno == 1 && !f.empty() && f[0] == "model") continue;
    if (f.size() != 3) throw LoadError(path.string(), lineno, "expected model,benchmark,wer_pct");
    try {
      out.push_back({f[0], f[1], std::stod(f[2])});
    } catch (const std::exception&) {
      throw LoadError(path.string(), lineno, "wer_pct is not a number");
    }
  }
  return out;
}

BenchmarkJoin external_benchmark_join(const std::vector<MetricReport>& reports,
                                      const std::vector<ExternalResult>& external) {
  std::map<std::string, double> local;
  for (const auto& r : reports) {
    if (!r.rows.empty() && r.overall().metrics.wer_pct) local[r.model_id] = *r.overall().metrics.wer_pct;
  }
  std::map<std::string, std::map<std::string, double>> by_benchmark;
  for (const auto& e : external) {
    if (!by_benchmark[e.benchmark].emplace(e.model_id, e.wer_pct).second) {
      throw std::invalid_argument("duplicate external result for " + e.model_id + " on " + e.benchmark);
    }
  }

  BenchmarkJoin join;
  const auto local_rank = rank_map(local);
  std::map<std::string, std::map<std::string, double>> external_rank;
  for (const auto& [bench, values] : by_benchmark) {
    join.benchmarks.push_back(bench);
    external_rank[bench] = rank_map(values);
  }

  for (const auto& [model, wer] : local) {
    JoinRow row{model, wer, local_rank.at(model), local.size(), {}};
    for (const auto& [bench, values] : by_benchmark) {
      if (auto it = values.find(model); it != values.end()) {
        row.external[bench] = {it->second, external_rank[bench].at(model), values.size()};
      }
    }
    if (!row.external.empty()) join.rows.push_back(std::move(row));
  }
  if (join.rows.empty()) throw std::invalid_argument("no model appears in both the local reports and the external table");
  std::stable_sort(join.rows.begin(), join.rows.end(),
                   [](const JoinRow& a, const JoinRow& b) { return a.local_wer_pct < b.local_wer_pct; });

  for (const auto& bench : join.benchmarks) {
    std::vector<double> xs, ys;
    for (const auto& row : join.rows) {
      if (auto it = row.external.find(bench); it != row.external.end()) {
        xs.push_back(row.local_wer_pct);
        ys.push_back(it->second.wer_pct);
      }
    }
    const Eigen::Map<const Eigen::VectorXd> x(xs.data(), static_cast<Eigen::Index>(xs.size()));
    const Eigen::Map<const Eigen::VectorXd> y(ys.data(), static_cast<Eigen::Index>(ys.size()));
    join.agreement.push_back({bench, xs.size(), spearman_rho(x, y)});
  }
  return join;
}

std::string render_join(const BenchmarkJoin& join, ReportFormat format) {
  std::ostringstream out;
  auto rank_text = [](double rank, std::size_t of) { return format_number(rank) + "/" + std::to_string(of); };
  switch (format) {
    case ReportFormat::markdown: {
      out << "| model | local %WER | local rank |";
      for (const auto& b : join.benchmarks) out << ' ' << b << " %WER | " << b << " rank |";
      out << "\n| --- | ---: | ---: |";
      for (std::size_t i = 0; i < join.benchmarks.size(); ++i) out << " ---: | ---: |";
      out << '\n';
      for (const auto& row : join.rows) {
        out << "| " << row.model_id << " | " << format_number(row.local_wer_pct) << " | "
            << rank_text(row.local_rank, row.local_of) << " |";
        for (const auto& b : join.benchmarks) {
          auto it = row.external.find(b);
          if (it == row.external.end()) {
            out << " | |";
          } else {
            out << ' ' << format_number(it->second.wer_pct) << " | " << rank_text(it->second.rank, it->second.of) << " |";
          }
        }
        out << '\n';
      }
      out << "\n| benchmark | joined models | Spearman rho |\n| --- | ---: | ---: |\n";
      for (const auto& a : join.agreement) out << "| " << a.benchmark << " | " << a.joined << " | " << format_number(a.spearman) << " |\n";
      break;
    }
    case ReportFormat::csv:
      out << "model,local_wer_pct,local_rank,benchmark,external_wer_pct,external_rank,external_of\n";
      for (const auto& row : join.rows) {
        for (const auto& [b, e] : row.external) {
          out << row.model_id << ',' << format_number(row.local_wer_pct) << ',' << format_number(row.local_rank) << ','
              << b << ',' << format_number(e.wer_pct) << ',' << format_number(e.rank) << ',' << e.of << '\n';
        }
      }
      break;
    case ReportFormat::json: {
      json j;
      json rows = json::array();
      for (const auto& row : join.rows) {
        json r;
        r["model"] = row.model_id;
        r["local_wer_pct"] = row.local_wer_pct;
        r["local_rank"] = row.local_rank;
        r["local_of"] = row.local_of;
        for (const auto& [b, e] : row.external) {
          r["external"][b] = {{"wer_pct", e.wer_pct}, {"rank", e.rank}, {"of", e.of}};
        }
        rows.push_back(std::move(r));
      }
      j["rows"] = std::move(rows);
      json agreement = json::array();
      for (const auto& a : join.agreement) {
        agreement.push_back({{"benchmark", a.benchmark},
                             {"joined", a.joined},
                             {"spearman_rho", a.spearman ? json(*a.spearman) : json(nullptr)}});
      }
      j["agreement"] = std::move(agreement);
      out << j.dump(2) << '\n';
      break;
    }
  }
  return out.str();
}

}  // namespace asreval
