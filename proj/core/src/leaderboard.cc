// Copyright 2026 The ngramclf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ngramclf/leaderboard.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "ngramclf/error.h"

namespace ngramclf::leaderboard {
namespace {

std::vector<std::string> split_csv(std::string_view line, std::string_view where) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw DataError(std::string(where) + ": unterminated quote");
  fields.push_back(std::move(cur));
  return fields;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::vector<std::string> ScoreTable::problems() const {
  std::vector<std::string> out;
  for (const ScoreRow& r : rows) {
    if (std::find(out.begin(), out.end(), r.problem) == out.end()) {
      out.push_back(r.problem);
    }
  }
  return out;
}

void validate(const ScoreTable& table) {
  std::set<std::pair<std::string, std::string>> seen;
  for (const ScoreRow& r : table.rows) {
    if (r.team.empty() || r.problem.empty()) {
      throw DataError("score table: empty team or problem name");
    }
    if (!seen.emplace(r.team, r.problem).second) {
      throw DataError("score table: duplicate entry for team '" + r.team +
                      "' on problem '" + r.problem + "'");
    }
    if (!(r.macro_f1 >= 0.0 && r.macro_f1 <= 1.0)) {
      throw DataError("score table: score of '" + r.team + "' on '" + r.problem +
                      "' is outside [0, 1]");
    }
  }
}

ScoreTable read_csv(std::istream& in, std::string_view source) {
  std::string line;
  std::size_t line_no = 0;
  auto where = [&] { return std::string(source) + ":" + std::to_string(line_no); };
  if (!std::getline(in, line)) throw DataError(std::string(source) + ": empty file");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  std::vector<std::string> header = split_csv(line, where());
  for (auto& h : header) h = trim(h);
  if (header != std::vector<std::string>{"team", "problem", "macro_f1"}) {
    throw DataError(where() + ": header must be team,problem,macro_f1");
  }
  ScoreTable table;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::vector<std::string> f = split_csv(line, where());
    if (f.size() != 3) {
      throw DataError(where() + ": expected 3 fields, found " +
                      std::to_string(f.size()));
    }
    const std::string score_text = trim(f[2]);
    double score = 0.0;
    const auto [end, ec] = std::from_chars(
        score_text.data(), score_text.data() + score_text.size(), score);
    if (ec != std::errc() || end != score_text.data() + score_text.size()) {
      throw DataError(where() + ": cannot parse score '" + score_text + "'");
    }
    table.rows.push_back({trim(f[0]), trim(f[1]), score});
  }
  try {
    validate(table);
  } catch (const DataError& e) {
    throw DataError(std::string(source) + ": " + e.what());
  }
  return table;
}

ScoreTable load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return read_csv(in, path.string());
}

void write_csv(std::ostream& out, const ScoreTable& table) {
  out << "team,problem,macro_f1\n";
  for (const ScoreRow& r : table.rows) {
    out << csv_field(r.team) << ',' << csv_field(r.problem) << ','
        << std::setprecision(17) << r.macro_f1 << '\n';
  }
}

ScoreTable transform(const ScoreTable& table) {
  validate(table);
  std::map<std::string, double> best;
  for (const ScoreRow& r : table.rows) {
    double& m = best[r.problem];
    m = std::max(m, r.macro_f1);
  }
  for (const auto& [problem, m] : best) {
    if (!(m > 0.0)) {
      throw DataError("problem '" + problem + "' has no positive score");
    }
  }
  ScoreTable out = table;
  for (ScoreRow& r : out.rows) r.macro_f1 /= best[r.problem];
  return out;
}

std::vector<RankingRow> aggregate(const ScoreTable& transformed,
                                  std::span<const std::string> problems) {
  if (problems.empty()) throw DataError("problem subset is empty");
  const std::vector<std::string> known = transformed.problems();
  for (const std::string& p : problems) {
    if (std::find(known.begin(), known.end(), p) == known.end()) {
      throw DataError("unknown problem '" + p + "'");
    }
  }
  const std::set<std::string> subset(problems.begin(), problems.end());

  struct Acc {
    double sum = 0.0;
    std::size_t n = 0;
  };
  std::map<std::string, Acc> per_team;
  for (const ScoreRow& r : transformed.rows) {
    if (!subset.contains(r.problem)) continue;
    Acc& a = per_team[r.team];
    a.sum += r.macro_f1;
    ++a.n;
  }
  std::vector<RankingRow> out;
  for (const auto& [team, a] : per_team) {
    out.push_back({0, team, a.sum / static_cast<double>(a.n), a.n});
  }
  // per_team iterates by name, so stable_sort leaves ties in name order.
  std::stable_sort(out.begin(), out.end(),
                   [](const RankingRow& a, const RankingRow& b) {
                     return a.mean > b.mean;
                   });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = i + 1;
  return out;
}

std::string format_ranking(const std::vector<RankingRow>& ranking) {
  std::set<std::size_t, std::greater<>> counts;
  std::size_t team_width = 4;
  for (const RankingRow& r : ranking) {
    counts.insert(r.problems_entered);
    team_width = std::max(team_width, r.team.size());
  }
  std::map<std::size_t, std::size_t> teams_per_count;
  for (const RankingRow& r : ranking) ++teams_per_count[r.problems_entered];

  const int tw = static_cast<int>(team_width) + 2;
  std::ostringstream os;
  os << std::left << std::setw(6) << "Rank" << std::setw(tw) << "Team";
  for (std::size_t c : counts) os << std::right << std::setw(8) << c;
  os << "   (score column = number of problems entered)\n";
  os << std::fixed << std::setprecision(4);
  for (const RankingRow& r : ranking) {
    os << std::left << std::setw(6) << r.rank << std::setw(tw) << r.team;
    for (std::size_t c : counts) {
      os << std::right << std::setw(8);
      if (c == r.problems_entered) {
        os << r.mean;
      } else {
        os << "";
      }
    }
    os << '\n';
  }
  os << std::left << std::setw(6) << "" << std::setw(tw) << "Number of teams";
  for (std::size_t c : counts) os << std::right << std::setw(8) << teams_per_count[c];
  os << '\n';
  return os.str();
}

void write_ranking_csv(std::ostream& out, const std::vector<RankingRow>& ranking) {
  out << "rank,team,problems_entered,transformed_macro_f1\n";
  for (const RankingRow& r : ranking) {
    out << r.rank << ',' << csv_field(r.team) << ',' << r.problems_entered << ','
        << std::fixed << std::setprecision(4) << r.mean << '\n';
  }
}

}  // namespace ngramclf::leaderboard
