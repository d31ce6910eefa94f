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

// Cross-problem team rankings: each problem's scores are divided by the
// problem's best score, then averaged over the problems a team entered.

#ifndef NGRAMCLF_LEADERBOARD_H_
#define NGRAMCLF_LEADERBOARD_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ngramclf::leaderboard {

struct ScoreRow {
  std::string team;
  std::string problem;
  double macro_f1 = 0.0;
};

struct ScoreTable {
  std::vector<ScoreRow> rows;

  // Problem names in order of first appearance.
  std::vector<std::string> problems() const;
};

// Checks (team, problem) uniqueness and scores in [0, 1].
void validate(const ScoreTable& table);

// CSV with header `team,problem,macro_f1`. Fields may be double-quoted.
ScoreTable read_csv(std::istream& in, std::string_view source = "<stream>");
ScoreTable load_csv(const std::filesystem::path& path);
void write_csv(std::ostream& out, const ScoreTable& table);

// Divides every score by the maximum of its problem. Throws DataError when a
// problem has no positive score.
ScoreTable transform(const ScoreTable& table);

struct RankingRow {
  std::size_t rank = 0;
  std::string team;
  double mean = 0.0;
  std::size_t problems_entered = 0;
};

// Mean transformed score per team over the problems in `problems` the team
// entered. Descending by mean; ties by team name. Throws DataError on an
// empty subset or a problem absent from the table.
std::vector<RankingRow> aggregate(const ScoreTable& transformed,
                                  std::span<const std::string> problems);

// Aligned table with one score column per "number of problems entered",
// largest first; scores rounded to 4 decimals.
std::string format_ranking(const std::vector<RankingRow>& ranking);
void write_ranking_csv(std::ostream& out, const std::vector<RankingRow>& ranking);

}  // namespace ngramclf::leaderboard

#endif  // NGRAMCLF_LEADERBOARD_H_
