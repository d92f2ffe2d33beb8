// Copyright 2026 The vq360 Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vq360/subjective.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "vq360/errors.hpp"

namespace vq360 {

namespace {

constexpr char kVotesHeader[] =
    "session_id,subject_id,content_id,quality_label,rating,position";

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  fields.push_back(current);
  return fields;
}

int parse_int_field(const std::string& value, int line_no, const char* what) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(value, &pos);
    if (pos != value.size()) {
      throw std::invalid_argument("");
    }
    return v;
  } catch (const std::logic_error&) {
    throw ParseError("line " + std::to_string(line_no) + ": " + what + " '" +
                     value + "' is not an integer");
  }
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  return line;
}

double mean_of(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) {
    sum += v;
  }
  return sum / static_cast<double>(values.size());
}

/// Pearson r, or NaN when either input has zero variance. The identity
/// case r(x, x) evaluates to exactly 1: the numerator equals sum(dx^2)
/// and sqrt(fl(a*a)) == a in round-to-nearest.
double pearson_or_nan(std::span<const double> x, std::span<const double> y) {
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return sxy / std::sqrt(sxx * syy);
}

void require_rating(int rating, const std::string& where) {
  if (rating < 1 || rating > 5) {
    throw InvalidRating(where + ": rating " + std::to_string(rating) +
                        " outside 1..5");
  }
}

}  // namespace

std::vector<Vote> parse_votes_csv(std::istream& stream) {
  std::string line;
  if (!std::getline(stream, line)) {
    throw ParseError("line 1: empty vote file, expected header");
  }
  if (strip_cr(line) != kVotesHeader) {
    throw ParseError(std::string("line 1: expected header '") + kVotesHeader +
                     "'");
  }
  std::vector<Vote> votes;
  int line_no = 1;
  while (std::getline(stream, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) {
      continue;
    }
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 6) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 6 fields, got " +
                       std::to_string(f.size()));
    }
    Vote v;
    v.session_id = f[0];
    v.subject_id = f[1];
    v.content_id = f[2];
    v.quality_label = f[3];
    if (v.quality_label.size() != 1 || v.quality_label[0] < 'A' ||
        v.quality_label[0] > 'F') {
      throw ParseError("line " + std::to_string(line_no) + ": quality label '" +
                       v.quality_label + "' is not A..F");
    }
    v.rating = parse_int_field(f[4], line_no, "rating");
    require_rating(v.rating, "line " + std::to_string(line_no));
    v.position = parse_int_field(f[5], line_no, "position");
    votes.push_back(std::move(v));
  }
  return votes;
}

std::vector<Vote> parse_votes_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open " + path);
  }
  return parse_votes_csv(in);
}

void write_votes_csv(std::span<const Vote> votes, std::ostream& stream) {
  stream << kVotesHeader << "\n";
  for (const Vote& v : votes) {
    stream << v.session_id << "," << v.subject_id << "," << v.content_id << ","
           << v.quality_label << "," << v.rating << "," << v.position << "\n";
  }
}

double sample_stddev(std::span<const double> values) {
  if (values.size() < 2) {
    throw InvalidArgument("sample standard deviation needs n >= 2");
  }
  const double mean = mean_of(values);
  double acc = 0.0;
  for (double v : values) {
    const double d = v - mean;
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(values.size() - 1));
}

double ci95_halfwidth(std::span<const double> values) {
  return 1.96 * sample_stddev(values) /
         std::sqrt(static_cast<double>(values.size()));
}

MosResult mos(std::span<const Vote> votes, const std::string& content,
              const std::string& quality) {
  std::vector<double> ratings;
  for (const Vote& v : votes) {
    if (v.content_id == content && v.quality_label == quality) {
      require_rating(v.rating, "vote by subject " + v.subject_id);
      ratings.push_back(static_cast<double>(v.rating));
    }
  }
  if (ratings.size() < 2) {
    throw InsufficientVotes("cell (" + content + ", " + quality + ") has " +
                            std::to_string(ratings.size()) +
                            " votes; the CI needs at least 2");
  }
  return MosResult{content, quality, mean_of(ratings), ci95_halfwidth(ratings),
                   static_cast<int>(ratings.size())};
}

int dv(int rating, int reference_rating) {
  require_rating(rating, "differential score");
  require_rating(reference_rating, "differential score reference");
  return rating - reference_rating + 5;
}

DmosResult dmos(std::span<const Vote> votes, const std::string& content,
                const std::string& quality) {
  // Per subject: mean PVS rating and mean hidden-reference rating for
  // the content. For the reference cell itself both means are the same
  // value, so its DV is exactly 5.
  std::map<std::string, std::vector<double>> pvs_ratings;
  std::map<std::string, std::vector<double>> ref_ratings;
  for (const Vote& v : votes) {
    if (v.content_id != content) {
      continue;
    }
    require_rating(v.rating, "vote by subject " + v.subject_id);
    if (v.quality_label == quality) {
      pvs_ratings[v.subject_id].push_back(static_cast<double>(v.rating));
    }
    if (v.quality_label == "A") {
      ref_ratings[v.subject_id].push_back(static_cast<double>(v.rating));
    }
  }
  std::vector<double> dvs;
  dvs.reserve(pvs_ratings.size());
  for (const auto& [subject, ratings] : pvs_ratings) {
    const auto ref = ref_ratings.find(subject);
    if (ref == ref_ratings.end()) {
      throw MissingReference("subject " + subject +
                                 " rated (" + content + ", " + quality +
                                 ") but never the hidden reference",
                             subject);
    }
    dvs.push_back(mean_of(ratings) - mean_of(ref->second) + 5.0);
  }
  if (dvs.size() < 2) {
    throw InsufficientVotes("cell (" + content + ", " + quality + ") has " +
                            std::to_string(dvs.size()) +
                            " contributing subjects; the CI needs at least 2");
  }
  return DmosResult{content, quality, mean_of(dvs), ci95_halfwidth(dvs),
                    static_cast<int>(dvs.size())};
}

ScreeningReport screen_subjects(std::span<const Vote> votes, double threshold) {
  std::set<std::string> subject_set;
  std::set<std::pair<std::string, std::string>> cell_set;
  for (const Vote& v : votes) {
    subject_set.insert(v.subject_id);
    cell_set.insert({v.content_id, v.quality_label});
  }
  if (subject_set.size() < 3) {
    throw InvalidArgument("screening needs at least 3 subjects, got " +
                          std::to_string(subject_set.size()));
  }
  const std::vector<std::string> subjects(subject_set.begin(), subject_set.end());
  const std::vector<std::pair<std::string, std::string>> cells(cell_set.begin(),
                                                               cell_set.end());

  // ratings[s][c]: the subject's mean rating of that cell.
  std::map<std::string, std::map<std::pair<std::string, std::string>,
                                 std::pair<std::int64_t, int>>>
      sums;
  for (const Vote& v : votes) {
    require_rating(v.rating, "vote by subject " + v.subject_id);
    auto& cell = sums[v.subject_id][{v.content_id, v.quality_label}];
    cell.first += v.rating;
    cell.second += 1;
  }
  std::vector<std::vector<double>> ratings(
      subjects.size(), std::vector<double>(cells.size(), 0.0));
  for (std::size_t s = 0; s < subjects.size(); ++s) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto& per_subject = sums[subjects[s]];
      const auto it = per_subject.find(cells[c]);
      if (it == per_subject.end()) {
        throw MissingCell("subject " + subjects[s] + " has no vote for (" +
                          cells[c].first + ", " + cells[c].second + ")");
      }
      ratings[s][c] = static_cast<double>(it->second.first) /
                      static_cast<double>(it->second.second);
    }
  }

  ScreeningReport report;
  report.threshold = threshold;
  for (std::size_t s = 0; s < subjects.size(); ++s) {
    std::vector<double> others(cells.size(), 0.0);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      double sum = 0.0;
      for (std::size_t t = 0; t < subjects.size(); ++t) {
        if (t != s) {
          sum += ratings[t][c];
        }
      }
      others[c] = sum / static_cast<double>(subjects.size() - 1);
    }
    const double r = pearson_or_nan(ratings[s], others);
    const bool flagged = std::isnan(r) || r < threshold;
    report.subjects.push_back(SubjectScreen{subjects[s], r, flagged});
  }
  return report;
}

double normalize_dmos(double dmos_value, double vmaf_ref) {
  if (dmos_value < 0.0) {
    throw InvalidArgument("DMOS must be >= 0, got " + std::to_string(dmos_value));
  }
  if (vmaf_ref <= 0.0 || vmaf_ref > 100.0) {
    throw InvalidArgument("reference score must be in (0, 100], got " +
                          std::to_string(vmaf_ref));
  }
  return dmos_value * vmaf_ref / 5.0;
}

double normalize_dmos_affine(double dmos_value, double vmaf_ref,
                             double dmos_floor_in, double score_floor_out) {
  if (vmaf_ref <= 0.0 || vmaf_ref > 100.0) {
    throw InvalidArgument("reference score must be in (0, 100], got " +
                          std::to_string(vmaf_ref));
  }
  if (dmos_floor_in >= 5.0) {
    throw InvalidArgument("affine floor must sit below the reference DMOS of 5");
  }
  return score_floor_out + (dmos_value - dmos_floor_in) *
                               (vmaf_ref - score_floor_out) /
                               (5.0 - dmos_floor_in);
}

double plcc(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw ShapeError("series length mismatch: " + std::to_string(x.size()) +
                     " vs " + std::to_string(y.size()));
  }
  if (x.size() < 2) {
    throw InvalidArgument("correlation needs at least 2 pairs");
  }
  const double r = pearson_or_nan(x, y);
  if (std::isnan(r)) {
    throw DegenerateInput("correlation is undefined for a constant series");
  }
  return r;
}

double rmse(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw ShapeError("series length mismatch: " + std::to_string(x.size()) +
                     " vs " + std::to_string(y.size()));
  }
  if (x.empty()) {
    throw InvalidArgument("RMSE needs at least 1 pair");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(x.size()));
}

std::vector<AgreementRow> agreement_table(std::span<const AgreementInput> inputs) {
  if (inputs.empty()) {
    throw InvalidArgument("agreement table needs at least one content");
  }
  const std::vector<std::string> labels_bf = {"B", "C", "D", "E", "F"};

  std::vector<AgreementRow> rows;
  rows.reserve(inputs.size() + 1);
  for (const AgreementInput& input : inputs) {
    std::vector<double> obj;
    std::vector<double> sub;
    for (const std::string& label : labels_bf) {
      const auto o = input.objective.find(label);
      if (o == input.objective.end()) {
        throw MissingCell("content " + input.content_id +
                          " has no objective score for quality " + label);
      }
      const auto d = input.normalized_dmos.find(label);
      if (d == input.normalized_dmos.end()) {
        throw MissingCell("content " + input.content_id +
                          " has no normalized DMOS for quality " + label);
      }
      obj.push_back(o->second);
      sub.push_back(d->second);
    }
    const std::span<const double> obj_be(obj.data(), 4);
    const std::span<const double> sub_be(sub.data(), 4);
    rows.push_back(AgreementRow{input.content_id, plcc(obj, sub),
                                plcc(obj_be, sub_be), rmse(obj, sub),
                                rmse(obj_be, sub_be)});
  }

  AgreementRow average{"AVERAGE", 0.0, 0.0, 0.0, 0.0};
  for (const AgreementRow& row : rows) {
    average.plcc_BF += row.plcc_BF;
    average.plcc_BE += row.plcc_BE;
    average.rmse_BF += row.rmse_BF;
    average.rmse_BE += row.rmse_BE;
  }
  const double n = static_cast<double>(rows.size());
  average.plcc_BF /= n;
  average.plcc_BE /= n;
  average.rmse_BF /= n;
  average.rmse_BE /= n;
  rows.push_back(average);
  return rows;
}

}  // namespace vq360
