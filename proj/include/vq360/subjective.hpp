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

#ifndef VQ360_SUBJECTIVE_HPP_
#define VQ360_SUBJECTIVE_HPP_

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace vq360 {

/// One ACR rating event. Ratings map the five categories Bad..Excellent
/// to 1..5. The hidden reference carries quality label "A" and is rated
/// like any other clip.
struct Vote {
  std::string session_id;
  std::string subject_id;
  std::string content_id;
  std::string quality_label;  // A..F
  int rating = 0;             // 1..5
  int position = 0;           // index within the session
};

/// Parses the vote CSV (header
/// `session_id,subject_id,content_id,quality_label,rating,position`).
/// Diagnostics name the offending 1-based line.
std::vector<Vote> parse_votes_csv(std::istream& stream);
std::vector<Vote> parse_votes_csv_file(const std::string& path);
void write_votes_csv(std::span<const Vote> votes, std::ostream& stream);

struct MosResult {
  std::string content_id;
  std::string quality_label;
  double mos = 0.0;   // in [1, 5]
  double ci95 = 0.0;  // 1.96 * s / sqrt(n), sample (n-1) stdev
  int n = 0;
};

struct DmosResult {
  std::string content_id;
  std::string quality_label;
  double dmos = 0.0;  // hidden reference against itself is exactly 5
  double ci95 = 0.0;
  int n = 0;
};

struct SubjectScreen {
  std::string subject_id;
  double r = 0.0;  // NaN when the subject's ratings have zero variance
  bool flagged = false;
};

struct ScreeningReport {
  double threshold = 0.75;
  std::vector<SubjectScreen> subjects;  // sorted by subject_id
};

struct AgreementRow {
  std::string content_id;  // "AVERAGE" for the final row
  double plcc_BF = 0.0;
  double plcc_BE = 0.0;
  double rmse_BF = 0.0;
  double rmse_BE = 0.0;
};

/// Per-content series to correlate: objective score and normalized DMOS
/// per quality label B..F.
struct AgreementInput {
  std::string content_id;
  std::map<std::string, double> objective;        // label -> score
  std::map<std::string, double> normalized_dmos;  // label -> score
};

double sample_stddev(std::span<const double> values);
double ci95_halfwidth(std::span<const double> values);

/// Mean rating of one (content, quality) cell across all votes. Fewer
/// than 2 votes cannot carry a CI and raise InsufficientVotes.
MosResult mos(std::span<const Vote> votes, const std::string& content,
              const std::string& quality);

/// Differential viewer score, DV = V - Vref + 5, unclipped in [1, 9].
int dv(int rating, int reference_rating);

/// Per-subject DV against that subject's hidden-reference rating, then
/// mean and CI across subjects. A subject rating the PVS without a
/// reference vote for the content raises MissingReference.
DmosResult dmos(std::span<const Vote> votes, const std::string& content,
                const std::string& quality);

/// Pearson r of each subject's rating vector (over every (content,
/// quality) cell, in sorted cell order) against the leave-one-out mean
/// vector of the other subjects; flags r < threshold. Zero-variance
/// vectors yield r = NaN and are flagged.
ScreeningReport screen_subjects(std::span<const Vote> votes,
                                double threshold = 0.75);

/// Proportional map onto the objective scale: dmos * vmaf_ref / 5, so the
/// reference (dmos 5) lands exactly on its own objective score.
double normalize_dmos(double dmos_value, double vmaf_ref);

/// Affine alternative pinning dmos 5 to vmaf_ref and dmos `dmos_floor_in`
/// to `score_floor_out`.
double normalize_dmos_affine(double dmos_value, double vmaf_ref,
                             double dmos_floor_in = 1.0,
                             double score_floor_out = 0.0);

/// Sample Pearson correlation; constant input raises DegenerateInput.
double plcc(std::span<const double> x, std::span<const double> y);

double rmse(std::span<const double> x, std::span<const double> y);

/// One row per content over labels B..F and B..E, plus a final AVERAGE
/// row. A content missing one of the labels in either series raises
/// MissingCell.
std::vector<AgreementRow> agreement_table(std::span<const AgreementInput> inputs);

}  // namespace vq360

#endif  // VQ360_SUBJECTIVE_HPP_
