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

// Acceptance gate: one self-contained check per release criterion, each
// printed as a single PASS/FAIL line. Checks 2-7 are hermetic; check 1
// needs a real encoder and scoring tool on PATH and fails honestly when
// they are absent.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "test_util.hpp"
#include "vq360/errors.hpp"
#include "vq360/metrics.hpp"
#include "vq360/playlist.hpp"
#include "vq360/rng.hpp"
#include "vq360/subjective.hpp"
#include "vq360/subprocess.hpp"
#include "vq360/sweep.hpp"
#include "vq360/video_io.hpp"

using namespace vq360;
using testutil::TempDir;

namespace {

struct CheckFailure {
  std::string reason;
};

void expect(bool condition, const std::string& reason) {
  if (!condition) {
    throw CheckFailure{reason};
  }
}

void expect_close(double got, double want, double tolerance,
                  const std::string& what) {
  if (!(std::fabs(got - want) < tolerance)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << what << ": got " << got << ", oracle " << want << ", tolerance "
        << tolerance;
    throw CheckFailure{msg.str()};
  }
}

bool tool_available(const std::string& probe) {
  try {
    return run_command(probe + " >/dev/null 2>&1").exit_code == 0;
  } catch (const Error&) {
    return false;
  }
}

// --- criterion 1: real-tool sweep stays monotone with a wide spread ---

void check_sweep_monotone() {
  expect(tool_available("ffmpeg -version"), "ffmpeg not found on PATH");
  expect(tool_available("vmaf --version"), "vmaf not found on PATH");

  TempDir dir;
  const std::string src = dir.file("source.y4m");
  const CommandResult gen = run_command(
      "ffmpeg -loglevel error -y -f lavfi -i mandelbrot=size=1280x640:rate=25 "
      "-frames:v 50 -pix_fmt yuv420p " +
      shell_quote(src));
  expect(gen.exit_code == 0, "source generation failed: " + gen.output);

  const std::string encoder_template =
      "ffmpeg -loglevel error -y -i {in} -c:v libx265 -preset veryfast "
      "-x265-params qp={qp}:log-level=error -f hevc {out}";
  const std::string score_script = testutil::write_script(
      dir, "score.sh",
      "set -e\n"
      "tmp=\"$3.y4m\"\n"
      "ffmpeg -loglevel error -y -i \"$2\" -pix_fmt yuv420p \"$tmp\"\n"
      "vmaf -r \"$1\" -d \"$tmp\" -m version=vmaf_v0.6.1 --json -o \"$3\" "
      ">/dev/null\n"
      "rm -f \"$tmp\"\n");

  SweepConfig config;
  config.vmaf_template = score_script + " {ref} {dist} {log}";
  config.work_dir = dir.file("work");
  const Scorer scorer = make_scorer(config);
  const double duration = probe_y4m_file(src).duration_seconds();

  QualityCurve curve;
  curve.content_id = "mandelbrot";
  for (const int qp : {17, 22, 27, 32, 37, 42, 47}) {
    const EncodedPvs pvs = encode_pvs(src, qp, encoder_template,
                                      config.work_dir, "mandelbrot", duration);
    const double score = scorer(src, pvs.path);
    curve.points[qp] = CurvePoint{qp, score, pvs.bitrate_bps, pvs.path};
    std::fprintf(stderr, "  qp %d -> %.3f\n", qp, score);
  }

  const std::vector<MonotoneViolation> violations = check_monotone(curve, 0.5);
  expect(violations.empty(),
         std::to_string(violations.size()) + " monotonicity violations");
  const double spread = curve.points.begin()->second.score -
                        curve.points.rbegin()->second.score;
  expect(spread > 30.0,
         "score spread " + std::to_string(spread) + " not above 30");
}

// --- criterion 2: objective metrics match brute-force oracles ---

Plane offset_plane(const Plane& ref, int delta) {
  std::vector<std::uint16_t> samples(ref.samples().begin(), ref.samples().end());
  const int peak = ref.peak();
  for (auto& s : samples) {
    // +delta where it fits, else -delta: squared error is delta^2
    // everywhere, constant across rows.
    const int up = static_cast<int>(s) + delta;
    s = static_cast<std::uint16_t>(up <= peak ? up : s - delta);
  }
  return Plane(ref.width(), ref.height(), ref.bit_depth(), std::move(samples));
}

void check_metric_oracles() {
  Rng rng(20260813);
  const std::vector<SpherePoint> samples = sphere_sample_set(777);
  const int kPow2Deltas[] = {1, 2, 4, 8, 16};

  for (int trial = 0; trial < 250; ++trial) {
    const int width = 4 + 2 * static_cast<int>(rng.next_below(23));
    const int height = 4 + 2 * static_cast<int>(rng.next_below(11));
    const int bit_depth = rng.next_below(2) == 0 ? 8 : 10;
    const Plane ref = testutil::random_plane(rng, width, height, bit_depth);
    const Plane dist = testutil::perturb_plane(rng, ref, 25);
    const std::string tag = " (trial " + std::to_string(trial) + ", " +
                            std::to_string(width) + "x" +
                            std::to_string(height) + "@" +
                            std::to_string(bit_depth) + ")";

    expect_close(psnr(ref, dist), oracle::psnr(ref, dist), 1e-6, "psnr" + tag);
    expect_close(ws_psnr_frame(ref, dist), oracle::ws_psnr(ref, dist), 1e-6,
                 "ws_psnr" + tag);

    const Video ref_video = testutil::video_of({ref});
    const Video dist_video = testutil::video_of({dist});
    expect_close(s_psnr(ref_video, dist_video, samples),
                 oracle::s_psnr(ref, dist, samples), 1e-6, "s_psnr" + tag);

    const Video moving = testutil::video_of(
        {ref, dist, testutil::random_plane(rng, width, height, bit_depth)});
    expect_close(si(moving), oracle::si(moving), 1e-9, "si" + tag);
    expect_close(ti(moving), oracle::ti(moving), 1e-9, "ti" + tag);

    // Exactness under row-constant squared error: power-of-two deltas
    // scale every addend of the weighted sums by the same power of two,
    // so the weighted and unweighted quotients are bitwise equal.
    const int delta = kPow2Deltas[rng.next_below(5)];
    const Plane shifted = offset_plane(ref, delta);
    expect(ws_psnr_frame(ref, shifted) == psnr(ref, shifted),
           "ws_psnr != psnr under row-constant squared error" + tag);

    std::vector<PixelCoord> full;
    full.reserve(static_cast<std::size_t>(width) * height);
    for (int row = 0; row < height; ++row) {
      for (int col = 0; col < width; ++col) {
        full.push_back(PixelCoord{col, row});
      }
    }
    expect(s_psnr_frame(ref, dist, full) == psnr(ref, dist),
           "s_psnr != psnr under full-pixel sampling" + tag);
  }
}

// --- criterion 3: vote statistics match brute-force oracles ---

void check_statistics_oracles() {
  const std::vector<std::string> contents = {"c0", "c1", "c2", "c3", "c4",
                                             "c5", "c6", "c7", "c8"};
  const std::vector<std::string> labels = {"A", "B", "C", "D", "E", "F"};
  Rng rng(360360);

  for (int log = 0; log < 1000; ++log) {
    std::vector<Vote> votes;
    votes.reserve(24 * 54);
    for (int s = 0; s < 24; ++s) {
      const std::string subject = "p" + std::to_string(s);
      int position = 0;
      for (const std::string& content : contents) {
        for (const std::string& label : labels) {
          votes.push_back(Vote{"sess", subject, content, label,
                               1 + static_cast<int>(rng.next_below(5)),
                               position++});
        }
      }
    }
    const std::string tag = " (log " + std::to_string(log) + ")";

    std::vector<double> mos_series;
    std::vector<double> dmos_series;
    for (const std::string& content : contents) {
      const DmosResult ref_row = dmos(votes, content, "A");
      expect(ref_row.dmos == 5.0,
             "hidden-reference DMOS not exactly 5 for " + content + tag);
      for (const std::string& label : labels) {
        const MosResult m = mos(votes, content, label);
        expect_close(m.mos, oracle::mos(votes, content, label), 1e-9,
                     "mos " + content + label + tag);
        const DmosResult d = dmos(votes, content, label);
        expect_close(d.dmos, oracle::dmos(votes, content, label), 1e-9,
                     "dmos " + content + label + tag);
        const std::vector<double> dvs =
            oracle::dv_per_subject(votes, content, label);
        expect_close(d.ci95, oracle::ci95(dvs), 1e-9,
                     "dmos ci95 " + content + label + tag);
        mos_series.push_back(m.mos);
        dmos_series.push_back(d.dmos);
      }
    }

    expect_close(plcc(mos_series, dmos_series),
                 oracle::pearson(mos_series, dmos_series), 1e-9, "plcc" + tag);
    expect_close(rmse(mos_series, dmos_series),
                 oracle::rmse(mos_series, dmos_series), 1e-9, "rmse" + tag);

    const ScreeningReport report = screen_subjects(votes);
    const std::vector<oracle::SubjectR> want = oracle::screen(votes);
    expect(report.subjects.size() == want.size(), "screening size" + tag);
    for (std::size_t i = 0; i < want.size(); ++i) {
      expect(report.subjects[i].subject_id == want[i].subject_id,
             "screening order" + tag);
      if (std::isnan(want[i].r)) {
        expect(std::isnan(report.subjects[i].r), "screening NaN" + tag);
      } else {
        expect_close(report.subjects[i].r, want[i].r, 1e-9,
                     "screening r for " + want[i].subject_id + tag);
      }
    }
  }
}

// --- criterion 4: anchor selection equals the exhaustive rule ---

void check_anchor_selection() {
  Rng rng(4444);
  for (int trial = 0; trial < 1000; ++trial) {
    QualityCurve curve;
    curve.content_id = "r";
    double score = 94.0 + static_cast<double>(rng.next_below(600)) / 100.0;
    int qp = 1;
    while (qp <= 51) {
      curve.points[qp] = CurvePoint{qp, score, 1000.0 * (52 - qp), ""};
      score -= 0.01 + static_cast<double>(rng.next_below(300)) / 100.0;
      qp += 1 + static_cast<int>(rng.next_below(5));
    }
    const double target = static_cast<double>(rng.next_below(101));
    const CurvePoint got = select_anchor(curve, target);
    const CurvePoint want = oracle::select_anchor(curve, target);
    expect(got.qp == want.qp && got.score == want.score,
           "select_anchor mismatch at trial " + std::to_string(trial) +
               ": got qp " + std::to_string(got.qp) + ", oracle qp " +
               std::to_string(want.qp));
  }

  QualityCurve stub;
  stub.content_id = "stub";
  for (int qp = 1; qp <= 100; ++qp) {
    stub.points[qp] = CurvePoint{qp, 100.0 - qp, 1000.0 * (101 - qp), ""};
  }
  const AnchorSet set = select_anchor_set(stub, {90, 80, 70, 50, 30});
  expect(set.reference_qp == 8 && set.reference_score == 92.0,
         "stub reference is qp " + std::to_string(set.reference_qp) +
             ", expected qp 8 at score 92");
  const std::vector<int> expected = {10, 20, 30, 50, 70};
  expect(set.anchors.size() == expected.size(), "stub anchor count");
  for (std::size_t i = 0; i < expected.size(); ++i) {
    expect(set.anchors[i].qp == expected[i],
           "stub anchor " + set.anchors[i].label + " at qp " +
               std::to_string(set.anchors[i].qp) + ", expected " +
               std::to_string(expected[i]));
  }

  QualityCurve low;
  low.content_id = "low";
  for (int qp = 10; qp <= 40; qp += 10) {
    low.points[qp] = CurvePoint{qp, 91.9 - qp, 0.0, ""};
  }
  try {
    select_reference(low, 92.0);
    throw CheckFailure{"curve peaking below 92 was accepted as a reference"};
  } catch (const NoReferenceError&) {
  }
}

// --- criterion 5: playlists stay valid across 10,000 seeds ---

void check_playlists() {
  std::vector<PvsId> pool;
  for (int c = 0; c < 9; ++c) {
    for (const char* label : {"A", "B", "C", "D", "E", "F"}) {
      pool.push_back(PvsId{"content" + std::to_string(c), label});
    }
  }
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const Playlist playlist = generate_playlist(pool, seed);
    expect(playlist.items.size() == 54,
           "seed " + std::to_string(seed) + ": playlist has " +
               std::to_string(playlist.items.size()) + " items, expected 54");
    const std::vector<PlaylistViolation> violations =
        validate_playlist(playlist, pool);
    expect(violations.empty(), "seed " + std::to_string(seed) + ": " +
                                   std::to_string(violations.size()) +
                                   " violations, first: " +
                                   (violations.empty() ? std::string()
                                                       : violations[0].detail));
  }
}

// --- criterion 6: identity data yields perfect agreement ---

void check_identity_agreement() {
  // Two subjects rate each content A:5,5 B:4,4 C:4,3 D:3,3 E:2,2 F:1,1,
  // giving DMOS {B:4, C:3.5, D:3, E:2, F:1}. With a reference score of
  // 100 the proportional map lands on {80, 70, 60, 40, 20}, which the
  // objective side is pinned to, so agreement must be exact.
  const std::vector<std::string> contents = {"c0", "c1", "c2"};
  const std::map<std::string, std::pair<int, int>> ratings = {
      {"A", {5, 5}}, {"B", {4, 4}}, {"C", {4, 3}},
      {"D", {3, 3}}, {"E", {2, 2}}, {"F", {1, 1}},
  };
  const std::map<std::string, double> objective = {
      {"B", 80.0}, {"C", 70.0}, {"D", 60.0}, {"E", 40.0}, {"F", 20.0}};

  std::vector<Vote> votes;
  int position = 0;
  for (const std::string& content : contents) {
    for (const auto& [label, pair] : ratings) {
      votes.push_back(Vote{"sess", "p1", content, label, pair.first, position});
      votes.push_back(Vote{"sess", "p2", content, label, pair.second, position});
      ++position;
    }
  }

  // Round-trip through the CSV layer so the whole ingest path is on the
  // hook, not just the arithmetic.
  std::ostringstream csv;
  write_votes_csv(votes, csv);
  std::istringstream csv_in(csv.str());
  const std::vector<Vote> parsed = parse_votes_csv(csv_in);

  std::vector<AgreementInput> inputs;
  for (const std::string& content : contents) {
    AgreementInput input;
    input.content_id = content;
    input.objective = objective;
    for (const std::string label : {"B", "C", "D", "E", "F"}) {
      const DmosResult d = dmos(parsed, content, label);
      input.normalized_dmos[label] = normalize_dmos(d.dmos, 100.0);
      expect(input.normalized_dmos[label] == objective.at(label),
             "normalized DMOS for " + content + label + " is not exact");
    }
    inputs.push_back(std::move(input));
  }

  const std::vector<AgreementRow> rows = agreement_table(inputs);
  expect(rows.size() == inputs.size() + 1, "agreement row count");
  for (const AgreementRow& row : rows) {
    expect(row.plcc_BF == 1.0 && row.plcc_BE == 1.0,
           row.content_id + ": PLCC not exactly 1.0");
    expect(row.rmse_BF == 0.0 && row.rmse_BE == 0.0,
           row.content_id + ": RMSE not exactly 0");
  }
}

// --- criterion 7: stub sweep yields the full PVS grid ---

void check_dataset_cardinality() {
  TempDir dir;
  Rng rng(7);
  SweepConfig config;
  for (int c = 0; c < 9; ++c) {
    const std::string path = dir.file("src" + std::to_string(c) + ".y4m");
    write_y4m_file(testutil::random_video(rng, 4, 4, 8, 2), path);
    config.sources.push_back(SweepSource{"content" + std::to_string(c), path});
  }
  config.qp_min = 1;
  config.qp_max = 51;
  config.encoder_template =
      testutil::write_script(dir, "enc.sh", "cp \"$1\" \"$2\"\n") +
      " {in} {out} {qp}";
  config.vmaf_template =
      testutil::write_script(dir, "score.sh",
                             "q=${2##*_qp}\n"
                             "q=${q%%.*}\n"
                             "printf '{\"frames\":[{\"metrics\":{\"vmaf\":%d}}]}'"
                             " $((100 - q)) > \"$3\"\n") +
      " {ref} {dist} {log}";
  config.work_dir = dir.file("work");
  config.parallelism = 4;

  const std::vector<QualityCurve> curves = build_curves(config);
  expect(curves.size() == 9, "expected 9 curves, got " +
                                 std::to_string(curves.size()));
  std::size_t total = 0;
  for (const QualityCurve& curve : curves) {
    expect(curve.holes.empty(), curve.content_id + " has " +
                                    std::to_string(curve.holes.size()) +
                                    " holes");
    total += curve.points.size();
  }
  expect(total == 459,
         "expected 459 PVS records, got " + std::to_string(total));
}

struct Criterion {
  int id;
  const char* summary;
  double limit_seconds;
  std::function<void()> run;
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--only N]\n", argv[0]);
      return 2;
    }
  }

  const std::vector<Criterion> criteria = {
      {1, "real-tool sweep is monotone (eps 0.5) with spread > 30", 600.0,
       check_sweep_monotone},
      {2, "objective metrics match brute-force oracles", 60.0,
       check_metric_oracles},
      {3, "vote statistics match brute-force oracles", 60.0,
       check_statistics_oracles},
      {4, "anchor selection equals the exhaustive rule", 10.0,
       check_anchor_selection},
      {5, "10,000 seeded playlists validate cleanly", 10.0, check_playlists},
      {6, "identity dataset yields PLCC 1.0 and RMSE 0", 5.0,
       check_identity_agreement},
      {7, "stub sweep produces exactly 459 PVS records", 10.0,
       check_dataset_cardinality},
  };

  int failures = 0;
  int ran = 0;
  for (const Criterion& criterion : criteria) {
    if (only != 0 && criterion.id != only) {
      continue;
    }
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    std::string failure;
    try {
      criterion.run();
    } catch (const CheckFailure& f) {
      failure = f.reason;
    } catch (const std::exception& e) {
      failure = std::string("unexpected exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (failure.empty() && elapsed >= criterion.limit_seconds) {
      failure = "runtime " + std::to_string(elapsed) + "s exceeds the " +
                std::to_string(criterion.limit_seconds) + "s budget";
    }
    if (failure.empty()) {
      std::printf("PASS criterion %d: %s [%.1fs]\n", criterion.id,
                  criterion.summary, elapsed);
    } else {
      ++failures;
      std::printf("FAIL criterion %d: %s [%.1fs]: %s\n", criterion.id,
                  criterion.summary, elapsed, failure.c_str());
    }
    std::fflush(stdout);
  }

  if (ran == 0) {
    std::fprintf(stderr, "no criterion matched --only %d\n", only);
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
