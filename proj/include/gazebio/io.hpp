#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gazebio/dissimilarity.hpp"
#include "gazebio/evaluation.hpp"
#include "gazebio/fdm.hpp"
#include "gazebio/fixation.hpp"
#include "gazebio/calibration.hpp"
#include "gazebio/spectral.hpp"
#include "gazebio/ttt.hpp"
#include "gazebio/types.hpp"

namespace gazebio {

// Trace CSV: header `t,x,y,valid`; t in decimal seconds, x/y decimal pixels,
// valid in {0,1}. UTF-8, LF line endings.
GazeTrace parse_trace(const std::string& text, double rate = 60.0);
std::string serialize_trace(const GazeTrace& trace);

// Events CSV: header `t_onset,t_offset,kind,cx,cy,color`; kind in
// {target, blank}; cx/cy empty for blanks. Output ordered by t_onset.
std::vector<StimulusEvent> parse_events(const std::string& text);
std::string serialize_events(const std::vector<StimulusEvent>& events);

// Fixation list CSV: header `cx,cy,t_start,duration,n_samples`.
std::vector<Fixation> parse_fixations(const std::string& text);
std::string serialize_fixations(const std::vector<Fixation>& fixations);

// Manifest: one JSON document per trial, fields named exactly as the type's.
TrialManifest parse_manifest(const std::string& text);
std::string serialize_manifest(const TrialManifest& m);

// Grid files: `# subject=... week=... trial=... n=...` comment line(s), then
// n rows of n comma-separated cells. Spectra add `# kind=spectrum l=...`.
std::string serialize_fdm(const FixationDensityMap& m);
FixationDensityMap parse_fdm(const std::string& text);
std::string serialize_spectrum(const MagnitudeSpectrum& s);
MagnitudeSpectrum parse_spectrum(const std::string& text);

// Matrix CSV: `# metric=...` line, then a label row and one labeled row per
// trial; labels are `subject:week:trial`.
std::string serialize_matrix(const DissimilarityMatrix& m);
DissimilarityMatrix parse_matrix(const std::string& text);

// Affine transform as JSON with the six named fields.
std::string serialize_transform(const AffineTransform& t);
AffineTransform parse_transform(const std::string& text);

// Subject profile as JSON: latency parameters, the blank-period gaussian
// mixture, drift and noise scales.
std::string serialize_profile(const struct SubjectProfile& p);
struct SubjectProfile parse_profile(const std::string& text);

// Threshold sweep as CSV `threshold,tpr,fpr,fnr,precision,recall,f1,acc` and
// the evaluation report as JSON.
std::string serialize_curves(const std::vector<SweepPoint>& sweep_points);
std::string serialize_report(const EvalReport& r, std::size_t n_trials);

// TTT records CSV `trial,event_index,latency,direction` and stats CSV
// `group,n,mean,median,sigma`, both preceded by a `# radius_px=... ...`
// metadata comment.
std::string serialize_ttt_records(const std::vector<TttRecord>& records, double radius_px,
                                  TttWindow window);
std::string serialize_ttt_stats(const std::vector<TttStats>& stats, double radius_px,
                                TttWindow window);

// Filesystem helpers (throw ConfigError with the offending path).
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace gazebio
