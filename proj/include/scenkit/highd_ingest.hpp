#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "scenkit/core_model.hpp"

namespace scenkit {

struct RecordingMeta {
  int recording_id = 0;
  double frame_rate = 25.0;
  std::optional<double> speed_limit;  // m/s; nullopt when unlimited
  std::vector<double> lane_markings_upper;  // image-space y offsets, ascending
  std::vector<double> lane_markings_lower;
  int num_vehicles = 0;

  double dt() const { return 1.0 / frame_rate; }
  Road road(Carriageway c) const {
    return Road::from_markings(c, lane_markings_upper, lane_markings_lower);
  }
};

/// Per-frame vehicle lookup over a recording's tracks.
class FrameIndex {
 public:
  FrameIndex() = default;
  explicit FrameIndex(const std::vector<Track>& tracks);
  /// Indices into the track list of vehicles present at `frame`.
  const std::vector<std::size_t>& at(int frame) const;

 private:
  std::unordered_map<int, std::vector<std::size_t>> by_frame_;
  std::vector<std::size_t> empty_;
};

struct Recording {
  RecordingMeta meta;
  std::vector<Track> tracks;  // ascending id
  FrameIndex index;
  Road upper_road;
  Road lower_road;

  const Road& road(Carriageway c) const { return c == Carriageway::upper ? upper_road : lower_road; }

  const Track& track(int id) const;
  const Track* find(int id) const;
};

struct ValidationIssue {
  std::string file;
  long row = 0;  // 0 when not tied to a row
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> errors;
  std::vector<ValidationIssue> warnings;
  int vehicles = 0;
  long frames = 0;

  bool ok() const { return errors.empty(); }
  std::string to_text() const;
};

/// Raw neighbour columns of tracks.csv, kept for cross-checking.
struct NeighbourColumns {
  int preceding_id = 0;
  int following_id = 0;
};

struct ParsedRecording {
  RecordingMeta meta;
  std::vector<Track> tracks;  // normalized, center-referenced
  std::map<std::pair<int, int>, NeighbourColumns> neighbours;  // (id, frame)
  std::map<std::pair<int, int>, int> csv_lane_ids;             // (id, frame)
  ValidationReport parse_report;  // issues found while parsing
};

std::filesystem::path recording_file(const std::filesystem::path& data_dir, int recording_id,
                                     std::string_view suffix);

/// Parses the CSV triplet and normalizes coordinates. Throws IoError on missing
/// files and SchemaError on missing columns or malformed cells.
ParsedRecording parse_recording(const std::filesystem::path& data_dir, int recording_id);

/// Parse + validate. Throws ValidationError carrying the report text when the
/// recording has errors. Warnings (cross-checks against the precomputed
/// neighbour columns) are returned through `report_out` when given.
Recording load_recording(const std::filesystem::path& data_dir, int recording_id,
                         ValidationReport* report_out = nullptr);

ValidationReport validate_recording(const RecordingMeta& meta, const std::vector<Track>& tracks);

/// Converts a raw highD track (top-left corner, image axes) to center-referenced
/// normalized coordinates. Throws ArgumentError if already normalized.
void normalize_track(Track& track);
/// Inverse of normalize_track, used by writers.
Track denormalize_track(const Track& track);

/// Builds a Recording (with frame index) from already-normalized tracks.
Recording make_recording(RecordingMeta meta, std::vector<Track> tracks);

/// Recording ids present in a directory (from *_recordingMeta.csv files).
std::vector<int> list_recordings(const std::filesystem::path& data_dir);

/// Writes the highD CSV triplet for normalized tracks.
void write_recording(const std::filesystem::path& data_dir, const RecordingMeta& meta,
                     const std::vector<Track>& tracks);

/// Writes `content` to a temporary sibling and renames it into place.
void write_atomically(const std::filesystem::path& path, const std::string& content);

/// Lateral mirror of a whole recording in normalized coordinates.
Recording mirrored(const Recording& recording);

}  // namespace scenkit
