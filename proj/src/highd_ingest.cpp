#include "scenkit/highd_ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>

#include <fmt/format.h>

#include "scenkit/error.hpp"

namespace scenkit {
namespace {

constexpr const char* kTrackColumns[] = {
    "frame",
    "id",
    "x",
    "y",
    "width",
    "height",
    "xVelocity",
    "yVelocity",
    "xAcceleration",
    "yAcceleration",
    "frontSightDistance",
    "backSightDistance",
    "dhw",
    "thw",
    "ttc",
    "precedingXVelocity",
    "precedingId",
    "followingId",
    "leftPrecedingId",
    "leftAlongsideId",
    "leftFollowingId",
    "rightPrecedingId",
    "rightAlongsideId",
    "rightFollowingId",
    "laneId",
};

constexpr const char* kTracksMetaColumns[] = {
    "id", "width", "height", "initialFrame", "finalFrame", "numFrames", "class", "drivingDirection",
};

constexpr const char* kRecordingMetaColumns[] = {
    "id", "frameRate", "speedLimit", "upperLaneMarkings", "lowerLaneMarkings", "numVehicles",
};

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

// Minimal CSV table: header row plus data rows, no quoting (highD never quotes).
class CsvTable {
 public:
  CsvTable(const std::filesystem::path& path, std::span<const char* const> required)
      : name_(path.filename().string()) {
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot open {}", path.string()));
    std::stringstream ss;
    ss << in.rdbuf();
    text_ = ss.str();
    std::string_view all(text_);
    std::size_t start = 0;
    bool header = true;
    while (start < all.size()) {
      auto end = all.find('\n', start);
      if (end == std::string_view::npos) end = all.size();
      std::string_view line = all.substr(start, end - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      start = end + 1;
      if (line.empty()) continue;
      if (header) {
        auto names = split(line, ',');
        for (std::size_t i = 0; i < names.size(); ++i) columns_[std::string(names[i])] = i;
        header = false;
        continue;
      }
      rows_.push_back(split(line, ','));
    }
    if (header) throw SchemaError(fmt::format("{}: missing header row", name_));
    for (const char* col : required) {
      if (!columns_.count(col)) throw SchemaError(fmt::format("{}: missing column '{}'", name_, col));
    }
  }

  std::size_t size() const { return rows_.size(); }
  const std::string& name() const { return name_; }

  std::string_view cell(std::size_t row, const char* column) const {
    const auto& r = rows_[row];
    const auto idx = columns_.at(column);
    if (idx >= r.size()) {
      throw SchemaError(fmt::format("{} row {}: too few cells", name_, row + 2));
    }
    return r[idx];
  }

  double number(std::size_t row, const char* column) const {
    std::string_view s = cell(row, column);
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw SchemaError(
          fmt::format("{} row {} column '{}': '{}' is not a number", name_, row + 2, column, s));
    }
    return v;
  }

  int integer(std::size_t row, const char* column) const {
    return static_cast<int>(std::lround(number(row, column)));
  }

 private:
  std::string name_;
  std::string text_;
  std::map<std::string, std::size_t> columns_;
  std::vector<std::vector<std::string_view>> rows_;
};

std::vector<double> parse_markings(std::string_view text, const std::string& where) {
  std::vector<double> out;
  for (auto part : split(text, ';')) {
    if (part.empty()) continue;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc()) throw SchemaError(fmt::format("{}: bad lane marking '{}'", where, part));
    out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string join_markings(const std::vector<double>& m) {
  std::string out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) out += ';';
    out += fmt::format("{:.3f}", m[i]);
  }
  return out;
}

}  // namespace

FrameIndex::FrameIndex(const std::vector<Track>& tracks) {
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    for (const auto& p : tracks[i].points) by_frame_[p.frame].push_back(i);
  }
}

const std::vector<std::size_t>& FrameIndex::at(int frame) const {
  auto it = by_frame_.find(frame);
  return it == by_frame_.end() ? empty_ : it->second;
}

const Track* Recording::find(int id) const {
  auto it = std::lower_bound(tracks.begin(), tracks.end(), id,
                             [](const Track& t, int v) { return t.id < v; });
  return (it != tracks.end() && it->id == id) ? &*it : nullptr;
}

const Track& Recording::track(int id) const {
  if (const Track* t = find(id)) return *t;
  throw LookupError(fmt::format("recording {} has no vehicle {}", meta.recording_id, id));
}

std::string ValidationReport::to_text() const {
  std::string out;
  for (const auto& e : errors) {
    out += fmt::format("error: {}{}: {}\n", e.file, e.row ? fmt::format(":{}", e.row) : "", e.message);
  }
  for (const auto& w : warnings) {
    out += fmt::format("warning: {}{}: {}\n", w.file, w.row ? fmt::format(":{}", w.row) : "",
                       w.message);
  }
  out += fmt::format("{} vehicles, {} frames, {} errors, {} warnings\n", vehicles, frames,
                     errors.size(), warnings.size());
  return out;
}

std::filesystem::path recording_file(const std::filesystem::path& data_dir, int recording_id,
                                     std::string_view suffix) {
  return data_dir / fmt::format("{:02d}_{}.csv", recording_id, suffix);
}

void normalize_track(Track& track) {
  if (track.normalized) throw ArgumentError(fmt::format("track {} is already normalized", track.id));
  const bool upper = track.carriageway == Carriageway::upper;
  for (auto& p : track.points) {
    const double xc = p.x + 0.5 * track.length;
    const double yc = p.y + 0.5 * track.width;
    if (upper) {
      p.x = -xc;
      p.y = yc;
      p.vx = -p.vx;
      p.ax = -p.ax;
    } else {
      p.x = xc;
      p.y = -yc;
      p.vy = -p.vy;
      p.ay = -p.ay;
    }
  }
  track.normalized = true;
}

Track denormalize_track(const Track& track) {
  if (!track.normalized) throw ArgumentError(fmt::format("track {} is not normalized", track.id));
  Track out = track;
  const bool upper = track.carriageway == Carriageway::upper;
  for (auto& p : out.points) {
    double xc = p.x;
    double yc = p.y;
    if (upper) {
      xc = -p.x;
      p.vx = -p.vx;
      p.ax = -p.ax;
    } else {
      yc = -p.y;
      p.vy = -p.vy;
      p.ay = -p.ay;
    }
    p.x = xc - 0.5 * track.length;
    p.y = yc - 0.5 * track.width;
  }
  out.normalized = false;
  return out;
}

Recording make_recording(RecordingMeta meta, std::vector<Track> tracks) {
  std::sort(tracks.begin(), tracks.end(), [](const Track& a, const Track& b) { return a.id < b.id; });
  Recording rec;
  rec.upper_road = meta.road(Carriageway::upper);
  rec.lower_road = meta.road(Carriageway::lower);
  rec.meta = std::move(meta);
  rec.tracks = std::move(tracks);
  rec.index = FrameIndex(rec.tracks);
  return rec;
}

ParsedRecording parse_recording(const std::filesystem::path& data_dir, int recording_id) {
  const auto meta_path = recording_file(data_dir, recording_id, "recordingMeta");
  const auto tmeta_path = recording_file(data_dir, recording_id, "tracksMeta");
  const auto tracks_path = recording_file(data_dir, recording_id, "tracks");
  for (const auto& p : {meta_path, tmeta_path, tracks_path}) {
    if (!std::filesystem::exists(p)) throw IoError(fmt::format("missing file {}", p.string()));
  }

  ParsedRecording out;
  auto& report = out.parse_report;

  CsvTable rmeta(meta_path, kRecordingMetaColumns);
  if (rmeta.size() != 1) throw SchemaError(fmt::format("{}: expected exactly one row", rmeta.name()));
  out.meta.recording_id = rmeta.integer(0, "id");
  out.meta.frame_rate = rmeta.number(0, "frameRate");
  const double limit = rmeta.number(0, "speedLimit");
  if (limit > 0.0) out.meta.speed_limit = limit;
  out.meta.lane_markings_upper = parse_markings(rmeta.cell(0, "upperLaneMarkings"), rmeta.name());
  out.meta.lane_markings_lower = parse_markings(rmeta.cell(0, "lowerLaneMarkings"), rmeta.name());
  out.meta.num_vehicles = rmeta.integer(0, "numVehicles");

  CsvTable tmeta(tmeta_path, kTracksMetaColumns);
  std::map<int, Track> by_id;
  for (std::size_t r = 0; r < tmeta.size(); ++r) {
    Track t;
    t.id = tmeta.integer(r, "id");
    t.length = tmeta.number(r, "width");  // image-plane x extent
    t.width = tmeta.number(r, "height");
    t.vehicle_class = parse_vehicle_class(tmeta.cell(r, "class"));
    const int dir = tmeta.integer(r, "drivingDirection");
    if (dir != 1 && dir != 2) {
      throw SchemaError(fmt::format("{} row {}: drivingDirection must be 1 or 2", tmeta.name(), r + 2));
    }
    t.carriageway = dir == 1 ? Carriageway::upper : Carriageway::lower;
    if (by_id.count(t.id)) {
      report.errors.push_back({tmeta.name(), static_cast<long>(r + 2),
                               fmt::format("duplicate vehicle id {}", t.id)});
    }
    by_id[t.id] = std::move(t);
  }

  CsvTable rows(tracks_path, kTrackColumns);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const int id = rows.integer(r, "id");
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      report.errors.push_back({rows.name(), static_cast<long>(r + 2),
                               fmt::format("vehicle {} missing from tracksMeta", id)});
      continue;
    }
    TrackPoint p;
    p.frame = rows.integer(r, "frame");
    p.x = rows.number(r, "x");
    p.y = rows.number(r, "y");
    p.vx = rows.number(r, "xVelocity");
    p.vy = rows.number(r, "yVelocity");
    p.ax = rows.number(r, "xAcceleration");
    p.ay = rows.number(r, "yAcceleration");
    const int lane = rows.integer(r, "laneId");
    out.csv_lane_ids[{id, p.frame}] = lane;
    out.neighbours[{id, p.frame}] = {rows.integer(r, "precedingId"), rows.integer(r, "followingId")};
    it->second.points.push_back(p);
  }

  const Road upper = out.meta.road(Carriageway::upper);
  const Road lower = out.meta.road(Carriageway::lower);
  for (auto& [id, t] : by_id) {
    std::stable_sort(t.points.begin(), t.points.end(),
                     [](const TrackPoint& a, const TrackPoint& b) { return a.frame < b.frame; });
    normalize_track(t);
    const Road& road = t.carriageway == Carriageway::upper ? upper : lower;
    if (road.lane_count() > 0) {
      for (auto& p : t.points) p.lane_id = road.nearest_lane(p.y);
    }
    out.tracks.push_back(std::move(t));
  }
  return out;
}

ValidationReport validate_recording(const RecordingMeta& meta, const std::vector<Track>& tracks) {
  ValidationReport rep;
  const std::string file = fmt::format("{:02d}_tracks.csv", meta.recording_id);
  const std::string meta_file = fmt::format("{:02d}_recordingMeta.csv", meta.recording_id);
  if (meta.lane_markings_upper.size() < 2 || meta.lane_markings_lower.size() < 2) {
    rep.errors.push_back({meta_file, 0, "each carriageway needs at least 2 lane markings"});
  }
  if (!(meta.frame_rate > 0.0)) {
    rep.errors.push_back({meta_file, 0, "frame rate must be positive"});
  } else if (std::abs(meta.frame_rate - 25.0) > 1e-9) {
    rep.warnings.push_back(
        {meta_file, 0, fmt::format("frame rate {} Hz differs from highD's 25 Hz", meta.frame_rate)});
  }
  if (meta.num_vehicles != static_cast<int>(tracks.size())) {
    rep.warnings.push_back({meta_file, 0,
                            fmt::format("numVehicles {} but {} tracks parsed", meta.num_vehicles,
                                        tracks.size())});
  }
  const Road upper = meta.road(Carriageway::upper);
  const Road lower = meta.road(Carriageway::lower);
  for (const auto& t : tracks) {
    ++rep.vehicles;
    rep.frames += static_cast<long>(t.points.size());
    if (!(t.length > 0.0) || !(t.width > 0.0)) {
      rep.errors.push_back({file, 0,
                            fmt::format("vehicle {}: non-positive dimensions {} x {}", t.id, t.length,
                                        t.width)});
    }
    if (t.points.empty()) {
      rep.errors.push_back({file, 0, fmt::format("vehicle {}: no track rows", t.id)});
      continue;
    }
    const Road& road = t.carriageway == Carriageway::upper ? upper : lower;
    bool gap_reported = false;
    bool lane_reported = false;
    bool speed_reported = false;
    for (std::size_t i = 0; i < t.points.size(); ++i) {
      const auto& p = t.points[i];
      if (i > 0 && p.frame != t.points[i - 1].frame + 1 && !gap_reported) {
        rep.errors.push_back({file, 0,
                              fmt::format("vehicle {}: frame gap between {} and {}", t.id,
                                          t.points[i - 1].frame, p.frame)});
        gap_reported = true;
      }
      if (!road.contains_lane(p.lane_id) && !lane_reported) {
        rep.errors.push_back(
            {file, 0, fmt::format("vehicle {}: lane {} at frame {} not declared", t.id, p.lane_id, p.frame)});
        lane_reported = true;
      }
      if (!(std::hypot(p.vx, p.vy) < 100.0) && !speed_reported) {
        rep.errors.push_back(
            {file, 0, fmt::format("vehicle {}: implausible speed at frame {}", t.id, p.frame)});
        speed_reported = true;
      }
    }
  }
  return rep;
}

namespace {

// Nearest same-lane neighbour ahead/behind at any distance, per frame.
void cross_check_neighbours(const ParsedRecording& parsed, const Recording& rec,
                            ValidationReport& report) {
  long lane_mismatch = 0;
  long preceding_mismatch = 0;
  for (const auto& t : rec.tracks) {
    for (const auto& p : t.points) {
      if (auto it = parsed.csv_lane_ids.find({t.id, p.frame});
          it != parsed.csv_lane_ids.end() && it->second != p.lane_id) {
        ++lane_mismatch;
      }
    }
  }
  for (const auto& t : rec.tracks) {
    for (const auto& p : t.points) {
      auto nb = parsed.neighbours.find({t.id, p.frame});
      if (nb == parsed.neighbours.end()) continue;
      int best = 0;
      double best_dx = 0.0;
      for (std::size_t idx : rec.index.at(p.frame)) {
        const Track& o = rec.tracks[idx];
        if (o.id == t.id || o.carriageway != t.carriageway) continue;
        const TrackPoint* q = o.at(p.frame);
        if (!q || q->lane_id != p.lane_id) continue;
        const double dx = q->x - p.x;
        if (dx > 0.0 && (best == 0 || dx < best_dx)) {
          best = o.id;
          best_dx = dx;
        }
      }
      if (best != nb->second.preceding_id) ++preceding_mismatch;
    }
  }
  const std::string file = fmt::format("{:02d}_tracks.csv", rec.meta.recording_id);
  if (lane_mismatch > 0) {
    report.warnings.push_back(
        {file, 0, fmt::format("{} rows where laneId differs from the marking-derived lane", lane_mismatch)});
  }
  if (preceding_mismatch > 0) {
    report.warnings.push_back(
        {file, 0,
         fmt::format("{} rows where precedingId differs from the geometric preceding vehicle",
                     preceding_mismatch)});
  }
}

}  // namespace

Recording load_recording(const std::filesystem::path& data_dir, int recording_id,
                         ValidationReport* report_out) {
  ParsedRecording parsed = parse_recording(data_dir, recording_id);
  ValidationReport report = validate_recording(parsed.meta, parsed.tracks);
  report.errors.insert(report.errors.begin(), parsed.parse_report.errors.begin(),
                       parsed.parse_report.errors.end());
  if (!report.ok()) throw ValidationError(report.to_text());
  Recording rec = make_recording(parsed.meta, parsed.tracks);
  cross_check_neighbours(parsed, rec, report);
  if (report_out != nullptr) *report_out = std::move(report);
  return rec;
}

std::vector<int> list_recordings(const std::filesystem::path& data_dir) {
  if (!std::filesystem::is_directory(data_dir)) {
    throw IoError(fmt::format("{} is not a directory", data_dir.string()));
  }
  static const std::regex pattern(R"((\d+)_recordingMeta\.csv)");
  std::vector<int> ids;
  for (const auto& entry : std::filesystem::directory_iterator(data_dir)) {
    std::smatch m;
    const std::string name = entry.path().filename().string();
    if (std::regex_match(name, m, pattern)) ids.push_back(std::stoi(m[1].str()));
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

namespace {

struct Neighbours {
  int preceding = 0, following = 0;
  int left_preceding = 0, left_alongside = 0, left_following = 0;
  int right_preceding = 0, right_alongside = 0, right_following = 0;
  double dhw = 0.0, thw = 0.0, ttc = 0.0, preceding_vx = 0.0;
};

// highD-style neighbour columns (unlimited distance), written for completeness.
Neighbours neighbours_of(const Recording& rec, const Track& t, const TrackPoint& p) {
  Neighbours n;
  const Road& road = rec.road(t.carriageway);
  double best[6] = {1e18, 1e18, 1e18, 1e18, 1e18, 1e18};
  for (std::size_t idx : rec.index.at(p.frame)) {
    const Track& o = rec.tracks[idx];
    if (o.id == t.id || o.carriageway != t.carriageway) continue;
    const TrackPoint* q = o.at(p.frame);
    const auto rel = lane_offset(road, p.lane_id, q->lane_id);
    if (!rel || std::abs(*rel) > 1) continue;
    const double dx = q->x - p.x;
    const bool alongside = std::abs(dx) < 0.5 * (t.length + o.length);
    if (*rel == 0) {
      if (dx > 0.0 && dx < best[0]) {
        best[0] = dx;
        n.preceding = o.id;
        n.preceding_vx = q->vx;
        n.dhw = std::max(0.0, dx - 0.5 * (t.length + o.length));
      } else if (dx <= 0.0 && -dx < best[1]) {
        best[1] = -dx;
        n.following = o.id;
      }
      continue;
    }
    int* pre = *rel > 0 ? &n.left_preceding : &n.right_preceding;
    int* along = *rel > 0 ? &n.left_alongside : &n.right_alongside;
    int* fol = *rel > 0 ? &n.left_following : &n.right_following;
    double* bp = *rel > 0 ? &best[2] : &best[4];
    double* bf = *rel > 0 ? &best[3] : &best[5];
    if (alongside) {
      *along = o.id;
    } else if (dx > 0.0 && dx < *bp) {
      *bp = dx;
      *pre = o.id;
    } else if (dx < 0.0 && -dx < *bf) {
      *bf = -dx;
      *fol = o.id;
    }
  }
  if (n.preceding != 0) {
    n.thw = p.vx > 0.1 ? n.dhw / p.vx : 0.0;
    const double closing = p.vx - n.preceding_vx;
    n.ttc = closing > 0.0 ? n.dhw / closing : 0.0;
  }
  return n;
}

}  // namespace

void write_atomically(const std::filesystem::path& path, const std::string& content) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError(fmt::format("cannot write {}", tmp));
    out << content;
    if (!out) throw IoError(fmt::format("write failed for {}", tmp));
  }
  std::filesystem::rename(tmp, path);
}


void write_recording(const std::filesystem::path& data_dir, const RecordingMeta& meta,
                     const std::vector<Track>& tracks) {
  std::filesystem::create_directories(data_dir);
  const Recording rec = make_recording(meta, tracks);

  int cars = 0;
  int trucks = 0;
  int first_frame = 0;
  int last_frame = 0;
  bool any = false;
  for (const auto& t : rec.tracks) {
    (t.vehicle_class == VehicleClass::truck ? trucks : cars)++;
    if (!t.points.empty()) {
      first_frame = any ? std::min(first_frame, t.initial_frame()) : t.initial_frame();
      last_frame = any ? std::max(last_frame, t.final_frame()) : t.final_frame();
      any = true;
    }
  }
  const double duration = any ? (last_frame - first_frame + 1) / meta.frame_rate : 0.0;

  std::string rm =
      "id,frameRate,locationId,speedLimit,month,weekDay,startTime,duration,totalDrivenDistance,"
      "totalDrivenTime,numVehicles,numCars,numTrucks,upperLaneMarkings,lowerLaneMarkings\n";
  rm += fmt::format("{},{},{},{:.2f},{},{},{},{:.2f},{:.2f},{:.2f},{},{},{},{},{}\n", meta.recording_id,
                    static_cast<int>(std::lround(meta.frame_rate)), 0,
                    meta.speed_limit.value_or(-1.0), "01.2020", "Mon", "00:00", duration, 0.0, 0.0,
                    rec.tracks.size(), cars, trucks, join_markings(meta.lane_markings_upper),
                    join_markings(meta.lane_markings_lower));

  std::string tm =
      "id,width,height,initialFrame,finalFrame,numFrames,class,drivingDirection,traveledDistance,"
      "minXVelocity,maxXVelocity,meanXVelocity,minDHW,minTHW,minTTC,numLaneChanges\n";
  std::string tr;
  for (std::size_t i = 0; i < std::size(kTrackColumns); ++i) {
    if (i) tr += ',';
    tr += kTrackColumns[i];
  }
  tr += '\n';

  // Rows ordered by vehicle then frame, as in highD.
  for (const auto& t : rec.tracks) {
    double vmin = 1e18, vmax = -1e18, vsum = 0.0;
    int lane_changes = 0;
    for (std::size_t k = 0; k < t.points.size(); ++k) {
      vmin = std::min(vmin, t.points[k].vx);
      vmax = std::max(vmax, t.points[k].vx);
      vsum += t.points[k].vx;
      if (k > 0 && t.points[k].lane_id != t.points[k - 1].lane_id) ++lane_changes;
    }
    const double travelled =
        t.points.empty() ? 0.0 : std::abs(t.points.back().x - t.points.front().x);
    const double vmean = t.points.empty() ? 0.0 : vsum / static_cast<double>(t.points.size());
    const bool upper = t.carriageway == Carriageway::upper;
    const double sgn = upper ? -1.0 : 1.0;
    tm += fmt::format("{},{:.2f},{:.2f},{},{},{},{},{},{:.2f},{:.2f},{:.2f},{:.2f},{},{},{},{}\n", t.id,
                      t.length, t.width, t.initial_frame(), t.final_frame(), t.points.size(),
                      t.vehicle_class == VehicleClass::truck ? "Truck" : "Car", upper ? 1 : 2,
                      travelled, upper ? -vmax : vmin, upper ? -vmin : vmax, sgn * vmean, -1, -1, -1,
                      lane_changes);

    const Track raw = denormalize_track(t);
    for (std::size_t k = 0; k < t.points.size(); ++k) {
      const auto& p = raw.points[k];
      const Neighbours n = neighbours_of(rec, t, t.points[k]);
      tr += fmt::format(
          "{},{},{:.8f},{:.8f},{:.2f},{:.2f},{:.8f},{:.8f},{:.8f},{:.8f},{:.2f},{:.2f},{:.4f},{:.4f},"
          "{:.4f},{:.4f},{},{},{},{},{},{},{},{},{}\n",
          p.frame, t.id, p.x, p.y, t.length, t.width, p.vx, p.vy, p.ax, p.ay, 0.0, 0.0, n.dhw, n.thw,
          n.ttc, sgn * n.preceding_vx, n.preceding, n.following, n.left_preceding, n.left_alongside,
          n.left_following, n.right_preceding, n.right_alongside, n.right_following, p.lane_id);
    }
  }

  write_atomically(recording_file(data_dir, meta.recording_id, "recordingMeta"), rm);
  write_atomically(recording_file(data_dir, meta.recording_id, "tracksMeta"), tm);
  write_atomically(recording_file(data_dir, meta.recording_id, "tracks"), tr);
}

Recording mirrored(const Recording& recording) {
  Recording out;
  out.meta = recording.meta;
  out.tracks.reserve(recording.tracks.size());
  for (const auto& t : recording.tracks) out.tracks.push_back(mirrored(t));
  out.index = FrameIndex(out.tracks);
  out.upper_road = recording.upper_road.mirrored();
  out.lower_road = recording.lower_road.mirrored();
  return out;
}

}  // namespace scenkit
