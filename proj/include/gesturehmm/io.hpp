#ifndef GESTUREHMM_IO_HPP
#define GESTUREHMM_IO_HPP

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gesturehmm/core.hpp"

namespace gesturehmm {

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    std::size_t a = field.find_first_not_of(" \t\r");
    std::size_t b = field.find_last_not_of(" \t\r");
    out.push_back(a == std::string::npos ? "" : field.substr(a, b - a + 1));
  }
  return out;
}

inline double parse_number(const std::string& s, const std::string& file, std::size_t line_no) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(file + ":" + std::to_string(line_no) + ": non-numeric field '" + s + "'");
  }
}

inline bool skippable(const std::string& line) {
  for (char c : line)
    if (c != ' ' && c != '\t' && c != '\r') return c == '#';
  return true;  // blank
}

}  // namespace detail

// Session file: one sample per line, 6 comma-separated numeric columns
// x,y,z,yaw,pitch,roll. Lines starting with '#' are comments.
inline SensorSeries load_series(const std::string& path, double sample_rate_hz = 15.0) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open series file: " + path);
  SensorSeries series;
  series.session_id = std::filesystem::path(path).stem().string();
  series.sample_rate_hz = sample_rate_hz;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::skippable(line)) continue;
    auto fields = detail::split_csv(line);
    if (fields.size() != kNumAxes)
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected 6 columns, got " +
                       std::to_string(fields.size()));
    SensorSample s;
    for (int a = 0; a < kNumAxes; ++a)
      s[a] = detail::parse_number(fields[static_cast<std::size_t>(a)], path, line_no);
    series.samples.push_back(s);
  }
  series.validate();
  return series;
}

// Annotation file: start_index,end_index,label per line, lowercase labels.
inline std::vector<GestureSegment> load_segments(const std::string& path,
                                                 std::size_t series_length) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open annotation file: " + path);
  std::vector<GestureSegment> segments;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::skippable(line)) continue;
    auto fields = detail::split_csv(line);
    if (fields.size() != 3)
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected 3 columns, got " +
                       std::to_string(fields.size()));
    GestureSegment seg;
    double s = detail::parse_number(fields[0], path, line_no);
    double e = detail::parse_number(fields[1], path, line_no);
    if (s < 0 || e < 0 || s != std::floor(s) || e != std::floor(e))
      throw ParseError(path + ":" + std::to_string(line_no) + ": indices must be non-negative integers");
    seg.start_index = static_cast<std::size_t>(s);
    seg.end_index = static_cast<std::size_t>(e);
    seg.label = parse_label(fields[2]);
    segments.push_back(seg);
  }
  validate_segments(segments, series_length);
  return segments;
}

inline std::pair<SensorSeries, std::vector<GestureSegment>> load_session(
    const std::string& series_path, const std::string& annotation_path,
    double sample_rate_hz = 15.0) {
  SensorSeries series = load_series(series_path, sample_rate_hz);
  auto segments = load_segments(annotation_path, series.size());
  return {std::move(series), std::move(segments)};
}

inline void write_series(const SensorSeries& series, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  out << "# x,y,z,yaw,pitch,roll\n";
  char buf[32];
  for (const auto& s : series.samples) {
    for (int a = 0; a < kNumAxes; ++a) {
      auto res = std::to_chars(buf, buf + sizeof(buf), s[a], std::chars_format::general, 17);
      out.write(buf, res.ptr - buf);
      out.put(a + 1 == kNumAxes ? '\n' : ',');
    }
  }
}

inline void write_segments(const std::vector<GestureSegment>& segments, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  out << "# start_index,end_index,label\n";
  for (const auto& s : segments)
    out << s.start_index << ',' << s.end_index << ',' << label_name(s.label) << '\n';
}

}  // namespace gesturehmm

#endif
