#include "ega/csv_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ega/error.hpp"

namespace ega {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& text, const std::string& path, size_t line_no) {
  const char* begin = text.c_str();
  char* end = nullptr;
  double value = std::strtod(begin, &end);
  // Require the whole field to be consumed (allow trailing \r from CRLF input).
  while (end && (*end == ' ' || *end == '\r')) ++end;
  if (end == begin || (end && *end != '\0') || !std::isfinite(value)) {
    throw ValidationError(path + ": parse error at line " + std::to_string(line_no) +
                          ": non-numeric cell '" + text + "'");
  }
  return value;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

void write_full_precision(std::FILE* f, double v) {
  std::fprintf(f, "%.17g", v);
}

}  // namespace

SensorStream load_sensor_csv(const std::string& path, int expected_channels) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open sensor file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw ValidationError(path + ": empty sensor file");
  auto header = split_csv_line(strip_cr(line));
  if (header.empty() || header[0] != "timestamp_ms") {
    throw ValidationError(path + ": sensor header must start with timestamp_ms");
  }

  SensorStream stream;
  stream.channel_names.assign(header.begin() + 1, header.end());
  const long channels = static_cast<long>(stream.channel_names.size());
  if (channels < 1) throw ValidationError(path + ": no channel columns");
  if (expected_channels >= 0 && channels != expected_channels) {
    throw ValidationError(path + ": expected " + std::to_string(expected_channels) +
                          " channels, found " + std::to_string(channels));
  }

  std::vector<double> timestamps;
  std::vector<double> values;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (static_cast<long>(fields.size()) != channels + 1) {
      throw ValidationError(path + ": parse error at line " + std::to_string(line_no) +
                            ": expected " + std::to_string(channels + 1) +
                            " columns, found " + std::to_string(fields.size()));
    }
    timestamps.push_back(parse_number(fields[0], path, line_no));
    for (long c = 0; c < channels; ++c) {
      values.push_back(parse_number(fields[c + 1], path, line_no));
    }
  }

  const long rows = static_cast<long>(timestamps.size());
  if (rows < 1) throw ValidationError(path + ": sensor file has no data rows");

  for (long i = 1; i < rows; ++i) {
    if (!(timestamps[i] > timestamps[i - 1])) {
      throw ValidationError(path + ": non-monotonic timestamps at row " + std::to_string(i + 1));
    }
  }

  stream.samples.resize(rows, channels);
  for (long i = 0; i < rows; ++i) {
    for (long c = 0; c < channels; ++c) stream.samples(i, c) = values[i * channels + c];
  }

  if (rows >= 2) {
    std::vector<double> deltas(rows - 1);
    for (long i = 1; i < rows; ++i) deltas[i - 1] = timestamps[i] - timestamps[i - 1];
    std::vector<double> sorted = deltas;
    std::nth_element(sorted.begin(), sorted.begin() + (sorted.size() - 1) / 2, sorted.end());
    const double median_ms = sorted[(sorted.size() - 1) / 2];
    for (size_t i = 0; i < deltas.size(); ++i) {
      if (deltas[i] > 1.5 * median_ms) {
        throw ValidationError(path + ": timestamp gap at row " + std::to_string(i + 2) +
                              " exceeds 1.5x the nominal period");
      }
    }
    stream.sample_rate_hz = 1000.0 / median_ms;
  } else {
    stream.sample_rate_hz = 10.0;  // declared default for degenerate length
  }
  return stream;
}

void write_sensor_csv(const std::string& path, const SensorStream& stream) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw IoError("cannot write sensor file: " + path);
  std::fprintf(f, "timestamp_ms");
  for (const auto& name : stream.channel_names) std::fprintf(f, ",%s", name.c_str());
  std::fprintf(f, "\n");
  const double period_ms = 1000.0 / stream.sample_rate_hz;
  for (long i = 0; i < stream.length(); ++i) {
    write_full_precision(f, static_cast<double>(i) * period_ms);
    for (long c = 0; c < stream.channels(); ++c) {
      std::fputc(',', f);
      write_full_precision(f, stream.samples(i, c));
    }
    std::fputc('\n', f);
  }
  std::fclose(f);
}

std::vector<TrajectoryDescriptor> load_trajectories(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trajectory file: " + path);

  std::vector<TrajectoryDescriptor> out;
  std::string line;
  if (!std::getline(in, line)) return out;  // empty file -> empty list

  long dim = -1;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() < 2) {
      throw ValidationError(path + ": parse error at line " + std::to_string(line_no) +
                            ": descriptor row needs start_frame plus values");
    }
    const long row_dim = static_cast<long>(fields.size()) - 1;
    if (dim < 0) {
      dim = row_dim;
    } else if (row_dim != dim) {
      throw ValidationError(path + ": ragged row at line " + std::to_string(line_no) +
                            ": width " + std::to_string(row_dim) + " vs " + std::to_string(dim));
    }
    TrajectoryDescriptor d;
    const double frame = parse_number(fields[0], path, line_no);
    if (frame < 0 || frame != std::floor(frame)) {
      throw ValidationError(path + ": invalid start_frame at line " + std::to_string(line_no));
    }
    d.start_frame = static_cast<long>(frame);
    d.values.resize(dim);
    for (long c = 0; c < dim; ++c) d.values[c] = parse_number(fields[c + 1], path, line_no);
    out.push_back(std::move(d));
  }
  return out;
}

void write_trajectories(const std::string& path,
                        const std::vector<TrajectoryDescriptor>& trajectories) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw IoError("cannot write trajectory file: " + path);
  const long dim = trajectories.empty() ? 0 : trajectories.front().values.size();
  std::fprintf(f, "start_frame");
  for (long c = 0; c < dim; ++c) std::fprintf(f, ",f%ld", c);
  std::fprintf(f, "\n");
  for (const auto& d : trajectories) {
    std::fprintf(f, "%ld", d.start_frame);
    for (long c = 0; c < d.values.size(); ++c) {
      std::fputc(',', f);
      write_full_precision(f, d.values[c]);
    }
    std::fputc('\n', f);
  }
  std::fclose(f);
}

}  // namespace ega
