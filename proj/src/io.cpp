#include <cerrno>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "mbgdt/error.hpp"
#include "mbgdt/experiment.hpp"

namespace mbgdt {

namespace {

// Lines of `text` that are neither blank nor comments, with line numbers.
std::vector<std::pair<std::size_t, std::string_view>> data_lines(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> out;
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    out.emplace_back(line_no, line);
  }
  return out;
}

double field_real(std::string_view field, std::string_view origin, std::size_t line_no) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    throw IoError(std::string(origin) + ":" + std::to_string(line_no) + ": bad number '" +
                  std::string(field) + "'");
  }
  return v;
}

std::string csv_safe(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

std::string arm_mse(const std::optional<ArmResult>& arm) {
  if (!arm || !arm->ok()) return "";
  return format_real(arm->mse);
}

}  // namespace

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing: " + std::strerror(errno));
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "': " + std::strerror(errno));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string dataset_csv(const Dataset& dataset, std::string_view header) {
  std::string out(header);
  out += kDatasetColumns;
  out += '\n';
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    out += format_real(dataset[i].x) + "," + format_real(dataset[i].y) + "," +
           (dataset.is_contaminated(i) ? "1" : "0") + "\n";
  }
  return out;
}

Dataset parse_dataset_csv(std::string_view text, std::string_view origin) {
  const auto lines = data_lines(text);
  if (lines.empty() || lines.front().second != kDatasetColumns) {
    throw IoError(std::string(origin) + ": expected header '" + std::string(kDatasetColumns) + "'");
  }
  Dataset out;
  out.reserve(lines.size() - 1);
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto [line_no, line] = lines[k];
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string_view::npos || line.find(',', c2 + 1) != std::string_view::npos) {
      throw IoError(std::string(origin) + ":" + std::to_string(line_no) + ": expected 3 fields");
    }
    const double x = field_real(line.substr(0, c1), origin, line_no);
    const double y = field_real(line.substr(c1 + 1, c2 - c1 - 1), origin, line_no);
    const std::string_view flag = line.substr(c2 + 1);
    if (flag != "0" && flag != "1") {
      throw IoError(std::string(origin) + ":" + std::to_string(line_no) +
                    ": is_contaminated must be 0 or 1");
    }
    out.add({x, y}, flag == "1");
  }
  return out;
}

void write_dataset_csv(const std::filesystem::path& path, const Dataset& dataset,
                       std::string_view header) {
  write_text_file(path, dataset_csv(dataset, header));
}

Dataset read_dataset_csv(const std::filesystem::path& path) {
  return parse_dataset_csv(read_text_file(path), path.string());
}

std::string weights_text(const FitResult& fit, std::string_view header) {
  std::string out(header);
  out += "# scale.center=" + format_real(fit.scale.center) + "\n";
  out += "# scale.half_width=" + format_real(fit.scale.half_width) + "\n";
  out += "# iterations_run=" + std::to_string(fit.trace.iterations_run) + "\n";
  out += std::string("# converged=") + (fit.trace.converged ? "true" : "false") + "\n";
  for (double c : fit.weights.coeffs) out += format_real(c) + "\n";
  return out;
}

std::pair<WeightVector, ScaleParams> parse_weights_text(std::string_view text) {
  WeightVector w;
  ScaleParams scale;
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      constexpr std::string_view kCenter = "# scale.center=";
      constexpr std::string_view kHalf = "# scale.half_width=";
      if (line.starts_with(kCenter)) scale.center = field_real(line.substr(kCenter.size()), "weights", line_no);
      if (line.starts_with(kHalf)) scale.half_width = field_real(line.substr(kHalf.size()), "weights", line_no);
      continue;
    }
    w.coeffs.push_back(field_real(line, "weights", line_no));
  }
  if (w.coeffs.empty()) throw IoError("weights: no coefficients");
  return {w, scale};
}

std::string trace_csv(const TrainTrace& trace, std::string_view header) {
  std::string out(header);
  out += kTraceColumns;
  out += '\n';
  for (std::size_t i = 0; i < trace.iteration_losses.size(); ++i) {
    out += std::to_string(i) + "," + format_real(trace.iteration_losses[i]) + "\n";
  }
  return out;
}

std::string sweep_csv(const SweepTable& table, std::string_view header) {
  std::string out(header);
  out += kSweepColumns;
  out += '\n';
  for (const SweepRow& row : table.rows) {
    const Aggregate& a = row.summary;
    out += format_real(row.value) + "," + format_real(a.naive.mean) + "," +
           format_real(a.naive.std) + "," + format_real(a.trimmed.mean) + "," +
           format_real(a.trimmed.std) + "," + std::to_string(a.naive.count) + "," +
           std::to_string(a.errors) + "\n";
  }
  return out;
}

std::string trials_csv(const std::vector<TrialResult>& trials, std::string_view header) {
  std::string out(header);
  out += kTrialColumns;
  out += '\n';
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const TrialResult& t = trials[i];
    std::string error;
    const auto note = [&](std::string_view arm, const ArmResult& r) {
      if (r.ok()) return;
      if (!error.empty()) error += " | ";
      error += std::string(arm) + ": " + r.error;
    };
    note("naive", t.naive);
    note("trimmed", t.trimmed);
    if (t.trimmed_kernel) note("kernel", *t.trimmed_kernel);
    if (t.trimmed_dbscan) note("dbscan", *t.trimmed_dbscan);
    out += std::to_string(i) + "," + std::to_string(t.seed) + "," +
           arm_mse(t.naive) + "," + arm_mse(t.trimmed) + "," + arm_mse(t.trimmed_kernel) + "," +
           arm_mse(t.trimmed_dbscan) + "," + (t.naive.converged ? "1" : "0") + "," +
           (t.trimmed.converged ? "1" : "0") + "," + csv_safe(error) + "\n";
  }
  return out;
}

}  // namespace mbgdt
