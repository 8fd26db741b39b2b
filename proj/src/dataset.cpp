#include "robust_cluster/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "robust_cluster/baselines.hpp"
#include "robust_cluster/error.hpp"

namespace robust_cluster {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, delim)) out.push_back(trim(field));
  if (!line.empty() && line.back() == delim) out.emplace_back();
  return out;
}

std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return in;
}

}  // namespace

CsvDataset read_csv(const std::filesystem::path& path, const CsvOptions& options) {
  auto in = open(path);
  std::string line;
  std::size_t lineno = 0;
  std::size_t width = 0;
  std::vector<double> data;
  std::vector<std::size_t> features;
  std::vector<int> truth;
  std::map<std::string, int> category_id;
  std::vector<std::string> categories;
  std::size_t rows = 0;
  bool first = true;

  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split(line, options.delimiter);
    if (first) {
      width = fields.size();
      if (options.label_column && *options.label_column >= width)
        throw ParseError("label column " + std::to_string(*options.label_column) +
                             " beyond the " + std::to_string(width) + " columns",
                         lineno);
      for (std::size_t c = 0; c < width; ++c)
        if (!options.label_column || c != *options.label_column) features.push_back(c);
      if (features.empty()) throw ParseError("no feature columns", lineno);
      bool header = false;
      if (options.has_header) {
        header = *options.has_header;
      } else {
        for (std::size_t c : features)
          if (!parse_number(fields[c])) header = true;
      }
      first = false;
      if (header) continue;
    }
    if (fields.size() != width)
      throw ParseError("expected " + std::to_string(width) + " fields, found " +
                           std::to_string(fields.size()),
                       lineno);
    for (std::size_t c : features) {
      const auto v = parse_number(fields[c]);
      if (!v) throw ParseError("column " + std::to_string(c) + ": '" + fields[c] +
                                   "' is not a finite number",
                               lineno);
      data.push_back(*v);
    }
    if (options.label_column) {
      const std::string& cat = fields[*options.label_column];
      if (cat.empty()) throw ParseError("empty label", lineno);
      auto [it, inserted] = category_id.emplace(cat, static_cast<int>(categories.size()) + 1);
      if (inserted) categories.push_back(cat);
      truth.push_back(it->second);
    }
    ++rows;
  }
  if (rows == 0) throw ParseError("no data rows in " + path.string());

  CsvDataset ds{PointSet(rows, features.size(), std::move(data)), std::nullopt, categories, path,
                features, std::vector<bool>(rows, true)};
  if (options.label_column)
    ds.truth = LabelVector(std::move(truth), static_cast<int>(categories.size()));
  return ds;
}

CentroidSet read_centroids_csv(const std::filesystem::path& path) {
  CsvOptions opt;
  opt.has_header = false;
  const auto ds = read_csv(path, opt);
  return CentroidSet(ds.points.size(), ds.points.dim(), ds.points.data());
}

PointSet standardize(const PointSet& points) {
  const std::size_t n = points.size();
  const std::size_t d = points.dim();
  std::vector<double> mean(d, 0.0), sd(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) mean[j] += points.row(i)[j];
  for (double& m : mean) m /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) sd[j] += std::pow(points.row(i)[j] - mean[j], 2);
  for (double& s : sd) s = n > 1 ? std::sqrt(s / static_cast<double>(n - 1)) : 0.0;
  std::vector<double> out(points.data());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      double& v = out[i * d + j];
      v -= mean[j];
      if (sd[j] > 0.0) v /= sd[j];
    }
  return PointSet(n, d, std::move(out));
}

LetterRows read_letters(const std::filesystem::path& path) {
  auto in = open(path);
  LetterRows rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 17)
      throw ParseError("expected LETTER followed by 16 integers, found " +
                           std::to_string(fields.size()) + " fields",
                       lineno);
    if (fields[0].size() != 1 || fields[0][0] < 'A' || fields[0][0] > 'Z')
      throw ParseError("first field must be a capital letter, got '" + fields[0] + "'", lineno);
    std::vector<double> f(16);
    for (std::size_t c = 1; c < 17; ++c) {
      int v = 0;
      const char* end = fields[c].data() + fields[c].size();
      auto [ptr, ec] = std::from_chars(fields[c].data(), end, v);
      if (ec != std::errc() || ptr != end)
        throw ParseError("attribute " + std::to_string(c) + " is not an integer: '" + fields[c] +
                             "'",
                         lineno);
      f[c - 1] = v;
    }
    rows.letter.push_back(fields[0][0]);
    rows.features.push_back(std::move(f));
  }
  if (rows.letter.empty()) throw ParseError("no rows in " + path.string());
  return rows;
}

CsvDataset sample_letters(const LetterRows& rows, const std::vector<char>& classes,
                          std::size_t per_class, std::optional<char> outlier_class,
                          std::size_t outlier_count, Rng& rng) {
  detail::require(!classes.empty(), "at least one letter class is required");
  detail::require(per_class >= 1, "per_class must be >= 1");
  auto rows_of = [&](char c) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < rows.letter.size(); ++i)
      if (rows.letter[i] == c) idx.push_back(i);
    return idx;
  };
  auto draw = [&](char c, std::size_t count) {
    const auto idx = rows_of(c);
    if (idx.size() < count)
      throw ContractViolation(std::string("class ") + c + " has " + std::to_string(idx.size()) +
                              " rows, fewer than the " + std::to_string(count) + " requested");
    std::vector<std::size_t> picked;
    for (std::size_t p : random_indices(idx.size(), count, rng)) picked.push_back(idx[p]);
    return picked;
  };

  std::vector<std::vector<double>> feats;
  std::vector<int> truth;
  std::vector<std::string> categories;
  for (std::size_t g = 0; g < classes.size(); ++g) {
    categories.emplace_back(1, classes[g]);
    for (std::size_t i : draw(classes[g], per_class)) {
      feats.push_back(rows.features[i]);
      truth.push_back(static_cast<int>(g) + 1);
    }
  }
  const std::size_t clean = feats.size();
  if (outlier_class && outlier_count > 0) {
    for (std::size_t i : draw(*outlier_class, outlier_count)) {
      feats.push_back(rows.features[i]);
      truth.push_back(0);
    }
  }
  std::vector<bool> mask(feats.size(), false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(clean), true);
  std::vector<std::size_t> columns(16);
  for (std::size_t c = 0; c < 16; ++c) columns[c] = c + 1;
  return {PointSet::from_rows(feats),
          LabelVector(std::move(truth), static_cast<int>(classes.size()), true),
          std::move(categories),
          {},
          std::move(columns),
          std::move(mask)};
}

CsvDataset ingest_letters(const std::filesystem::path& path, const std::vector<char>& classes,
                          std::size_t per_class, std::optional<char> outlier_class,
                          std::size_t outlier_count, std::uint64_t seed) {
  detail::require(per_class >= 1, "per_class must be >= 1");
  const LetterRows rows = read_letters(path);
  Rng rng(seed);
  CsvDataset ds = sample_letters(rows, classes, per_class, outlier_class, outlier_count, rng);
  ds.source = path;
  return ds;
}

}  // namespace robust_cluster
