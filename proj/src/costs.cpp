#include "seisdiag/costs.hpp"
#include "seisdiag/errors.hpp"
#include "seisdiag/util.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace seisdiag {

void ClassCatalog::validate() const {
  if (classes.size() < 2) raise(ErrorKind::ClassError, "catalog needs at least 2 classes");
  if (!present_in_training.empty() && present_in_training.size() != classes.size())
    raise(ErrorKind::ClassError, "presence flags do not match class count");
  std::set<std::string> seen(classes.begin(), classes.end());
  if (seen.size() != classes.size()) raise(ErrorKind::ClassError, "duplicate class labels");
}

std::size_t ClassCatalog::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < classes.size(); ++i)
    if (classes[i] == label) return i;
  raise(ErrorKind::ClassError, "unknown class label '" + label + "'");
}

double ScoreMatrix::total_mass() const {
  double sum = 0.0;
  for (double v : cells) sum += v;
  return sum;
}

double ScoreMatrix::diagonal_mass() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < catalog.size(); ++i) sum += at(i, i);
  return sum;
}

double ScoreMatrix::underestimation_mass() const {
  double sum = 0.0;
  for (std::size_t m = 0; m < catalog.size(); ++m)
    for (std::size_t n = 0; n < m; ++n) sum += at(m, n);
  return sum;
}

double ScoreMatrix::conservative_mass() const {
  double sum = 0.0;
  for (std::size_t m = 0; m < catalog.size(); ++m)
    for (std::size_t n = m + 1; n < catalog.size(); ++n) sum += at(m, n);
  return sum;
}

ScoreMatrix& ScoreMatrix::operator+=(const ScoreMatrix& other) {
  if (other.cells.size() != cells.size())
    raise(ErrorKind::ClassError, "score matrix dimension mismatch in accumulation");
  for (std::size_t i = 0; i < cells.size(); ++i) cells[i] += other.cells[i];
  return *this;
}

ScoreMatrix score_matrix(const std::vector<std::size_t>& truths,
                         const std::vector<std::size_t>& preds,
                         const std::vector<double>& probs,
                         const ClassCatalog& catalog) {
  catalog.validate();
  if (truths.size() != preds.size() || truths.size() != probs.size())
    raise(ErrorKind::ClassError, "truths, preds and probs must have equal length");
  const std::size_t p = catalog.size();
  ScoreMatrix m;
  m.catalog = catalog;
  m.cells.assign(p * p, 0.0);
  for (std::size_t r = 0; r < truths.size(); ++r) {
    if (truths[r] >= p || preds[r] >= p)
      raise(ErrorKind::ClassError, "class index out of range at observation " + std::to_string(r));
    if (!(probs[r] > 0.0))
      raise(ErrorKind::ClassError, "occurrence probability must be > 0 at observation " +
                                       std::to_string(r));
    m.at(truths[r], preds[r]) += probs[r];
  }
  return m;
}

void CostWeights::validate() const {
  if (!(w1 > 0.0)) raise(ErrorKind::InvalidInput, "w1 must be > 0");
  if (w2 < 0.0 || w3 < 0.0) raise(ErrorKind::InvalidInput, "w2 and w3 must be >= 0");
}

PenaltyConfig PenaltyConfig::for_catalog(const ClassCatalog& catalog, double omega_absent) {
  PenaltyConfig pen;
  pen.omega.assign(catalog.size(), 1.0);
  if (!catalog.present_in_training.empty()) {
    for (std::size_t i = 0; i < catalog.size(); ++i)
      if (!catalog.present_in_training[i]) pen.omega[i] = omega_absent;
  }
  return pen;
}

double cost(const ScoreMatrix& matrix, const CostWeights& weights, const PenaltyConfig& penalty) {
  weights.validate();
  const std::size_t p = matrix.catalog.size();
  if (matrix.cells.size() != p * p)
    raise(ErrorKind::ClassError, "score matrix cell count does not match catalog");
  if (!penalty.omega.empty() && penalty.omega.size() != p)
    raise(ErrorKind::ClassError, "omega size does not match catalog");

  double diag = 0.0, under = 0.0, conservative = 0.0;
  for (std::size_t m = 0; m < p; ++m) {
    diag += matrix.at(m, m);
    for (std::size_t n = 0; n < m; ++n)
      under += penalty.omega_at(n) * penalty.lambda(m, n) * matrix.at(m, n);
    for (std::size_t n = m + 1; n < p; ++n)
      conservative += penalty.omega_at(n) * penalty.lambda(m, n) * matrix.at(m, n);
  }
  return -weights.w1 * diag + weights.w2 * under + weights.w3 * conservative;
}

ConfusionReport report(const ScoreMatrix& matrix) {
  const std::size_t p = matrix.catalog.size();
  double total = matrix.total_mass();
  if (!(total > 0.0)) raise(ErrorKind::EmptyReport, "score matrix has zero total mass");

  ConfusionReport rep;
  rep.matrix = matrix;
  rep.row_percent.assign(p * p, 0.0);
  for (std::size_t i = 0; i < p; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < p; ++j) row_sum += matrix.at(i, j);
    if (row_sum > 0.0)
      for (std::size_t j = 0; j < p; ++j)
        rep.row_percent[i * p + j] = matrix.at(i, j) / row_sum * 100.0;
  }
  rep.global_accuracy_percent = matrix.diagonal_mass() / total * 100.0;
  rep.underestimation_mass = matrix.underestimation_mass();
  rep.conservative_mass = matrix.conservative_mass();
  rep.underestimation_within_conservative = rep.underestimation_mass <= rep.conservative_mass;
  return rep;
}

namespace {
std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}
} // namespace

std::string ConfusionReport::render_text() const {
  const std::size_t p = matrix.catalog.size();
  char buf[64];

  std::vector<std::vector<std::string>> raw(p), pct(p);
  std::size_t width = 5;
  for (std::size_t i = 0; i < p; ++i) {
    width = std::max(width, matrix.catalog.classes[i].size());
    for (std::size_t j = 0; j < p; ++j) {
      std::snprintf(buf, sizeof(buf), "%.2f", matrix.at(i, j));
      raw[i].push_back(buf);
      pct[i].push_back(format_percent(row_percent[i * p + j]) + "%");
      width = std::max({width, raw[i].back().size(), pct[i].back().size()});
    }
  }
  width += 2;

  std::ostringstream out;
  out << pad_left("truth\\pred", width + 2);
  for (std::size_t j = 0; j < p; ++j) out << pad_left(matrix.catalog.classes[j], width);
  out << '\n';
  for (std::size_t i = 0; i < p; ++i) {
    out << pad_left(matrix.catalog.classes[i], width + 2);
    for (std::size_t j = 0; j < p; ++j) out << pad_left(raw[i][j], width);
    out << '\n';
    out << pad_left("", width + 2);
    for (std::size_t j = 0; j < p; ++j) out << pad_left(pct[i][j], width);
    out << '\n';
  }
  out << "GA = " << format_percent(global_accuracy_percent) << "%\n";
  out << "underestimation mass = " << format_double(underestimation_mass)
      << ", conservative mass = " << format_double(conservative_mass)
      << (underestimation_within_conservative ? " (underestimation <= conservative)"
                                              : " (underestimation exceeds conservative)")
      << '\n';
  return out.str();
}

std::string ConfusionReport::to_csv(const std::string& provenance) const {
  return score_matrix_to_csv(matrix, provenance);
}

std::string score_matrix_to_csv(const ScoreMatrix& matrix, const std::string& provenance) {
  const std::size_t p = matrix.catalog.size();
  std::ostringstream out;
  if (!provenance.empty()) out << "# " << provenance << '\n';
  out << "class";
  for (std::size_t j = 0; j < p; ++j) out << ',' << matrix.catalog.classes[j];
  out << '\n';
  for (std::size_t i = 0; i < p; ++i) {
    out << matrix.catalog.classes[i];
    for (std::size_t j = 0; j < p; ++j) out << ',' << format_double(matrix.at(i, j));
    out << '\n';
  }
  return out.str();
}

ScoreMatrix score_matrix_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    rows.push_back(std::move(fields));
  }
  if (rows.size() < 3) raise(ErrorKind::ParseError, "score matrix CSV needs a header and 2+ rows");
  const auto& header = rows.front();
  if (header.empty() || header[0] != "class")
    raise(ErrorKind::ParseError, "score matrix CSV header must start with 'class'");
  const std::size_t p = header.size() - 1;
  if (rows.size() - 1 != p)
    raise(ErrorKind::ParseError, "score matrix is not square: " + std::to_string(p) +
                                     " columns vs " + std::to_string(rows.size() - 1) + " rows");

  ScoreMatrix m;
  m.catalog.classes.assign(header.begin() + 1, header.end());
  m.catalog.validate();
  m.cells.assign(p * p, 0.0);
  for (std::size_t i = 0; i < p; ++i) {
    const auto& row = rows[i + 1];
    if (row.size() != p + 1)
      raise(ErrorKind::ParseError, "row " + std::to_string(i) + " has wrong field count");
    if (row[0] != m.catalog.classes[i])
      raise(ErrorKind::ParseError, "row label '" + row[0] + "' does not match header order");
    for (std::size_t j = 0; j < p; ++j) {
      try {
        m.at(i, j) = std::stod(row[j + 1]);
      } catch (const std::exception&) {
        raise(ErrorKind::ParseError, "bad number '" + row[j + 1] + "' in score matrix");
      }
      if (!(m.at(i, j) >= 0.0) || !std::isfinite(m.at(i, j)))
        raise(ErrorKind::ParseError, "score values must be finite and >= 0");
    }
  }
  return m;
}

} // namespace seisdiag
