#include "sigma/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace sigma::io {

namespace {

void reject(const std::string& msg) { throw std::invalid_argument(msg); }

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    // trim surrounding whitespace
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? std::string()
                                           : cell.substr(b, e - b + 1));
  }
  return cells;
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  std::size_t pos = 0;
  try {
    out = std::stod(s, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == s.size();
}

RandomVector assemble(std::vector<double> weights,
                      std::vector<std::vector<double>> rows) {
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  if (n == 0) reject("dataset: no rows");
  const Eigen::Index d = static_cast<Eigen::Index>(rows.front().size());
  Eigen::MatrixXd values(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      values(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];

  if (weights.empty()) return {FiniteSpace::uniform(n), std::move(values)};

  Eigen::VectorXd w =
      Eigen::Map<Eigen::VectorXd>(weights.data(), static_cast<Eigen::Index>(weights.size()));
  if ((w.array() <= 0.0).any()) reject("dataset: non-positive weight");
  const double sum = w.sum();
  if (std::abs(sum - 1.0) > 1e-12) w /= sum;  // raw weights are relative masses
  return {FiniteSpace(w), std::move(values)};
}

}  // namespace

RandomVector ingest_csv(std::istream& in) {
  std::string line;
  std::vector<std::vector<double>> rows;
  std::vector<double> weights;
  Eigen::Index weight_col = -1;
  Eigen::Index width = -1;
  bool header_checked = false;
  std::size_t lineno = 0;

  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cells = split_csv_line(line);
    if (!header_checked) {
      header_checked = true;
      double probe;
      if (!parse_number(cells[0], probe)) {
        // header row: locate the optional weight column by name
        width = static_cast<Eigen::Index>(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c) {
          std::string name = cells[c];
          std::transform(name.begin(), name.end(), name.begin(),
                         [](unsigned char ch) { return std::tolower(ch); });
          if (name == "w" || name == "weight") {
            if (weight_col >= 0) reject("csv: multiple weight columns");
            weight_col = static_cast<Eigen::Index>(c);
          }
        }
        continue;
      }
    }
    if (width < 0) width = static_cast<Eigen::Index>(cells.size());
    if (static_cast<Eigen::Index>(cells.size()) != width)
      reject("csv: ragged row " + std::to_string(lineno));
    std::vector<double> row;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      double v;
      if (!parse_number(cells[c], v) || !std::isfinite(v))
        reject("csv: bad value in row " + std::to_string(lineno));
      if (static_cast<Eigen::Index>(c) == weight_col)
        weights.push_back(v);
      else
        row.push_back(v);
    }
    if (row.empty()) reject("csv: row " + std::to_string(lineno) + " has no values");
    rows.push_back(std::move(row));
  }
  return assemble(std::move(weights), std::move(rows));
}

RandomVector ingest_json(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    reject(std::string("json: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("values"))
    reject("json: expected an object with a 'values' array");

  std::vector<std::vector<double>> rows;
  std::size_t idx = 0;
  for (const auto& row : doc["values"]) {
    std::vector<double> r;
    if (row.is_array()) {
      for (const auto& x : row) {
        if (!x.is_number()) reject("json: bad value in row " + std::to_string(idx));
        r.push_back(x.get<double>());
      }
    } else if (row.is_number()) {
      r.push_back(row.get<double>());
    } else {
      reject("json: bad value in row " + std::to_string(idx));
    }
    for (double v : r)
      if (!std::isfinite(v)) reject("json: non-finite value in row " + std::to_string(idx));
    if (!rows.empty() && r.size() != rows.front().size())
      reject("json: ragged row " + std::to_string(idx));
    rows.push_back(std::move(r));
    ++idx;
  }

  std::vector<double> weights;
  if (doc.contains("weights")) {
    for (const auto& w : doc["weights"]) {
      if (!w.is_number()) reject("json: bad weight");
      weights.push_back(w.get<double>());
    }
    if (weights.size() != rows.size())
      reject("json: weights/values length mismatch");
  }
  return assemble(std::move(weights), std::move(rows));
}

RandomVector load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) reject("cannot open '" + path + "'");
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
    return ingest_json(in);
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv")
    return ingest_csv(in);
  const int first = in.peek();
  return first == '{' ? ingest_json(in) : ingest_csv(in);
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string vector_json(const Eigen::VectorXd& v) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_double(v(i));
  }
  return out + "]";
}

std::string matrix_rows_json(const Eigen::MatrixXd& m) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (i) out += ", ";
    out += vector_json(m.row(i).transpose());
  }
  return out + "]";
}

}  // namespace

std::string dataset_json(const RandomVector& v) {
  std::string out = "{\n";
  out += "  \"weights\": " + vector_json(v.space().weights()) + ",\n";
  out += "  \"values\": " + matrix_rows_json(v.values()) + "\n";
  return out + "}\n";
}

std::string certificate_json(const DualityCertificate& cert) {
  std::string out = "{\n";
  out += "  \"dual_value\": " + format_double(cert.dual_value) + ",\n";
  out += "  \"pairing\": " + format_double(cert.pairing) + ",\n";
  out += "  \"upper\": " + format_double(cert.upper) + ",\n";
  out += "  \"gap\": " + format_double(cert.gap) + ",\n";
  out += "  \"approximation_bound\": " + format_double(cert.approximation_bound) + ",\n";
  out += "  \"envelope\": " + vector_json(cert.envelope.values().col(0)) + ",\n";
  out += "  \"witness\": " + matrix_rows_json(cert.witness.values()) + "\n";
  return out + "}\n";
}

std::string risk_report_json(const RiskReport& report) {
  std::string out = "{\n";
  out += "  \"rho\": " + format_double(report.rho) + ",\n";
  out += "  \"pointwise_bound\": " + format_double(report.pointwise_bound) + ",\n";
  out += "  \"l1_bound\": " + format_double(report.l1_bound) + ",\n";
  out += "  \"quantile_bound\": " + format_double(report.quantile_bound) + ",\n";
  out += "  \"K\": " + format_double(report.K) + ",\n";
  out += std::string("  \"holds\": ") + (report.holds ? "true" : "false") + "\n";
  return out + "}\n";
}

std::string dominance_json(const DominanceCheck& check) {
  std::string out = "{\n";
  out += std::string("  \"dominates\": ") + (check.dominates ? "true" : "false") + ",\n";
  out += "  \"margin\": " + format_double(check.margin) + "\n";
  return out + "}\n";
}

}  // namespace sigma::io
