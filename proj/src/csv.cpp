#include "npivq/csv.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "npivq/errors.hpp"

namespace npivq {

namespace {

std::string strip(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_number(const std::string& tok, int line, const char* col) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("trailing");
    if (!std::isfinite(v))
      throw InvalidInputError("csv line " + std::to_string(line) + ": non-finite " + col +
                              " value '" + tok + "'");
    return v;
  } catch (const InvalidInputError&) {
    throw;
  } catch (const std::exception&) {
    throw InvalidInputError("csv line " + std::to_string(line) + ": cannot parse " + col +
                            " value '" + tok + "'");
  }
}

RescaleMap fit_map(const std::vector<double>& v, const char* col) {
  double lo = v.front(), hi = v.front();
  for (double t : v) {
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  if (hi == lo)
    throw InvalidInputError(std::string("csv: column ") + col +
                            " is constant; min-max rescaling undefined");
  return RescaleMap{lo, hi - lo};
}

}  // namespace

DataSet read_data_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("csv: cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw InvalidInputError("csv: empty file " + path);
  std::string header = strip(line);
  if (!header.empty() && header.front() == '\xEF') header = strip(header.substr(3));  // BOM
  if (header != "y,x,w")
    throw InvalidInputError("csv: expected header 'y,x,w', got '" + header + "'");

  std::vector<double> ys, xs, ws;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string row = strip(line);
    if (row.empty()) continue;
    std::stringstream ss(row);
    std::string ty, tx, tw, extra;
    if (!std::getline(ss, ty, ',') || !std::getline(ss, tx, ',') || !std::getline(ss, tw, ','))
      throw InvalidInputError("csv line " + std::to_string(lineno) + ": expected 3 fields");
    if (std::getline(ss, extra, ','))
      throw InvalidInputError("csv line " + std::to_string(lineno) + ": expected 3 fields");
    ys.push_back(parse_number(strip(ty), lineno, "y"));
    xs.push_back(parse_number(strip(tx), lineno, "x"));
    ws.push_back(parse_number(strip(tw), lineno, "w"));
  }
  if (ys.size() < 4) throw InvalidInputError("csv: need at least 4 data rows");

  DataSet out;
  out.x_map = fit_map(xs, "x");
  out.w_map = fit_map(ws, "w");
  const Eigen::Index n = static_cast<Eigen::Index>(ys.size());
  out.sample.y.resize(n);
  out.sample.x.resize(n);
  out.sample.w.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.sample.y[i] = ys[static_cast<std::size_t>(i)];
    out.sample.x[i] = (xs[static_cast<std::size_t>(i)] - out.x_map.offset) / out.x_map.scale;
    out.sample.w[i] = (ws[static_cast<std::size_t>(i)] - out.w_map.offset) / out.w_map.scale;
  }
  out.sample.validate();
  return out;
}

}  // namespace npivq
