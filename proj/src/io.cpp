#include "dsbeta/io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace dsbeta {

namespace {

std::vector<std::string> split(const std::string &line, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(line);
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string trimmed(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  return s.substr(i);
}

double parse_double(const std::string &s) {
  const std::string t = trimmed(s);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception &) {
    fail(ErrorKind::invalid_input, "cannot parse number '" + t + "'");
  }
  require(used == t.size(), ErrorKind::invalid_input, "cannot parse number '" + t + "'");
  return v;
}

long parse_count(const std::string &s) {
  const double v = parse_double(s);
  require(v >= 1 && v == static_cast<double>(static_cast<long>(v)), ErrorKind::invalid_input,
          "expected a positive integer, got '" + trimmed(s) + "'");
  return static_cast<long>(v);
}

bool next_line(std::istream &is, std::string &line) {
  while (std::getline(is, line)) {
    line = trimmed(line);
    if (!line.empty()) return true;
  }
  return false;
}

std::vector<Matrix> read_matrix_rows(std::istream &is, const std::string &header) {
  const auto dims = split(header, ',');
  require(dims.size() == 2, ErrorKind::invalid_input, "matrix file must start with 'rows,cols'");
  const long rows = parse_count(dims[0]), cols = parse_count(dims[1]);
  std::vector<Matrix> out;
  std::string line;
  while (next_line(is, line)) {
    const auto cells = split(line, ',');
    require(static_cast<long>(cells.size()) == rows * cols, ErrorKind::invalid_input,
            "matrix line has the wrong number of entries");
    Matrix m(rows, cols);
    for (long i = 0; i < rows; ++i) {
      for (long j = 0; j < cols; ++j) m(i, j) = parse_double(cells[i * cols + j]);
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<Vector> read_eig_rows(std::istream &is, const std::string &header) {
  const auto names = split(header, ',');
  for (std::size_t i = 0; i < names.size(); ++i) {
    require(trimmed(names[i]) == "v" + std::to_string(i + 1), ErrorKind::invalid_input,
            "eigenvalue file must start with 'v1,...,vk'");
  }
  std::vector<Vector> out;
  std::string line;
  while (next_line(is, line)) {
    const auto cells = split(line, ',');
    require(cells.size() == names.size(), ErrorKind::invalid_input,
            "eigenvalue line has the wrong number of entries");
    Vector v(static_cast<Eigen::Index>(cells.size()));
    for (std::size_t i = 0; i < cells.size(); ++i) v(static_cast<Eigen::Index>(i)) = parse_double(cells[i]);
    out.push_back(std::move(v));
  }
  return out;
}

void write_row(std::ostream &os, const double *data, Eigen::Index count) {
  for (Eigen::Index i = 0; i < count; ++i) {
    if (i) os << ',';
    os << format_double(data[i]);
  }
  os << '\n';
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_matrix_csv(std::ostream &os, const std::vector<Matrix> &draws) {
  require(!draws.empty(), ErrorKind::invalid_input, "nothing to write");
  const Eigen::Index rows = draws.front().rows(), cols = draws.front().cols();
  os << rows << ',' << cols << '\n';
  for (const Matrix &m : draws) {
    require(m.rows() == rows && m.cols() == cols, ErrorKind::invalid_dims,
            "all matrices in a file must share one shape");
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = m;
    write_row(os, rm.data(), rm.size());
  }
}

std::vector<Matrix> read_matrix_csv(std::istream &is) {
  std::string header;
  require(next_line(is, header), ErrorKind::invalid_input, "empty matrix file");
  return read_matrix_rows(is, header);
}

void write_eigs_csv(std::ostream &os, const std::vector<Vector> &rows) {
  require(!rows.empty(), ErrorKind::invalid_input, "nothing to write");
  const Eigen::Index k = rows.front().size();
  for (Eigen::Index i = 0; i < k; ++i) os << (i ? ",v" : "v") << i + 1;
  os << '\n';
  for (const Vector &v : rows) {
    require(v.size() == k, ErrorKind::invalid_dims, "all rows must have the same length");
    write_row(os, v.data(), v.size());
  }
}

std::vector<Vector> read_eigs_csv(std::istream &is) {
  std::string header;
  require(next_line(is, header), ErrorKind::invalid_input, "empty eigenvalue file");
  return read_eig_rows(is, header);
}

nlohmann::ordered_json matrices_to_json(const std::vector<Matrix> &draws) {
  require(!draws.empty(), ErrorKind::invalid_input, "nothing to write");
  nlohmann::ordered_json j;
  j["rows"] = draws.front().rows();
  j["cols"] = draws.front().cols();
  auto &arr = j["draws"] = nlohmann::ordered_json::array();
  for (const Matrix &m : draws) {
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index k = 0; k < m.cols(); ++k) flat.push_back(m(i, k));
    }
    arr.push_back(flat);
  }
  return j;
}

std::vector<Matrix> matrices_from_json(const nlohmann::json &j) {
  try {
    const long rows = j.at("rows").get<long>(), cols = j.at("cols").get<long>();
    require(rows > 0 && cols > 0, ErrorKind::invalid_input, "rows and cols must be positive");
    std::vector<Matrix> out;
    for (const auto &d : j.at("draws")) {
      const auto flat = d.get<std::vector<double>>();
      require(static_cast<long>(flat.size()) == rows * cols, ErrorKind::invalid_input,
              "matrix entry has the wrong number of values");
      Matrix m(rows, cols);
      for (long i = 0; i < rows; ++i) {
        for (long k = 0; k < cols; ++k) m(i, k) = flat[static_cast<std::size_t>(i * cols + k)];
      }
      out.push_back(std::move(m));
    }
    return out;
  } catch (const nlohmann::json::exception &e) {
    fail(ErrorKind::invalid_input, std::string("malformed matrix JSON: ") + e.what());
  }
}

nlohmann::ordered_json eigs_to_json(const std::vector<Vector> &rows) {
  require(!rows.empty(), ErrorKind::invalid_input, "nothing to write");
  nlohmann::ordered_json j;
  j["k"] = rows.front().size();
  auto &arr = j["eigs"] = nlohmann::ordered_json::array();
  for (const Vector &v : rows) arr.push_back(std::vector<double>(v.data(), v.data() + v.size()));
  return j;
}

std::vector<Vector> eigs_from_json(const nlohmann::json &j) {
  try {
    std::vector<Vector> out;
    for (const auto &row : j.at("eigs")) {
      const auto vals = row.get<std::vector<double>>();
      out.push_back(Eigen::Map<const Vector>(vals.data(), static_cast<Eigen::Index>(vals.size())));
    }
    return out;
  } catch (const nlohmann::json::exception &e) {
    fail(ErrorKind::invalid_input, std::string("malformed eigenvalue JSON: ") + e.what());
  }
}

Table read_table(std::istream &is) {
  std::stringstream buf;
  buf << is.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  require(first != std::string::npos, ErrorKind::invalid_input, "input is empty");
  if (text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &e) {
      fail(ErrorKind::invalid_input, std::string("malformed JSON input: ") + e.what());
    }
    if (j.contains("eigs")) return {TableKind::eigs, {}, eigs_from_json(j)};
    return {TableKind::matrices, matrices_from_json(j), {}};
  }
  std::istringstream in(text);
  std::string header;
  next_line(in, header);
  if (header[0] == 'v') return {TableKind::eigs, {}, read_eig_rows(in, header)};
  return {TableKind::matrices, read_matrix_rows(in, header), {}};
}

nlohmann::ordered_json to_json(const AuditReport &report) {
  nlohmann::ordered_json j;
  j["family"] = std::string(to_string(report.family));
  j["dims"] = {{"m", report.m}, {"n", report.n}, {"r", report.r}, {"r_xi", report.r}};
  j["convention"] = std::string(to_string(report.convention));
  if (report.numeric_mass) j["numeric_mass"] = *report.numeric_mass;
  if (report.constant_ratio) j["constant_ratio"] = *report.constant_ratio;
  j["converged"] = report.converged;
  j["divergence_flag"] = report.divergence_flag;
  return j;
}

nlohmann::ordered_json to_json(const McReport &report) {
  nlohmann::ordered_json j;
  j["family"] = report.family;
  j["dims"] = {{"m", report.m}, {"n", report.n}, {"r", report.r}, {"r_xi", report.r_xi}};
  if (report.convention) j["convention"] = std::string(to_string(*report.convention));
  j["statistic"] = report.statistic;
  j["seed"] = report.seed;
  j["n_samples"] = report.n_samples;
  j["ks_distance"] = report.ks_distance;
  j["p_value_bound"] = report.p_value_bound;
  return j;
}

void write_reports_csv(std::ostream &os, const std::vector<nlohmann::ordered_json> &reports) {
  static const char *const kColumns[] = {
      "family",     "m",           "n",          "r",         "r_xi",
      "convention", "statistic",   "seed",       "n_samples", "ks_distance",
      "p_value_bound", "numeric_mass", "constant_ratio", "converged", "divergence_flag"};
  auto lookup = [](const nlohmann::ordered_json &rep, const std::string &key) {
    if (rep.contains(key)) return rep[key];
    if (rep.contains("dims") && rep["dims"].contains(key)) return rep["dims"][key];
    return nlohmann::ordered_json();
  };
  std::vector<std::string> columns;
  for (const char *c : kColumns) {
    for (const auto &rep : reports) {
      if (!lookup(rep, c).is_null()) {
        columns.emplace_back(c);
        break;
      }
    }
  }
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
  for (const auto &rep : reports) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      const auto v = lookup(rep, columns[i]);
      if (i) os << ',';
      if (v.is_string()) {
        os << v.get<std::string>();
      } else if (v.is_number_float()) {
        os << format_double(v.get<double>());
      } else if (!v.is_null()) {
        os << v.dump();
      }
    }
    os << '\n';
  }
}

}  // namespace dsbeta
