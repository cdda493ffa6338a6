#include "orthoreg/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace orthoreg {

namespace {

class ParseError : public DomainError {
 public:
  using DomainError::DomainError;
};

double parse_double(std::string_view token, std::size_t line) {
  while (!token.empty() && (token.front() == ' ' || token.front() == '\t')) token.remove_prefix(1);
  while (!token.empty() && (token.back() == ' ' || token.back() == '\t' || token.back() == '\r')) {
    token.remove_suffix(1);
  }
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(v)) {
    throw ParseError("line " + std::to_string(line) + ": invalid number '" + std::string(token) + "'");
  }
  return v;
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

std::vector<std::vector<double>> read_csv_rows(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    std::vector<double> row;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      row.push_back(parse_double(std::string_view(line).substr(start, comma - start), lineno));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<double> read_plain_values(std::istream& in, long& header) {
  std::string line;
  std::size_t lineno = 0;
  header = -1;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      if (header < 0) {
        const double h = parse_double(tok, lineno);
        if (h < 1 || h != static_cast<double>(static_cast<long>(h))) {
          throw ParseError("line " + std::to_string(lineno) + ": header must be a positive integer");
        }
        header = static_cast<long>(h);
      } else {
        values.push_back(parse_double(tok, lineno));
      }
    }
  }
  if (header < 0) throw ParseError("empty input: missing N header");
  return values;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

MatrixFormat format_for_path(const std::string& path) {
  const auto dot = path.rfind('.');
  if (dot != std::string::npos && path.substr(dot) == ".csv") return MatrixFormat::csv;
  return MatrixFormat::plain;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

MatrixXd read_matrix(std::istream& in, MatrixFormat format) {
  if (format == MatrixFormat::csv) {
    const auto rows = read_csv_rows(in);
    if (rows.empty()) throw ParseError("empty matrix file");
    const auto cols = rows.front().size();
    MatrixXd a(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) {
        throw DimensionError("matrix row " + std::to_string(i + 1) + " has " +
                             std::to_string(rows[i].size()) + " entries, expected " +
                             std::to_string(cols));
      }
      for (std::size_t j = 0; j < cols; ++j) {
        a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
      }
    }
    return a;
  }
  long n = 0;
  const auto values = read_plain_values(in, n);
  if (values.size() != static_cast<std::size_t>(n * n)) {
    throw DimensionError("plain matrix: header says N = " + std::to_string(n) + " but found " +
                         std::to_string(values.size()) + " values");
  }
  MatrixXd a(n, n);
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) a(i, j) = values[static_cast<std::size_t>(i * n + j)];
  }
  return a;
}

MatrixXd read_matrix(const std::string& path) {
  auto in = open_in(path);
  return read_matrix(in, format_for_path(path));
}

void write_matrix(std::ostream& out, const MatrixXd& a, MatrixFormat format) {
  if (format == MatrixFormat::plain) out << a.rows() << '\n';
  const char sep = format == MatrixFormat::csv ? ',' : ' ';
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (j > 0) out << sep;
      out << format_double(a(i, j));
    }
    out << '\n';
  }
}

void write_matrix(const std::string& path, const MatrixXd& a) {
  auto out = open_out(path);
  write_matrix(out, a, format_for_path(path));
}

VectorXd read_vector(std::istream& in, MatrixFormat format) {
  if (format == MatrixFormat::csv) {
    const auto rows = read_csv_rows(in);
    std::vector<double> flat;
    for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
    if (flat.empty()) throw ParseError("empty vector file");
    if (rows.size() != 1 && flat.size() != rows.size()) {
      throw DimensionError("vector CSV must be a single row or a single column");
    }
    return Eigen::Map<const VectorXd>(flat.data(), static_cast<Eigen::Index>(flat.size()));
  }
  long n = 0;
  const auto values = read_plain_values(in, n);
  if (values.size() != static_cast<std::size_t>(n)) {
    throw DimensionError("plain vector: header says N = " + std::to_string(n) + " but found " +
                         std::to_string(values.size()) + " values");
  }
  return Eigen::Map<const VectorXd>(values.data(), n);
}

VectorXd read_vector(const std::string& path) {
  auto in = open_in(path);
  return read_vector(in, format_for_path(path));
}

void write_vector(std::ostream& out, const VectorXd& v, MatrixFormat format) {
  if (format == MatrixFormat::plain) out << v.size() << '\n';
  for (Eigen::Index i = 0; i < v.size(); ++i) out << format_double(v(i)) << '\n';
}

void write_vector(const std::string& path, const VectorXd& v) {
  auto out = open_out(path);
  write_vector(out, v, format_for_path(path));
}

}  // namespace orthoreg
