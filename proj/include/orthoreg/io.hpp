#ifndef ORTHOREG_IO_HPP
#define ORTHOREG_IO_HPP

// Matrix and vector files.
//
//  CSV:   one matrix row per line, comma-separated, '.' radix.
//  Plain: a first line holding N, then N lines of N whitespace-separated values.
//
// Vectors use the same formats with one column (CSV) or N values after the
// header (plain). Values are written with 17 significant digits, so a
// write/read cycle reproduces every double exactly.

#include <iosfwd>
#include <string>

#include "orthoreg/linalg.hpp"

namespace orthoreg {

enum class MatrixFormat { csv, plain };

/// csv for a ".csv" extension, plain otherwise.
MatrixFormat format_for_path(const std::string& path);

/// Shortest-round-trip-safe decimal ("%.17g").
std::string format_double(double v);

MatrixXd read_matrix(std::istream& in, MatrixFormat format);
MatrixXd read_matrix(const std::string& path);
void write_matrix(std::ostream& out, const MatrixXd& a, MatrixFormat format);
void write_matrix(const std::string& path, const MatrixXd& a);

VectorXd read_vector(std::istream& in, MatrixFormat format);
VectorXd read_vector(const std::string& path);
void write_vector(std::ostream& out, const VectorXd& v, MatrixFormat format);
void write_vector(const std::string& path, const VectorXd& v);

}  // namespace orthoreg

#endif  // ORTHOREG_IO_HPP
