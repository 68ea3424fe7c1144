#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "opdhg/problem.hpp"
#include "opdhg/sparse.hpp"

namespace opdhg {

enum class RowSense { kLe, kEq, kGe };

/// General-form LP as read from an MPS file: sense rows with a single rhs,
/// per-variable bounds that may be infinite, and a dense objective. RANGES
/// rows are already expanded into sense-row pairs by the parser, so this type
/// never carries two-sided rows.
struct GeneralLp {
  std::string name;
  std::vector<std::string> row_names;
  std::vector<std::string> col_names;
  std::vector<RowSense> senses;
  Vector rhs;
  Vector objective;
  double objective_offset = 0.0;
  Vector lower;
  Vector upper;
  std::vector<Triplet> entries;  // duplicates summed, explicit zeros dropped
  std::vector<std::string> warnings;

  Index numRows() const { return static_cast<Index>(row_names.size()); }
  Index numCols() const { return static_cast<Index>(col_names.size()); }
  SparseMatrix matrix() const { return buildSparse(numRows(), numCols(), entries); }
  void validate() const;
};

class MpsParseError : public std::runtime_error {
 public:
  MpsParseError(const std::string& what, int line)
      : std::runtime_error("MPS parse error at line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Parses fixed- or free-format MPS. Names must not contain whitespace.
/// Integer markers are accepted and ignored (continuous relaxation).
GeneralLp parseMps(std::istream& in);

/// Reads a .mps or gzip-compressed .mps.gz file and parses it.
GeneralLp readMpsFile(const std::string& path);

/// Serializes to free-format MPS; parseMps(writeMps(lp)) reproduces lp.
std::string writeMps(const GeneralLp& lp);

}  // namespace opdhg
