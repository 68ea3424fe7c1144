#include "opdhg/mps.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <istream>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace opdhg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream stream(line);
  std::string token;
  while (stream >> token) tokens.push_back(std::move(token));
  return tokens;
}

double parseNumber(std::string token, int line_no) {
  // Old Fortran-style exponents (1.0D+2) appear in some archives.
  for (char& ch : token) {
    if (ch == 'D' || ch == 'd') ch = 'E';
  }
  const char* begin = token.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw MpsParseError("cannot parse numeric value '" + token + "'", line_no);
  }
  return value;
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  return s;
}

enum class Section { kNone, kName, kObjsense, kRows, kColumns, kRhs, kRanges, kBounds };

struct ParseState {
  GeneralLp lp;
  std::unordered_map<std::string, Index> row_index;
  std::unordered_map<std::string, Index> col_index;
  std::unordered_set<std::string> ignored_free_rows;
  std::string objective_name;
  std::vector<double> rhs_values;
  std::vector<double> obj_coeffs;
  std::vector<double> lower, upper;
  std::vector<bool> saw_lower;
  std::vector<std::pair<Index, double>> ranges;

  Index column(const std::string& name, int line_no, bool create) {
    auto it = col_index.find(name);
    if (it != col_index.end()) return it->second;
    if (!create) throw MpsParseError("reference to undeclared column '" + name + "'", line_no);
    const Index j = static_cast<Index>(lp.col_names.size());
    col_index.emplace(name, j);
    lp.col_names.push_back(name);
    obj_coeffs.push_back(0.0);
    lower.push_back(0.0);
    upper.push_back(kInf);
    saw_lower.push_back(false);
    return j;
  }
};

void handleRowsLine(ParseState& st, const std::vector<std::string>& tokens, int line_no) {
  if (tokens.size() != 2 || tokens[0].size() != 1) {
    throw MpsParseError("expected '<sense> <row name>'", line_no);
  }
  const char sense = static_cast<char>(std::toupper(static_cast<unsigned char>(tokens[0][0])));
  const std::string& name = tokens[1];
  if (st.row_index.count(name) || name == st.objective_name || st.ignored_free_rows.count(name)) {
    throw MpsParseError("duplicate row '" + name + "'", line_no);
  }
  if (sense == 'N') {
    if (st.objective_name.empty()) {
      st.objective_name = name;
    } else {
      st.lp.warnings.push_back("additional free row '" + name + "' ignored");
      st.ignored_free_rows.insert(name);
    }
    return;
  }
  RowSense row_sense;
  switch (sense) {
    case 'L': row_sense = RowSense::kLe; break;
    case 'G': row_sense = RowSense::kGe; break;
    case 'E': row_sense = RowSense::kEq; break;
    default: throw MpsParseError(std::string("unknown row sense '") + sense + "'", line_no);
  }
  st.row_index.emplace(name, static_cast<Index>(st.lp.row_names.size()));
  st.lp.row_names.push_back(name);
  st.lp.senses.push_back(row_sense);
  st.rhs_values.push_back(0.0);
}

void handleColumnsLine(ParseState& st, const std::vector<std::string>& tokens, int line_no) {
  if (tokens.size() >= 3 && tokens[1] == "'MARKER'") {
    return;  // INTORG/INTEND: integrality is dropped for the LP relaxation
  }
  if (tokens.size() < 3 || tokens.size() % 2 == 0) {
    throw MpsParseError("expected '<column> <row> <value> [<row> <value>]'", line_no);
  }
  const Index j = st.column(tokens[0], line_no, /*create=*/true);
  for (size_t k = 1; k + 1 < tokens.size(); k += 2) {
    const std::string& row = tokens[k];
    const double value = parseNumber(tokens[k + 1], line_no);
    if (row == st.objective_name) {
      st.obj_coeffs[j] += value;
    } else if (st.ignored_free_rows.count(row)) {
      continue;
    } else {
      auto it = st.row_index.find(row);
      if (it == st.row_index.end()) {
        throw MpsParseError("reference to undeclared row '" + row + "'", line_no);
      }
      st.lp.entries.emplace_back(it->second, j, value);
    }
  }
}

void handleRhsLine(ParseState& st, const std::vector<std::string>& tokens, int line_no,
                   bool is_ranges) {
  // The set-name field is optional in the wild; an even token count means it
  // was omitted.
  size_t first = tokens.size() % 2 == 1 ? 1 : 0;
  if (tokens.size() < first + 2) throw MpsParseError("expected row/value pairs", line_no);
  for (size_t k = first; k + 1 < tokens.size(); k += 2) {
    const std::string& row = tokens[k];
    const double value = parseNumber(tokens[k + 1], line_no);
    if (row == st.objective_name) {
      if (is_ranges) {
        st.lp.warnings.push_back("range on objective row ignored");
      } else {
        st.lp.objective_offset = -value;
      }
      continue;
    }
    if (st.ignored_free_rows.count(row)) continue;
    auto it = st.row_index.find(row);
    if (it == st.row_index.end()) {
      throw MpsParseError("reference to undeclared row '" + row + "'", line_no);
    }
    if (is_ranges) {
      st.ranges.emplace_back(it->second, value);
    } else {
      st.rhs_values[it->second] = value;
    }
  }
}

void handleBoundsLine(ParseState& st, const std::vector<std::string>& tokens, int line_no) {
  if (tokens.empty()) return;
  const std::string type = upper(tokens[0]);
  const bool needs_value = type == "UP" || type == "LO" || type == "FX" || type == "UI" ||
                           type == "LI";
  const bool known = needs_value || type == "FR" || type == "MI" || type == "PL" || type == "BV";
  if (!known) throw MpsParseError("unknown bound type '" + tokens[0] + "'", line_no);

  std::string col_name;
  double value = 0.0;
  if (needs_value) {
    if (tokens.size() == 4) {
      col_name = tokens[2];
      value = parseNumber(tokens[3], line_no);
    } else if (tokens.size() == 3) {  // bound-set name omitted
      col_name = tokens[1];
      value = parseNumber(tokens[2], line_no);
    } else {
      throw MpsParseError("expected '<type> [<set>] <column> <value>'", line_no);
    }
  } else {
    if (tokens.size() == 3) {
      col_name = tokens[2];
    } else if (tokens.size() == 2) {
      col_name = tokens[1];
    } else {
      throw MpsParseError("expected '<type> [<set>] <column>'", line_no);
    }
  }
  const Index j = st.column(col_name, line_no, /*create=*/false);

  if (type == "UP" || type == "UI") {
    st.upper[j] = value;
    if (value < 0.0 && !st.saw_lower[j]) {
      // Historic convention: a negative upper bound with no explicit lower
      // implies the variable is unbounded below.
      st.lower[j] = -kInf;
      st.lp.warnings.push_back("negative UP bound on '" + col_name +
                               "' sets its lower bound to -inf");
    }
  } else if (type == "LO" || type == "LI") {
    st.lower[j] = value;
    st.saw_lower[j] = true;
  } else if (type == "FX") {
    st.lower[j] = value;
    st.upper[j] = value;
    st.saw_lower[j] = true;
  } else if (type == "FR") {
    st.lower[j] = -kInf;
    st.upper[j] = kInf;
    st.saw_lower[j] = true;
  } else if (type == "MI") {
    st.lower[j] = -kInf;
    st.saw_lower[j] = true;
  } else if (type == "PL") {
    st.upper[j] = kInf;
  } else if (type == "BV") {
    st.lower[j] = 0.0;
    st.upper[j] = 1.0;
    st.saw_lower[j] = true;
  }
}

void expandRanges(ParseState& st) {
  if (st.ranges.empty()) return;
  // Gather the coefficients of each ranged row once.
  std::unordered_map<Index, std::vector<std::pair<Index, double>>> row_entries;
  for (const auto& [row, value] : st.ranges) {
    (void)value;
    row_entries.emplace(row, std::vector<std::pair<Index, double>>{});
  }
  for (const Triplet& t : st.lp.entries) {
    auto it = row_entries.find(t.row());
    if (it != row_entries.end()) it->second.emplace_back(t.col(), t.value());
  }
  for (const auto& [row, value] : st.ranges) {
    if (value == 0.0) continue;
    const double b = st.rhs_values[row];
    double new_rhs = 0.0;
    RowSense new_sense = RowSense::kLe;
    switch (st.lp.senses[row]) {
      case RowSense::kLe:  // b - |r| <= ax <= b
        new_sense = RowSense::kGe;
        new_rhs = b - std::abs(value);
        break;
      case RowSense::kGe:  // b <= ax <= b + |r|
        new_sense = RowSense::kLe;
        new_rhs = b + std::abs(value);
        break;
      case RowSense::kEq:  // r > 0: [b, b + r]; r < 0: [b + r, b]
        st.lp.senses[row] = value > 0.0 ? RowSense::kGe : RowSense::kLe;
        new_sense = value > 0.0 ? RowSense::kLe : RowSense::kGe;
        new_rhs = b + value;
        break;
    }
    const Index new_row = static_cast<Index>(st.lp.row_names.size());
    st.lp.row_names.push_back(st.lp.row_names[row] + "_rng");
    st.lp.senses.push_back(new_sense);
    st.rhs_values.push_back(new_rhs);
    for (const auto& [col, coeff] : row_entries[row]) {
      st.lp.entries.emplace_back(new_row, col, coeff);
    }
  }
}

}  // namespace

void GeneralLp::validate() const {
  const size_t m = row_names.size();
  const size_t n = col_names.size();
  if (senses.size() != m || static_cast<size_t>(rhs.size()) != m) {
    throw InvalidInputError("GeneralLp: row sense/rhs count mismatch");
  }
  if (static_cast<size_t>(objective.size()) != n || static_cast<size_t>(lower.size()) != n ||
      static_cast<size_t>(upper.size()) != n) {
    throw InvalidInputError("GeneralLp: column vector size mismatch");
  }
  for (Index j = 0; j < static_cast<Index>(n); ++j) {
    if (!(lower[j] <= upper[j]) || lower[j] == kInf || upper[j] == -kInf) {
      throw InvalidInputError("GeneralLp: infeasible bounds on variable '" + col_names[j] + "'");
    }
  }
  for (const Triplet& t : entries) {
    if (t.row() < 0 || t.row() >= static_cast<Index>(m) || t.col() < 0 ||
        t.col() >= static_cast<Index>(n)) {
      throw InvalidInputError("GeneralLp: entry index out of range");
    }
  }
}

GeneralLp parseMps(std::istream& in) {
  ParseState st;
  Section section = Section::kNone;
  bool saw_endata = false;
  std::string line;
  int line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '*') continue;
    const bool is_header = line[0] != ' ' && line[0] != '\t';
    std::vector<std::string> tokens = tokenize(line);
    if (tokens.empty()) continue;

    if (is_header) {
      const std::string keyword = upper(tokens[0]);
      if (keyword == "NAME") {
        section = Section::kName;
        if (tokens.size() > 1) st.lp.name = tokens[1];
      } else if (keyword == "OBJSENSE") {
        section = Section::kObjsense;
        if (tokens.size() > 1 && upper(tokens[1]).substr(0, 3) == "MAX") {
          throw MpsParseError("OBJSENSE MAX is not supported", line_no);
        }
      } else if (keyword == "ROWS") {
        section = Section::kRows;
      } else if (keyword == "COLUMNS") {
        section = Section::kColumns;
      } else if (keyword == "RHS") {
        section = Section::kRhs;
      } else if (keyword == "RANGES") {
        section = Section::kRanges;
      } else if (keyword == "BOUNDS") {
        section = Section::kBounds;
      } else if (keyword == "ENDATA") {
        saw_endata = true;
        break;
      } else {
        throw MpsParseError("unknown section header '" + tokens[0] + "'", line_no);
      }
      continue;
    }

    switch (section) {
      case Section::kNone:
        throw MpsParseError("data before the first section header", line_no);
      case Section::kName:
        throw MpsParseError("unexpected data line after NAME", line_no);
      case Section::kObjsense:
        if (upper(tokens[0]).substr(0, 3) == "MAX") {
          throw MpsParseError("OBJSENSE MAX is not supported", line_no);
        }
        break;
      case Section::kRows:
        handleRowsLine(st, tokens, line_no);
        break;
      case Section::kColumns:
        handleColumnsLine(st, tokens, line_no);
        break;
      case Section::kRhs:
        handleRhsLine(st, tokens, line_no, /*is_ranges=*/false);
        break;
      case Section::kRanges:
        handleRhsLine(st, tokens, line_no, /*is_ranges=*/true);
        break;
      case Section::kBounds:
        handleBoundsLine(st, tokens, line_no);
        break;
    }
  }
  if (!saw_endata) st.lp.warnings.push_back("missing ENDATA");

  expandRanges(st);

  GeneralLp& lp = st.lp;
  const Index m = lp.numRows();
  const Index n = lp.numCols();
  lp.rhs = Eigen::Map<const Vector>(st.rhs_values.data(), m);
  lp.objective = Eigen::Map<const Vector>(st.obj_coeffs.data(), n);
  lp.lower = Eigen::Map<const Vector>(st.lower.data(), n);
  lp.upper = Eigen::Map<const Vector>(st.upper.data(), n);

  // Collapse duplicate coefficients and drop explicit zeros.
  const SparseMatrix collapsed = buildSparse(m, n, lp.entries);
  lp.entries.clear();
  for (Index outer = 0; outer < collapsed.outerSize(); ++outer) {
    for (SparseMatrix::InnerIterator it(collapsed, outer); it; ++it) {
      lp.entries.emplace_back(it.row(), it.col(), it.value());
    }
  }

  lp.validate();
  return lp;
}

GeneralLp readMpsFile(const std::string& path) {
  gzFile file = gzopen(path.c_str(), "rb");  // reads plain files transparently
  if (file == nullptr) {
    throw InvalidInputError("cannot open '" + path + "'");
  }
  std::string content;
  char buffer[1 << 16];
  int got = 0;
  while ((got = gzread(file, buffer, sizeof(buffer))) > 0) {
    content.append(buffer, static_cast<size_t>(got));
  }
  const bool read_error = got < 0;
  gzclose(file);
  if (read_error) {
    throw InvalidInputError("error while reading '" + path + "'");
  }
  std::istringstream stream(content);
  return parseMps(stream);
}

std::string writeMps(const GeneralLp& lp) {
  lp.validate();
  std::ostringstream out;
  out << std::setprecision(17);
  out << "NAME " << (lp.name.empty() ? "LP" : lp.name) << "\n";
  out << "ROWS\n N  OBJ\n";
  for (Index i = 0; i < lp.numRows(); ++i) {
    const char sense = lp.senses[i] == RowSense::kLe ? 'L'
                       : lp.senses[i] == RowSense::kGe ? 'G'
                                                       : 'E';
    out << " " << sense << "  " << lp.row_names[i] << "\n";
  }

  std::vector<std::vector<std::pair<Index, double>>> by_col(lp.numCols());
  for (const Triplet& t : lp.entries) by_col[t.col()].emplace_back(t.row(), t.value());

  out << "COLUMNS\n";
  for (Index j = 0; j < lp.numCols(); ++j) {
    const std::string& col = lp.col_names[j];
    bool wrote = false;
    if (lp.objective[j] != 0.0) {
      out << "    " << col << " OBJ " << lp.objective[j] << "\n";
      wrote = true;
    }
    for (const auto& [row, value] : by_col[j]) {
      out << "    " << col << " " << lp.row_names[row] << " " << value << "\n";
      wrote = true;
    }
    if (!wrote) out << "    " << col << " OBJ 0\n";  // register empty column
  }

  out << "RHS\n";
  if (lp.objective_offset != 0.0) {
    out << "    RHS OBJ " << -lp.objective_offset << "\n";
  }
  for (Index i = 0; i < lp.numRows(); ++i) {
    if (lp.rhs[i] != 0.0) out << "    RHS " << lp.row_names[i] << " " << lp.rhs[i] << "\n";
  }

  out << "BOUNDS\n";
  for (Index j = 0; j < lp.numCols(); ++j) {
    const std::string& col = lp.col_names[j];
    const double lo = lp.lower[j];
    const double up = lp.upper[j];
    if (lo == up) {
      out << " FX BND " << col << " " << lo << "\n";
      continue;
    }
    if (lo == -kInf && up == kInf) {
      out << " FR BND " << col << "\n";
      continue;
    }
    if (lo == -kInf) {
      out << " MI BND " << col << "\n";
    } else if (lo != 0.0) {
      out << " LO BND " << col << " " << lo << "\n";
    }
    if (up != kInf) {
      out << " UP BND " << col << " " << up << "\n";
    }
  }
  out << "ENDATA\n";
  return out.str();
}

}  // namespace opdhg
