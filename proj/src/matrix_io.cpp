#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "nhvqe/errors.hpp"
#include "nhvqe/matrix.hpp"

namespace nhvqe {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(std::size_t row, std::size_t col, const std::string& why) {
  throw Error(ErrorCode::ParseError,
              "entry (" + std::to_string(row) + ", " + std::to_string(col) + "): " + why);
}

double parse_real(std::string_view s, bool& ok) {
  ok = false;
  if (s.empty()) return 0.0;
  std::string buf(s);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(buf, &used);
  } catch (const std::exception&) {
    return 0.0;
  }
  ok = used == buf.size() && std::isfinite(v);
  return v;
}

// Accepts "a", "bi", "a+bi", "a-bi", "i", "-i" with optional whitespace.
bool parse_complex_text(std::string_view text, Complex& out) {
  std::string s;
  for (char ch : text)
    if (ch != ' ' && ch != '\t') s.push_back(ch);
  if (s.empty()) return false;
  if (s.back() != 'i' && s.back() != 'j') {
    bool ok = false;
    const double re = parse_real(s, ok);
    out = Complex(re, 0.0);
    return ok;
  }
  s.pop_back();
  // split at the last sign that is not part of an exponent or the leading sign
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  std::string re_part = split == std::string::npos ? "" : s.substr(0, split);
  std::string im_part = split == std::string::npos ? s : s.substr(split);
  if (im_part.empty() || im_part == "+") im_part = "1";
  if (im_part == "-") im_part = "-1";
  bool ok_im = false;
  const double im = parse_real(im_part, ok_im);
  double re = 0.0;
  bool ok_re = true;
  if (!re_part.empty()) re = parse_real(re_part, ok_re);
  out = Complex(re, im);
  return ok_re && ok_im;
}

Complex parse_entry(const json& e, std::size_t row, std::size_t col) {
  if (e.is_object()) {
    if (!e.contains("re") || !e.contains("im")) parse_fail(row, col, "object needs 're' and 'im'");
    if (!e["re"].is_number() || !e["im"].is_number()) parse_fail(row, col, "'re'/'im' must be numbers");
    const Complex z(e["re"].get<double>(), e["im"].get<double>());
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) parse_fail(row, col, "non-finite value");
    return z;
  }
  if (e.is_number()) return Complex(e.get<double>(), 0.0);
  if (e.is_string()) {
    Complex z;
    const auto s = e.get<std::string>();
    if (!parse_complex_text(s, z)) parse_fail(row, col, "invalid complex literal '" + s + "'");
    return z;
  }
  parse_fail(row, col, "unsupported entry type");
}

}  // namespace

MatrixRecord parse_matrix_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_array()) {
    throw Error(ErrorCode::ParseError, "expected object with an 'entries' array");
  }
  const auto& rows = doc["entries"];
  const std::size_t d = rows.size();
  if (d == 0) throw Error(ErrorCode::DimensionMismatch, "empty matrix");
  if (doc.contains("dim")) {
    if (!doc["dim"].is_number_integer() || doc["dim"].get<long long>() != static_cast<long long>(d)) {
      throw Error(ErrorCode::DimensionMismatch, "'dim' does not match the number of rows");
    }
  }
  std::vector<Complex> entries;
  entries.reserve(d * d);
  for (std::size_t r = 0; r < d; ++r) {
    if (!rows[r].is_array()) parse_fail(r, 0, "row is not an array");
    if (rows[r].size() != d) {
      throw Error(ErrorCode::DimensionMismatch,
                  "row " + std::to_string(r) + " has " + std::to_string(rows[r].size()) +
                      " entries, expected " + std::to_string(d));
    }
    for (std::size_t c = 0; c < d; ++c) entries.push_back(parse_entry(rows[r][c], r, c));
  }
  MatrixRecord rec;
  rec.name = doc.value("name", std::string("matrix"));
  rec.matrix = DenseMatrix(d, std::move(entries));
  return rec;
}

std::string format_matrix_json(const MatrixRecord& record) {
  const auto& m = record.matrix;
  json rows = json::array();
  for (std::size_t r = 0; r < m.dim(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.dim(); ++c) row.push_back({{"re", m(r, c).real()}, {"im", m(r, c).imag()}});
    rows.push_back(std::move(row));
  }
  json doc = {{"name", record.name}, {"dim", m.dim()}, {"entries", std::move(rows)}};
  return doc.dump(2) + "\n";
}

MatrixRecord load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_matrix_json(buf.str());
}

void save_matrix(const MatrixRecord& record, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << format_matrix_json(record);
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace nhvqe
