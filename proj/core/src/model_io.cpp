#include "mmc/model_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>
#include <vector>

#include "mmc/errors.hpp"
#include "mmc/format.hpp"

namespace mmc {
namespace {

constexpr std::string_view kMagic = "MMC-MODEL v1";

void write_rows(std::ostream& out, const DenseMatrix& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index k = 0; k < m.cols(); ++k) {
      if (k > 0) out << ' ';
      out << format_double(m(i, k));
    }
    out << '\n';
  }
}

std::vector<std::string> tokens_of(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

void read_rows(std::istream& in, const std::string& source, std::size_t& line_no, DenseMatrix& m) {
  std::string line;
  for (Index i = 0; i < m.rows(); ++i) {
    if (!std::getline(in, line)) throw ParseError(source, line_no + 1, "unexpected end of model");
    ++line_no;
    const auto tokens = tokens_of(line);
    if (static_cast<Index>(tokens.size()) != m.cols()) {
      throw ParseError(source, line_no,
                       "expected " + std::to_string(m.cols()) + " values, got " +
                           std::to_string(tokens.size()));
    }
    for (Index k = 0; k < m.cols(); ++k) {
      double value = 0.0;
      if (!parse_double(tokens[static_cast<std::size_t>(k)], value) || !std::isfinite(value)) {
        throw ParseError(source, line_no, "invalid number '" + tokens[static_cast<std::size_t>(k)] + "'");
      }
      m(i, k) = value;
    }
  }
}

}  // namespace

void write_model(std::ostream& out, const FactorPair& f) {
  out << kMagic << '\n';
  out << f.rows() << ' ' << f.cols() << ' ' << f.rank() << ' ' << format_double(f.lambda) << '\n';
  write_rows(out, f.u);
  write_rows(out, f.v);
}

FactorPair read_model(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line) || (++line_no, line != kMagic)) {
    throw ParseError(source, 1, "missing 'MMC-MODEL v1' header");
  }
  if (!std::getline(in, line)) throw ParseError(source, 2, "missing shape line");
  ++line_no;
  const auto head = tokens_of(line);
  long long p = 0;
  long long n = 0;
  long long d = 0;
  double lambda = 0.0;
  if (head.size() != 4) throw ParseError(source, line_no, "expected 'p n d lambda'");
  try {
    std::size_t used = 0;
    p = std::stoll(head[0], &used);
    if (used != head[0].size()) throw std::invalid_argument("p");
    n = std::stoll(head[1], &used);
    if (used != head[1].size()) throw std::invalid_argument("n");
    d = std::stoll(head[2], &used);
    if (used != head[2].size()) throw std::invalid_argument("d");
  } catch (const std::exception&) {
    throw ParseError(source, line_no, "invalid model dimensions");
  }
  if (!parse_double(head[3], lambda) || !(lambda > 0.0)) {
    throw ParseError(source, line_no, "lambda must be a positive number");
  }
  if (p < 1 || n < 1 || d < 1) throw ParseError(source, line_no, "model dimensions must be positive");

  FactorPair f;
  f.lambda = lambda;
  f.u.resize(p, d);
  f.v.resize(n, d);
  read_rows(in, source, line_no, f.u);
  read_rows(in, source, line_no, f.v);
  while (std::getline(in, line)) {
    ++line_no;
    if (!tokens_of(line).empty()) throw ParseError(source, line_no, "trailing data after model");
  }
  return f;
}

void save_model(const std::filesystem::path& path, const FactorPair& f) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write model '" + path.string() + "'");
  write_model(out, f);
  if (!out) throw InputError("failed writing model '" + path.string() + "'");
}

FactorPair load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open model '" + path.string() + "'");
  return read_model(in, path.string());
}

void write_trace_csv(std::ostream& out, const FitTrace& trace) {
  out << "iter,objective,step,unorm,vnorm\n";
  for (std::size_t t = 0; t < trace.iterations.size(); ++t) {
    const auto& r = trace.iterations[t];
    out << (t + 1) << ',' << format_double(r.objective) << ',' << format_double(r.step) << ','
        << format_double(r.u_norm) << ',' << format_double(r.v_norm) << '\n';
  }
}

}  // namespace mmc
