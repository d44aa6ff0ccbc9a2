#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "dhtwin/error.hpp"
#include "dhtwin/lp.hpp"
#include "dhtwin/timeseries.hpp"

namespace dhtwin {

namespace {

std::string num(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  return format_double(v);
}

double parse_num(const std::string& s, int line) {
  if (s == "inf" || s == "+inf") return kInf;
  if (s == "-inf") return -kInf;
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw Error(Errc::ParseError, "line " + std::to_string(line) + ": bad number '" + s + "'");
  return v;
}

Term parse_term(const std::string& s, int line) {
  const auto colon = s.find(':');
  if (colon == std::string::npos)
    throw Error(Errc::ParseError, "line " + std::to_string(line) + ": expected j:coef");
  int j = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + colon, j);
  if (ec != std::errc{} || p != s.data() + colon)
    throw Error(Errc::ParseError, "line " + std::to_string(line) + ": bad index");
  return {j, parse_num(s.substr(colon + 1), line)};
}

std::string_view rel_name(Relation r) {
  return r == Relation::LE ? "LE" : r == Relation::GE ? "GE" : "EQ";
}

}  // namespace

void write_lp(const LpProblem& p, std::ostream& out) {
  out << "lp " << p.num_vars << ' ' << p.constraints.size() << '\n';
  out << "obj";
  for (int j = 0; j < p.num_vars; ++j)
    if (p.objective[j] != 0.0) out << ' ' << j << ':' << num(p.objective[j]);
  out << '\n';
  for (const auto& c : p.constraints) {
    out << "row " << rel_name(c.relation) << ' ' << num(c.rhs);
    for (const auto& t : c.row) out << ' ' << t.var << ':' << num(t.coef);
    out << '\n';
  }
  for (int j = 0; j < p.num_vars; ++j) {
    const auto b = p.bounds[j];
    if (b.lower != 0.0 || b.upper != kInf)
      out << "bound " << j << ' ' << num(b.lower) << ' ' << num(b.upper) << '\n';
  }
  bool any_binary = false;
  for (int j = 0; j < p.num_vars; ++j) {
    if (p.integrality[j] != VarType::binary) continue;
    out << (any_binary ? " " : "binary ") << j;
    any_binary = true;
  }
  if (any_binary) out << '\n';
  out << "end\n";
}

LpProblem read_lp(std::istream& in) {
  LpProblem p;
  std::string line;
  int lineno = 0;
  bool have_header = false;
  std::size_t expected_rows = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw == "lp") {
      int n = 0;
      ls >> n >> expected_rows;
      if (!ls || n < 0) throw Error(Errc::ParseError, "bad 'lp' header");
      p = LpProblem(n);
      have_header = true;
      continue;
    }
    if (!have_header) throw Error(Errc::ParseError, "missing 'lp' header");
    std::string tok;
    if (kw == "obj") {
      while (ls >> tok) {
        const auto t = parse_term(tok, lineno);
        if (t.var < 0 || t.var >= p.num_vars)
          throw Error(Errc::ParseError, "objective index out of range");
        p.objective[t.var] = t.coef;
      }
    } else if (kw == "row") {
      std::string rel, rhs;
      ls >> rel >> rhs;
      Constraint c;
      if (rel == "LE") c.relation = Relation::LE;
      else if (rel == "GE") c.relation = Relation::GE;
      else if (rel == "EQ") c.relation = Relation::EQ;
      else throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": bad relation");
      c.rhs = parse_num(rhs, lineno);
      while (ls >> tok) c.row.push_back(parse_term(tok, lineno));
      p.constraints.push_back(std::move(c));
    } else if (kw == "bound") {
      int j = -1;
      std::string lo, hi;
      ls >> j >> lo >> hi;
      if (!ls || j < 0 || j >= p.num_vars)
        throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": bad bound");
      p.bounds[j] = {parse_num(lo, lineno), parse_num(hi, lineno)};
    } else if (kw == "binary") {
      int j = -1;
      while (ls >> j) {
        if (j < 0 || j >= p.num_vars) throw Error(Errc::ParseError, "binary index out of range");
        p.integrality[j] = VarType::binary;
      }
    } else if (kw == "end") {
      break;
    } else {
      throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": unknown keyword '" + kw + "'");
    }
  }
  if (!have_header) throw Error(Errc::ParseError, "missing 'lp' header");
  if (p.constraints.size() != expected_rows)
    throw Error(Errc::ParseError, "row count differs from header");
  p.validate();
  return p;
}

}  // namespace dhtwin
