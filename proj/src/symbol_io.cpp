#include <sstream>

#include "crange/symbols.hpp"
#include "parse_util.hpp"

namespace crange {

namespace {

using detail::parse_complex;
using detail::trim;

Symbol parse_term(const std::string& term) {
  std::istringstream in(term);
  std::string keyword;
  in >> keyword;
  std::vector<Complex> args;
  for (std::string tok; in >> tok;) args.push_back(parse_complex(tok, "'" + term + "'"));

  auto expect = [&](std::size_t lo, std::size_t hi) {
    if (args.size() < lo || args.size() > hi) {
      throw ParseError("wrong number of parameters for '" + keyword + "' in '" + term + "'");
    }
  };

  try {
    if (keyword == "identity") {
      expect(0, 0);
      return Symbol::identity();
    }
    if (keyword == "blaschke") {
      if (args.size() < 2) throw ParseError("blaschke needs a rotation and at least one zero");
      return Symbol::blaschke(std::vector<Complex>(args.begin() + 1, args.end()), args[0]);
    }
    if (keyword == "poly") {
      if (args.size() < 2) throw ParseError("poly needs at least two coefficients");
      return Symbol::polynomial(args);
    }
    if (keyword == "moebius") {
      expect(1, 2);
      return Symbol::moebius(args[0], args.size() == 2 ? args[1] : Complex(1.0, 0.0));
    }
    if (keyword == "affine") {
      expect(1, 2);
      if (args[0].imag() != 0.0) throw ParseError("affine scale must be real");
      return Symbol::affine(args[0].real(), args.size() == 2 ? args[1] : Complex(0.0, 0.0));
    }
    if (keyword == "rotation") {
      expect(1, 1);
      if (args[0].imag() != 0.0) throw ParseError("rotation angle must be real");
      return Symbol::rotation(args[0].real());
    }
  } catch (const PreconditionError& e) {
    throw ParseError(std::string("invalid symbol '") + term + "': " + e.what());
  }
  throw ParseError("unknown symbol keyword '" + keyword + "'");
}

}  // namespace

Symbol parse_symbol(const std::string& record) {
  std::string body = trim(record);
  std::string label;
  if (const auto colon = body.find(':'); colon != std::string::npos) {
    label = trim(body.substr(0, colon));
    body = trim(body.substr(colon + 1));
    if (label.empty()) throw ParseError("empty label in '" + record + "'");
  }
  if (body.empty()) throw ParseError("empty symbol record");

  std::vector<std::string> terms;
  std::size_t start = 0;
  while (true) {
    const auto bar = body.find('|', start);
    terms.push_back(trim(body.substr(start, bar == std::string::npos ? bar : bar - start)));
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  for (const auto& t : terms) {
    if (t.empty()) throw ParseError("empty composition term in '" + record + "'");
  }

  // Leftmost term is outermost.
  Symbol result = parse_term(terms.back());
  for (auto it = terms.rbegin() + 1; it != terms.rend(); ++it) {
    try {
      result = Symbol::compose(parse_term(*it), result);
    } catch (const PreconditionError& e) {
      throw ParseError(std::string("invalid composition '") + body + "': " + e.what());
    }
  }
  if (!label.empty()) return result.with_label(label);
  if (terms.size() == 1 && terms[0] == "identity") return result;
  return result.with_label(body);
}

std::vector<Symbol> parse_symbol_list(const std::string& text) {
  std::vector<Symbol> out;
  std::istringstream in(text);
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    // ';' also separates records so that lists fit on a command line.
    std::istringstream records(line);
    for (std::string record; std::getline(records, record, ';');) {
      if (trim(record).empty()) continue;
      try {
        out.push_back(parse_symbol(record));
      } catch (const ParseError& e) {
        throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
      }
    }
  }
  return out;
}

std::string format_symbol(const Symbol& symbol) {
  if (symbol.label() == symbol.describe()) return symbol.describe();
  return symbol.label() + ": " + symbol.describe();
}

}  // namespace crange
