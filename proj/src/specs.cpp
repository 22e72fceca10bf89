#include "carnot/specs.hpp"

#include <cctype>
#include <sstream>

#include "carnot/contact.hpp"

namespace carnot {

namespace {

class PolyParser {
 public:
  PolyParser(const std::string& s, int n) : s_(s), n_(n) {}

  Poly parse() {
    Poly p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("polynomial '" + s_ + "' at column " + std::to_string(pos_ + 1) + ": " + what);
  }
  std::string digits() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a number");
    return s_.substr(start, pos_ - start);
  }

  Poly expr() {
    Poly p = term();
    for (;;) {
      if (eat('+')) {
        p += term();
      } else if (eat('-')) {
        p -= term();
      } else {
        return p;
      }
    }
  }
  Poly term() {
    Poly p = unary();
    while (eat('*')) p = p * unary();
    return p;
  }
  Poly unary() {
    if (eat('-')) return Poly::constant(n_, -1) * unary();
    if (eat('+')) return unary();
    Poly b = primary();
    if (eat('^')) {
      skip();
      const int k = std::stoi(digits());
      Poly r = Poly::constant(n_, 1);
      for (int i = 0; i < k; ++i) r = r * b;
      return r;
    }
    return b;
  }
  Poly primary() {
    skip();
    if (eat('(')) {
      Poly p = expr();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    if (pos_ < s_.size() && s_[pos_] == 'x') {
      ++pos_;
      const int i = std::stoi(digits());
      if (i < 1 || i > n_) fail("variable index out of range");
      return Poly::variable(n_, i - 1);
    }
    std::string num = digits();
    if (pos_ < s_.size() && s_[pos_] == '/') {
      ++pos_;
      num += "/" + digits();
    }
    return Poly::constant(n_, parse_rational(num));
  }

  const std::string& s_;
  int n_;
  std::size_t pos_ = 0;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

int parse_index(const std::string& s, int n, const std::string& spec) {
  try {
    std::size_t used = 0;
    const int i = std::stoi(s, &used);
    if (used == s.size() && i >= 1 && i <= n) return i - 1;
  } catch (const std::exception&) {
  }
  throw ParseError("bad index '" + s + "' in '" + spec + "' (expected 1.." + std::to_string(n) + ")");
}

std::vector<Poly> parse_list(const std::string& body, int n, const std::string& spec) {
  const auto parts = split(body, ';');
  if (int(parts.size()) != n) throw ParseError("'" + spec + "' needs " + std::to_string(n) + " components separated by ';'");
  std::vector<Poly> out;
  for (const auto& p : parts) out.push_back(parse_polynomial(p, n));
  return out;
}

Rational parse_scalar(const std::string& s, const std::string& spec) {
  try {
    return parse_rational(s);
  } catch (const Error&) {
    throw ParseError("bad number '" + s + "' in '" + spec + "'");
  }
}

NumericMap parse_single_map(const CarnotGroup& G, const std::string& spec) {
  const int n = G.dim();
  if (spec == "identity") return identity_numeric(n);
  if (spec.rfind("left:", 0) == 0) {
    const auto parts = split(spec.substr(5), ',');
    if (int(parts.size()) != n) throw ParseError("'" + spec + "' needs " + std::to_string(n) + " coordinates");
    std::vector<Rational> a;
    for (const auto& p : parts) a.push_back(parse_scalar(p, spec));
    auto f = numeric_map(G.left_translation(a));
    f.label = spec;
    return f;
  }
  if (spec.rfind("dilation:", 0) == 0) {
    const Rational t = parse_scalar(spec.substr(9), spec);
    if (t <= 0) throw ParseError("dilation factor must be positive in '" + spec + "'");
    auto f = numeric_map(G.dilation(t));
    f.label = spec;
    return f;
  }
  if (spec.rfind("flow:", 0) == 0) {
    const auto cut = spec.rfind(':');
    if (cut <= 5) throw ParseError("'" + spec + "' needs flow:<field>:<time>");
    const auto field = parse_field_spec(G, spec.substr(5, cut - 5));
    double t = 0.0;
    try {
      t = std::stod(spec.substr(cut + 1));
    } catch (const std::exception&) {
      throw ParseError("bad flow time in '" + spec + "'");
    }
    auto f = flow_map(flow_spec(field, spec.substr(5, cut - 5)), t);
    f.label = spec;
    return f;
  }
  throw ParseError("unknown map spec '" + spec + "' (identity, left:a1,..., dilation:t, flow:<field>:<t>)");
}

}  // namespace

Poly parse_polynomial(const std::string& text, int n) { return PolyParser(text, n).parse(); }

PolyVectorField parse_field_spec(const CarnotGroup& G, const std::string& spec) {
  const int n = G.dim();
  if (spec == "dilation") return G.dilation_generator();
  if (spec.rfind("right:", 0) == 0) return G.right_frame()[parse_index(spec.substr(6), n, spec)];
  if (spec.rfind("left:", 0) == 0) return G.left_frame()[parse_index(spec.substr(5), n, spec)];
  if (spec.rfind("poly:", 0) == 0) return PolyVectorField(parse_list(spec.substr(5), n, spec));
  if (spec.rfind("frame:", 0) == 0) return G.from_frame_coefficients(parse_list(spec.substr(6), n, spec));
  if (spec.rfind("kernel:", 0) == 0) {
    const auto parts = split(spec.substr(7), ':');
    if (parts.size() != 2) throw ParseError("'" + spec + "' needs kernel:D:i");
    const int D = int(parse_scalar(parts[0], spec).get_d());
    if (parse_scalar(parts[0], spec) != D || D < 0 || D > 16) throw ParseError("bad degree in '" + spec + "'");
    const auto sol = solve_contact_fields(G, D);
    return sol.basis[parse_index(parts[1], int(sol.basis.size()), spec)];
  }
  throw ParseError("unknown field spec '" + spec + "' (right:i, left:i, dilation, kernel:D:i, poly:..., frame:...)");
}

NumericMap parse_map_spec(const CarnotGroup& G, const std::string& spec) {
  const auto parts = split(spec, '@');
  if (parts.empty()) throw ParseError("empty map spec");
  NumericMap f = parse_single_map(G, parts.back());
  for (int i = int(parts.size()) - 2; i >= 0; --i) f = compose(parse_single_map(G, parts[i]), f);
  f.label = spec;
  return f;
}

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> out;
  for (const auto& p : split(text, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(p, &used));
      if (used != p.size()) throw std::invalid_argument(p);
    } catch (const std::exception&) {
      throw ParseError("bad coordinate '" + p + "' in '" + text + "'");
    }
  }
  return out;
}

}  // namespace carnot
