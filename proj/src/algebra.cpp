#include "carnot/algebra.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "carnot/linsolve.hpp"

namespace carnot {

std::string to_string(const BasisIndex& b) {
  return "(" + std::to_string(b.layer) + "," + std::to_string(b.slot) + ")";
}

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const ValidationCheck& ValidationReport::check(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw Error("no validation check named '" + name + "'");
}

AlgebraVector unit_vector(int n, int flat) {
  AlgebraVector v(n, Rational(0));
  v.at(flat) = 1;
  return v;
}

StratifiedLieAlgebra::StratifiedLieAlgebra(std::vector<int> strata_dims,
                                           const std::vector<BracketRelation>& relations,
                                           std::string name)
    : name_(std::move(name)), strata_(std::move(strata_dims)), raw_(relations) {
  if (strata_.empty()) throw PreconditionError("a stratified algebra needs at least one layer");
  int offset = 0;
  for (std::size_t l = 0; l < strata_.size(); ++l) {
    if (strata_[l] <= 0) throw PreconditionError("strata dimensions must be positive");
    offsets_.push_back(offset);
    for (int v = 0; v < strata_[l]; ++v) layer_of_.push_back(int(l) + 1);
    offset += strata_[l];
  }
  if (dim() > 31) throw PreconditionError("dimension above 31 is not supported");
  for (const auto& rel : relations) {
    int a = flat_index(rel.left);
    int b = flat_index(rel.right);
    if (a == b) continue;  // reported by validate()
    Rational sign = 1;
    if (a > b) {
      std::swap(a, b);
      sign = -1;
    }
    if (table_.count({a, b})) continue;  // duplicates are checked by validate()
    std::map<int, Rational> acc;
    for (const auto& [idx, c] : rel.value) acc[flat_index(idx)] += sign * c;
    SparseVector v;
    for (auto& [c, q] : acc) {
      if (!is_zero(q)) v.emplace_back(c, q);
    }
    if (!v.empty()) table_.emplace(std::make_pair(a, b), std::move(v));
  }
}

BasisIndex StratifiedLieAlgebra::basis_index(int flat) const {
  const int l = layer_of(flat);
  return {l, flat - offsets_[l - 1] + 1};
}

int StratifiedLieAlgebra::flat_index(const BasisIndex& b) const {
  if (b.layer < 1 || b.layer > step() || b.slot < 1 || b.slot > strata_[b.layer - 1]) {
    throw DimensionMismatch("basis index " + to_string(b) + " out of range");
  }
  return offsets_[b.layer - 1] + b.slot - 1;
}

SparseVector StratifiedLieAlgebra::bracket_basis(int a, int b) const {
  if (a == b) return {};
  const bool flip = a > b;
  auto it = table_.find(flip ? std::make_pair(b, a) : std::make_pair(a, b));
  if (it == table_.end()) return {};
  SparseVector v = it->second;
  if (flip) {
    for (auto& [c, q] : v) q = -q;
  }
  return v;
}

Rational StratifiedLieAlgebra::structure_constant(int a, int b, int c) const {
  for (const auto& [k, q] : bracket_basis(a, b)) {
    if (k == c) return q;
  }
  return 0;
}

int StratifiedLieAlgebra::homogeneous_dimension() const {
  int nu = 0;
  for (std::size_t l = 0; l < strata_.size(); ++l) nu += int(l + 1) * strata_[l];
  return nu;
}

AlgebraVector bracket(const StratifiedLieAlgebra& A, const AlgebraVector& x, const AlgebraVector& y) {
  return A.bracket(x, y);
}

AlgebraVector dilate_algebra(const StratifiedLieAlgebra& A, const Rational& t, const AlgebraVector& x) {
  return A.dilate(t, x);
}

int homogeneous_dimension(const StratifiedLieAlgebra& A) { return A.homogeneous_dimension(); }

namespace {

std::map<int, Rational> to_map(const SparseVector& v) {
  std::map<int, Rational> m;
  for (const auto& [c, q] : v) m[c] += q;
  return m;
}

std::map<int, Rational> bracket_sparse(const StratifiedLieAlgebra& A, const std::map<int, Rational>& x,
                                       const std::map<int, Rational>& y) {
  std::map<int, Rational> out;
  for (const auto& [a, xa] : x) {
    for (const auto& [b, yb] : y) {
      for (const auto& [c, q] : A.bracket_basis(a, b)) out[c] += xa * yb * q;
    }
  }
  for (auto it = out.begin(); it != out.end();) {
    it = is_zero(it->second) ? out.erase(it) : std::next(it);
  }
  return out;
}

std::string name_of(const StratifiedLieAlgebra& A, int flat) { return to_string(A.basis_index(flat)); }

}  // namespace

ValidationReport validate(const StratifiedLieAlgebra& A) {
  ValidationReport report;
  const int n = A.dim();
  const int s = A.step();

  // antisymmetry of the raw input: no self-brackets, duplicate pairs consistent
  {
    ValidationCheck check{"antisymmetry", true, ""};
    std::map<std::pair<int, int>, std::map<int, Rational>> seen;
    for (const auto& rel : A.relations()) {
      int a = A.flat_index(rel.left);
      int b = A.flat_index(rel.right);
      std::map<int, Rational> value;
      for (const auto& [idx, c] : rel.value) value[A.flat_index(idx)] += c;
      for (auto it = value.begin(); it != value.end();) {
        it = is_zero(it->second) ? value.erase(it) : std::next(it);
      }
      if (a == b) {
        if (!value.empty()) {
          check.passed = false;
          check.detail = "[" + name_of(A, a) + ", " + name_of(A, a) + "] is nonzero";
          break;
        }
        continue;
      }
      if (a > b) {
        std::swap(a, b);
        for (auto& [c, q] : value) q = -q;
      }
      auto [it, inserted] = seen.emplace(std::make_pair(a, b), value);
      if (!inserted && it->second != value) {
        check.passed = false;
        check.detail = "conflicting values for [" + name_of(A, a) + ", " + name_of(A, b) + "] and its reverse";
        break;
      }
    }
    report.checks.push_back(check);
  }

  // grading: [g_l, g_m] lands in g_{l+m}, zero past the last layer
  {
    ValidationCheck check{"grading", true, ""};
    for (const auto& [pair, value] : A.table()) {
      const int target = A.layer_of(pair.first) + A.layer_of(pair.second);
      for (const auto& [c, q] : value) {
        if (target > s || A.layer_of(c) != target) {
          check.passed = false;
          check.detail = "[" + name_of(A, pair.first) + ", " + name_of(A, pair.second) + "] has a component on " +
                         name_of(A, c) + " outside layer " + std::to_string(target);
          break;
        }
      }
      if (!check.passed) break;
    }
    report.checks.push_back(check);
  }

  // Jacobi: [a,[b,c]] + [b,[c,a]] + [c,[a,b]] = 0 on all basis triples
  {
    ValidationCheck check{"jacobi", true, ""};
    for (int a = 0; a < n && check.passed; ++a) {
      for (int b = a + 1; b < n && check.passed; ++b) {
        for (int c = b + 1; c < n && check.passed; ++c) {
          std::map<int, Rational> ea{{a, 1}}, eb{{b, 1}}, ec{{c, 1}};
          auto sum = bracket_sparse(A, ea, to_map(A.bracket_basis(b, c)));
          for (const auto& [k, q] : bracket_sparse(A, eb, to_map(A.bracket_basis(c, a)))) sum[k] += q;
          for (const auto& [k, q] : bracket_sparse(A, ec, to_map(A.bracket_basis(a, b)))) sum[k] += q;
          for (const auto& [k, q] : sum) {
            if (!is_zero(q)) {
              check.passed = false;
              check.detail = "Jacobi sum nonzero on triple (" + name_of(A, a) + ", " + name_of(A, b) + ", " +
                             name_of(A, c) + ")";
              break;
            }
          }
        }
      }
    }
    report.checks.push_back(check);
  }

  // generation: iterated brackets of layer 1 span every deeper layer
  {
    ValidationCheck check{"generation", true, ""};
    std::vector<std::map<int, Rational>> current;
    for (int i = 0; i < A.layer_dim(1); ++i) current.push_back({{A.layer_offset(1) + i, Rational(1)}});
    for (int l = 2; l <= s; ++l) {
      std::vector<std::map<int, Rational>> next;
      for (int i = 0; i < A.layer_dim(1); ++i) {
        std::map<int, Rational> x{{A.layer_offset(1) + i, Rational(1)}};
        for (const auto& v : current) {
          auto w = bracket_sparse(A, x, v);
          if (!w.empty()) next.push_back(std::move(w));
        }
      }
      std::vector<std::vector<Rational>> dense;
      bool in_layer = true;
      for (const auto& w : next) {
        std::vector<Rational> d(n, Rational(0));
        for (const auto& [k, q] : w) {
          d[k] = q;
          if (A.layer_of(k) != l) in_layer = false;
        }
        dense.push_back(std::move(d));
      }
      const int r = rank_of(dense);
      if (!in_layer || r != A.layer_dim(l)) {
        check.passed = false;
        check.detail = "layer " + std::to_string(l) + " not generated: iterated brackets of layer 1 have rank " +
                       std::to_string(r) + ", layer dimension " + std::to_string(A.layer_dim(l));
        break;
      }
      current = std::move(next);
    }
    // brackets from layer s must vanish (covered by grading) -- nothing more to do
    report.checks.push_back(check);
  }
  return report;
}

// ---------------------------------------------------------------------------
// builtins

StratifiedLieAlgebra heisenberg(int k) {
  if (k < 1) throw PreconditionError("heisenberg(k) needs k >= 1");
  std::vector<BracketRelation> rel;
  for (int i = 1; i <= k; ++i) rel.push_back({{1, i}, {1, k + i}, {{{2, 1}, Rational(1)}}});
  return StratifiedLieAlgebra({2 * k, 1}, rel, k == 1 ? "heisenberg" : "heisenberg(" + std::to_string(k) + ")");
}

StratifiedLieAlgebra engel() {
  return StratifiedLieAlgebra({2, 1, 1},
                              {{{1, 1}, {1, 2}, {{{2, 1}, Rational(1)}}},
                               {{1, 1}, {2, 1}, {{{3, 1}, Rational(1)}}}},
                              "engel");
}

StratifiedLieAlgebra g235() {
  return StratifiedLieAlgebra({2, 1, 2},
                              {{{1, 1}, {1, 2}, {{{2, 1}, Rational(1)}}},
                               {{1, 1}, {2, 1}, {{{3, 1}, Rational(1)}}},
                               {{1, 2}, {2, 1}, {{{3, 2}, Rational(1)}}}},
                              "g235");
}

std::vector<HallElement> hall_basis(int rank, int step) {
  if (rank < 1 || step < 1) throw PreconditionError("free(m,s) needs m >= 1, s >= 1");
  std::vector<HallElement> basis;
  for (int g = 0; g < rank; ++g) basis.push_back({-1, -1, g, 1});
  for (int w = 2; w <= step; ++w) {
    const int existing = int(basis.size());
    for (int u = 0; u < existing; ++u) {
      for (int v = 0; v < u; ++v) {
        if (basis[u].weight + basis[v].weight != w) continue;
        // [u, v] with u > v; if u = [u1, u2] then u2 <= v
        if (basis[u].generator < 0 && basis[u].right > v) continue;
        basis.push_back({u, v, -1, w});
      }
    }
  }
  return basis;
}

std::string format_hall_element(const std::vector<HallElement>& basis, int i) {
  const auto& e = basis.at(i);
  if (e.generator >= 0) return "x" + std::to_string(e.generator + 1);
  return "[" + format_hall_element(basis, e.left) + "," + format_hall_element(basis, e.right) + "]";
}

namespace {

using Word = std::vector<int>;
using Assoc = std::map<Word, Rational>;

Assoc assoc_mul(const Assoc& a, const Assoc& b, int max_len) {
  Assoc r;
  for (const auto& [wa, ca] : a) {
    for (const auto& [wb, cb] : b) {
      if (int(wa.size() + wb.size()) > max_len) continue;
      Word w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      r[w] += ca * cb;
    }
  }
  for (auto it = r.begin(); it != r.end();) it = is_zero(it->second) ? r.erase(it) : std::next(it);
  return r;
}

Assoc commutator(const Assoc& a, const Assoc& b, int max_len) {
  Assoc r = assoc_mul(a, b, max_len);
  for (const auto& [w, c] : assoc_mul(b, a, max_len)) r[w] -= c;
  for (auto it = r.begin(); it != r.end();) it = is_zero(it->second) ? r.erase(it) : std::next(it);
  return r;
}

}  // namespace

StratifiedLieAlgebra free_nilpotent(int rank, int step) {
  const auto basis = hall_basis(rank, step);
  const int n = int(basis.size());
  std::vector<Assoc> expanded(n);
  for (int i = 0; i < n; ++i) {
    if (basis[i].generator >= 0) {
      expanded[i][{basis[i].generator}] = 1;
    } else {
      expanded[i] = commutator(expanded[basis[i].left], expanded[basis[i].right], step);
    }
  }
  std::vector<int> strata(step, 0);
  std::vector<int> slot(n);
  for (int i = 0; i < n; ++i) slot[i] = ++strata[basis[i].weight - 1];

  std::vector<BracketRelation> rel;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const int w = basis[a].weight + basis[b].weight;
      if (w > step) continue;
      Assoc target = commutator(expanded[a], expanded[b], step);
      if (target.empty()) continue;
      // express target in the Hall elements of weight w: kernel of [E | -target]
      std::vector<int> cols;
      for (int i = 0; i < n; ++i) {
        if (basis[i].weight == w) cols.push_back(i);
      }
      std::map<Word, SparseRow> rows;
      for (int j = 0; j < int(cols.size()); ++j) {
        for (const auto& [word, c] : expanded[cols[j]]) rows[word].emplace_back(j, c);
      }
      for (const auto& [word, c] : target) rows[word].emplace_back(int(cols.size()), -c);
      EchelonForm ef(int(cols.size()) + 1);
      for (auto& [word, row] : rows) ef.add_row(row);
      auto ker = ef.kernel();
      if (ker.size() != 1 || is_zero(ker.front().back())) {
        throw Error("Hall basis expansion failed for [" + format_hall_element(basis, a) + ", " +
                    format_hall_element(basis, b) + "]");
      }
      BracketRelation r{{basis[a].weight, slot[a]}, {basis[b].weight, slot[b]}, {}};
      const Rational scale = ker.front().back();
      for (int j = 0; j < int(cols.size()); ++j) {
        Rational c = ker.front()[j] / scale;
        if (!is_zero(c)) r.value.push_back({{w, slot[cols[j]]}, c});
      }
      rel.push_back(std::move(r));
    }
  }
  return StratifiedLieAlgebra(strata, rel, "free(" + std::to_string(rank) + "," + std::to_string(step) + ")");
}

StratifiedLieAlgebra builtin(const std::string& raw) {
  std::string name;
  for (char c : raw) {
    if (!std::isspace(static_cast<unsigned char>(c))) name.push_back(char(std::tolower(c)));
  }
  std::smatch m;
  if (name == "heisenberg") return heisenberg(1);
  if (std::regex_match(name, m, std::regex(R"(heisenberg\(?(\d+)\)?)"))) return heisenberg(std::stoi(m[1]));
  if (name == "engel") return engel();
  if (name == "g235" || name == "(2,3,5)") return g235();
  if (std::regex_match(name, m, std::regex(R"(free\((\d+),(\d+)\))"))) {
    return free_nilpotent(std::stoi(m[1]), std::stoi(m[2]));
  }
  throw ParseError("unknown builtin group '" + raw + "'");
}

// ---------------------------------------------------------------------------
// group-definition files

namespace {

class LineParser {
 public:
  LineParser(std::string_view text, int line) : s_(text), line_(line) {}

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= s_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  int integer() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    return std::stoi(std::string(s_.substr(start, pos_ - start)));
  }
  Rational rational() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '/')) ++pos_;
    if (start == pos_) fail("expected a coefficient");
    return parse_rational(s_.substr(start, pos_ - start));
  }
  BasisIndex index() {
    expect('(');
    BasisIndex b;
    b.layer = integer();
    expect(',');
    b.slot = integer();
    expect(')');
    return b;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw ParseError("line " + std::to_string(line_) + ": " + what + " near '" + std::string(s_.substr(pos_)) + "'");
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
  int line_;
};

}  // namespace

StratifiedLieAlgebra parse_group_file(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::optional<std::vector<int>> strata;
  std::vector<BracketRelation> rel;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    LineParser p(line, lineno);
    if (p.at_end()) continue;
    if (p.peek() == '[') {
      if (!strata) p.fail("bracket relation before 'strata = [...]' header");
      BracketRelation r;
      p.expect('[');
      r.left = p.index();
      p.expect(',');
      r.right = p.index();
      p.expect(']');
      p.expect('=');
      bool first = true;
      while (!p.at_end()) {
        Rational sign = 1;
        if (p.accept('+')) {
        } else if (p.accept('-')) {
          sign = -1;
        } else if (!first) {
          p.fail("expected '+' or '-'");
        }
        first = false;
        if (p.peek() == '(') {
          r.value.push_back({p.index(), sign});
          continue;
        }
        Rational c = p.rational();
        if (p.accept('*')) {
          r.value.push_back({p.index(), sign * c});
        } else if (is_zero(c) && p.at_end()) {
          break;  // "= 0"
        } else {
          p.fail("expected '*' after coefficient");
        }
      }
      if (first) p.fail("missing right-hand side");
      rel.push_back(std::move(r));
      continue;
    }
    // header: strata = [d1, ..., ds]
    std::smatch m;
    std::string trimmed = line;
    if (std::regex_match(trimmed, m, std::regex(R"(\s*strata\s*=\s*\[([0-9,\s]+)\]\s*)"))) {
      if (strata) p.fail("duplicate strata header");
      std::vector<int> dims;
      std::stringstream ss(m[1].str());
      std::string item;
      while (std::getline(ss, item, ',')) dims.push_back(std::stoi(item));
      strata = dims;
      continue;
    }
    p.fail("unrecognized line");
  }
  if (!strata) throw ParseError("missing 'strata = [...]' header");
  return StratifiedLieAlgebra(*strata, rel, name);
}

StratifiedLieAlgebra load_group(const std::string& path_or_builtin) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (fs::is_regular_file(path_or_builtin, ec)) {
    std::ifstream f(path_or_builtin);
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_group_file(buf.str(), fs::path(path_or_builtin).stem().string());
  }
  return builtin(path_or_builtin);
}

std::string format_group_file(const StratifiedLieAlgebra& A) {
  std::ostringstream os;
  os << "# " << A.name() << "\nstrata = [";
  for (std::size_t i = 0; i < A.strata().size(); ++i) os << (i ? "," : "") << A.strata()[i];
  os << "]\n";
  for (const auto& [pair, value] : A.table()) {
    os << "[ " << to_string(A.basis_index(pair.first)) << ", " << to_string(A.basis_index(pair.second)) << " ] =";
    bool first = true;
    for (const auto& [c, q] : value) {
      const bool neg = sgn(q) < 0;
      os << (first ? (neg ? " -" : " ") : (neg ? " - " : " + ")) << to_string(Rational(abs(q))) << "*"
         << to_string(A.basis_index(c));
      first = false;
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace carnot
