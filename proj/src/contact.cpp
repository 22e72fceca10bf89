#include "carnot/contact.hpp"

#include <algorithm>
#include <tuple>

#include "carnot/linsolve.hpp"

namespace carnot {

std::vector<ContactEquation> contact_equations(const CarnotGroup& G) {
  const auto& A = G.algebra();
  std::vector<ContactEquation> eqs;
  for (int j = 0; j < A.layer_dim(1); ++j) {
    for (int t = A.layer_dim(1); t < A.dim(); ++t) eqs.push_back({j, t});
  }
  return eqs;
}

std::vector<Poly> contact_residual(const CarnotGroup& G, const PolyVectorField& Z) {
  const auto& A = G.algebra();
  const auto z = G.frame_coefficients(Z);
  std::vector<Poly> out;
  for (const auto& [j, t] : contact_equations(G)) {
    Poly r = G.left_frame()[j].apply(z[t]);
    const int l = A.layer_of(t);
    for (int r_idx = A.layer_offset(l - 1); r_idx < A.layer_offset(l - 1) + A.layer_dim(l - 1); ++r_idx) {
      const Rational alpha = A.structure_constant(r_idx, j, t);
      if (!is_zero(alpha)) r -= z[r_idx] * alpha;
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<Poly> bracket_residual(const CarnotGroup& G, const PolyVectorField& Z) {
  std::vector<std::vector<Poly>> coeffs;
  for (int j = 0; j < G.algebra().layer_dim(1); ++j) {
    coeffs.push_back(G.frame_coefficients(lie_bracket(Z, G.left_frame()[j])));
  }
  std::vector<Poly> out;
  for (const auto& [j, t] : contact_equations(G)) out.push_back(coeffs[j][t] * Rational(-1));
  return out;
}

bool is_contact(const CarnotGroup& G, const PolyVectorField& Z) {
  for (const auto& r : contact_residual(G, Z)) {
    if (!r.is_zero()) return false;
  }
  return true;
}

namespace {

struct Column {
  int a;
  Monomial m;
};

// Assembles the contact equations for unknown fields sum_c u_c * m_c X_{a_c} and
// returns the echelon form; the column order is the order of `cols`.
EchelonForm assemble(const CarnotGroup& G, const std::vector<Column>& cols, long* equations) {
  const auto& A = G.algebra();
  const int d1 = A.layer_dim(1);
  // rows keyed by (j, target, monomial)
  std::map<std::tuple<int, int, Monomial>, SparseRow> rows;
  for (int c = 0; c < int(cols.size()); ++c) {
    const auto& [a, m] = cols[c];
    const Poly mono = Poly::monomial(m, Rational(1));
    const int la = A.layer_of(a);
    for (int j = 0; j < d1; ++j) {
      // X_j(z_a) term of equation (j, a)
      if (la >= 2) {
        const Poly image = G.left_frame()[j].apply(mono);
        for (const auto& [mm, q] : image.terms()) rows[{j, a, mm}].emplace_back(c, q);
      }
      // -z_a alpha^{la,1,t}_{a,j} enters equation (j, t) for t in layer la + 1
      if (la < A.step()) {
        for (const auto& [t, q] : A.bracket_basis(a, j)) rows[{j, t, m}].emplace_back(c, -q);
      }
    }
  }
  EchelonForm ef(int(cols.size()));
  long count = 0;
  for (auto& [key, row] : rows) {
    std::sort(row.begin(), row.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    SparseRow merged;
    for (auto& [c, q] : row) {
      if (!merged.empty() && merged.back().first == c) {
        merged.back().second += q;
        if (is_zero(merged.back().second)) merged.pop_back();
      } else {
        merged.emplace_back(c, q);
      }
    }
    if (merged.empty()) continue;
    ++count;
    ef.add_row(std::move(merged));
  }
  if (equations) *equations += count;
  return ef;
}

std::vector<PolyVectorField> kernel_fields(const CarnotGroup& G, const std::vector<Column>& cols, EchelonForm& ef) {
  const int n = G.dim();
  std::vector<PolyVectorField> out;
  for (const auto& v : ef.kernel()) {
    std::vector<Poly> z(n, Poly(n));
    for (int c = 0; c < int(cols.size()); ++c) {
      if (!is_zero(v[c])) z[cols[c].a].add_term(cols[c].m, v[c]);
    }
    out.push_back(G.from_frame_coefficients(z));
  }
  return out;
}

std::vector<Column> columns_of_order(const CarnotGroup& G, int k) {
  std::vector<Column> cols;
  for (int a = 0; a < G.dim(); ++a) {
    const int deg = G.weights()[a] + k;
    if (deg < 0) continue;
    for (auto& m : monomials_of_weighted_degree(G.weights(), deg)) cols.push_back({a, std::move(m)});
  }
  return cols;
}

}  // namespace

std::vector<PolyVectorField> solve_contact_order(const CarnotGroup& G, int k, long* unknowns, long* equations) {
  const auto cols = columns_of_order(G, k);
  if (unknowns) *unknowns += long(cols.size());
  if (cols.empty()) return {};
  EchelonForm ef = assemble(G, cols, equations);
  return kernel_fields(G, cols, ef);
}

ContactSolution solve_contact_fields(const CarnotGroup& G, int D) {
  if (D < 0) throw PreconditionError("solve_contact_fields: degree bound must be >= 0");
  ContactSolution sol;
  sol.degree = D;
  int cumulative = 0;
  for (int k = -G.step(); k <= D; ++k) {
    auto fields = solve_contact_order(G, k, &sol.unknowns, &sol.equations);
    sol.graded_dimension[k] = int(fields.size());
    cumulative += int(fields.size());
    for (auto& f : fields) {
      sol.basis.push_back(std::move(f));
      sol.order.push_back(k);
    }
    if (k >= 0) sol.dimension[k] = cumulative;
  }
  return sol;
}

int ungraded_kernel_dimension(const CarnotGroup& G, int D) {
  std::vector<Column> cols;
  for (int a = 0; a < G.dim(); ++a) {
    for (int deg = 0; deg <= G.weights()[a] + D; ++deg) {
      for (auto& m : monomials_of_weighted_degree(G.weights(), deg)) cols.push_back({a, std::move(m)});
    }
  }
  EchelonForm ef = assemble(G, cols, nullptr);
  return ef.ncols() - ef.rank();
}

namespace {

// Flattens fields into sparse rows over a shared (component, monomial) column map.
SparseRow field_row(const PolyVectorField& Z, std::map<std::pair<int, Monomial>, int>& index) {
  SparseRow row;
  for (int i = 0; i < Z.dim(); ++i) {
    for (const auto& [m, q] : Z[i].terms()) {
      auto [it, inserted] = index.try_emplace({i, m}, int(index.size()));
      row.emplace_back(it->second, q);
    }
  }
  std::sort(row.begin(), row.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  return row;
}

}  // namespace

bool in_span(const std::vector<PolyVectorField>& basis, const PolyVectorField& Z) {
  std::map<std::pair<int, Monomial>, int> index;
  std::vector<SparseRow> rows;
  for (const auto& b : basis) rows.push_back(field_row(b, index));
  SparseRow target = field_row(Z, index);
  EchelonForm ef(int(index.size()));
  for (auto& r : rows) ef.add_row(std::move(r));
  return ef.in_row_space(std::move(target));
}

int rank_of_fields(const std::vector<PolyVectorField>& fields) {
  std::map<std::pair<int, Monomial>, int> index;
  std::vector<SparseRow> rows;
  for (const auto& b : fields) rows.push_back(field_row(b, index));
  EchelonForm ef(int(index.size()));
  for (auto& r : rows) ef.add_row(std::move(r));
  return ef.rank();
}

ProbeReport rigidity_probe(const CarnotGroup& G, int Dmax) {
  if (Dmax < G.step()) throw PreconditionError("rigidity_probe: Dmax must be at least the step");
  ProbeReport rep;
  const auto sol = solve_contact_fields(G, Dmax);
  for (const auto& [D, dim] : sol.dimension) rep.table.emplace_back(D, dim);
  // first D0 with dim(D0) = dim(D0+1) = dim(D0+2) and constant up to Dmax
  for (std::size_t i = 0; i + 2 < rep.table.size(); ++i) {
    bool constant = true;
    for (std::size_t j = i + 1; j < rep.table.size(); ++j) constant = constant && rep.table[j].second == rep.table[i].second;
    if (constant) {
      rep.stabilized = true;
      rep.stable_dimension = rep.table[i].second;
      rep.since = rep.table[i].first;
      break;
    }
  }
  rep.verdict = rep.stabilized ? "stabilized at " + std::to_string(rep.stable_dimension) + " since degree " +
                                     std::to_string(rep.since)
                               : "growing";
  return rep;
}

}  // namespace carnot
